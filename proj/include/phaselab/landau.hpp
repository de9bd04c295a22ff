// landau.hpp
// Quartic free-energy models of phase transitions: critical points, global
// minimizers, the free energy as a function of temperature with one-sided
// derivatives, latent heat and transition-order classification.

#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace phaselab {

// F(T, eta) = a0 + a2(T) eta^2 + a3(T) eta^3 + a4(T) eta^4.
// a4(T) must stay positive wherever the model is queried; symmetric models
// have a3 identically zero.
struct LandauModel {
    double a0 = 0.0;
    std::function<double(double)> a2;
    std::function<double(double)> a3;
    std::function<double(double)> a4;
    double Tc = 0.0;
    bool symmetric = false;
    std::string name;
};

// Built-in parameter sets.
LandauModel model_avpa();              // second-order: a2 = (T-2)/2, a4 = 1/4, a0 = 1/4
LandauModel model_bsntt6();            // first-order: a2 = 1, a3 = T-4 (T <= 5), a4 = 1
LandauModel model_bsntt6_degenerate(); // as above with a3 = (T-2)^3 - 2 (T <= 3)

enum class TransitionOrder { SecondOrder, FirstOrder, DegenerateFirstOrder };

const char* to_string(TransitionOrder t);

struct BifurcationRow {
    double T = 0.0;
    std::vector<double> minimizers;  // ascending
    double energy = 0.0;
};

struct BifurcationTable {
    std::vector<BifurcationRow> rows;  // strictly increasing in T

    // CSV header: T,minimizer_1,...,minimizer_k,energy; short rows padded
    // with empty fields.
    void write_csv(std::ostream& os) const;
    std::string to_json() const;
};

struct TemperatureEnergy {
    double E = 0.0;
    double dE_left = 0.0;
    double dE_right = 0.0;
};

double free_energy(const LandauModel& model, double T, double eta);

// All real roots of d/deta F(T, .) = 0, ascending, duplicates merged at
// 1e-12 relative tolerance.  Zero is always a root.
std::vector<double> critical_points(const LandauModel& model, double T);

// Critical points achieving the minimal energy within absolute tolerance tol;
// ties are reported as a set.
std::vector<double> global_minimizers(const LandauModel& model, double T,
                                      double tol = 1e-9);

// Energy at the global minimizer and its one-sided temperature derivatives
// (first-order differences with one Richardson refinement, h = 1e-5).
TemperatureEnergy free_energy_of_temperature(const LandauModel& model, double T);

// -Tc * (E'(Tc+) - E'(Tc-)).
double latent_heat(const LandauModel& model);

BifurcationTable bifurcation_scan(const LandauModel& model, double T_min,
                                  double T_max, int steps);

TransitionOrder classify_transition(const LandauModel& model);

}  // namespace phaselab
