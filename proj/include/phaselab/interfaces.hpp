// interfaces.hpp
// Measure-theoretic diagnostics of phase interfaces on sampled fields:
// per-radius phase densities, interface-band measures, the clean-ball
// search, slab-trapping flatness ratios and uniform level-set convergence.
// All measures are cell-counting: a cell qualifies when its center does.

#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "phaselab/geometry.hpp"
#include "phaselab/grid.hpp"
#include "phaselab/nonlocalfield.hpp"

namespace phaselab {

struct LevelSetStats {
    double theta1 = 0.0;  // center qualification level
    double theta2 = 0.0;  // phase level
    std::array<double, 2> center{0.0, 0.0};
    std::vector<double> radii;
    std::vector<double> above;         // |{u > theta2} cap B_r|
    std::vector<double> below;         // |{u < -theta2} cap B_r|
    std::vector<double> band;          // |{|u| <= theta2} cap B_r|
    std::vector<double> ball_measure;  // cell-counted |B_r|
    std::vector<double> above_ratio;   // above / r^n
    std::vector<double> below_ratio;
    double min_above_ratio = 0.0;
    double min_below_ratio = 0.0;

    void write_csv(std::ostream& os) const;
    std::string to_json() const;
};

LevelSetStats density_ratios(const Grid& g, const std::vector<double>& values,
                             double theta1, double theta2,
                             const std::vector<double>& radii,
                             std::array<double, 2> center);
LevelSetStats density_ratios(const Field& f, double theta1, double theta2,
                             const std::vector<double>& radii,
                             std::array<double, 2> center);
LevelSetStats density_ratios(const NonlocalField& f, double theta1, double theta2,
                             const std::vector<double>& radii,
                             std::array<double, 2> center);

struct BandRow {
    double radius = 0.0;
    double measure = 0.0;      // |{|u| < theta} cap B_r|
    double lower_bound = 0.0;  // (c_fit/2) eps r^{n-1}
    double upper_bound = 0.0;  // 2 C_fit eps r^{n-1}
    bool violation = false;
};

struct BandReport {
    double theta = 0.0;
    double eps = 0.0;
    std::array<double, 2> center{0.0, 0.0};
    double c_fit_lo = 0.0;  // min of measure / (eps r^{n-1}) over the radii
    double c_fit_hi = 0.0;  // max of the same ratio
    std::vector<BandRow> rows;

    void write_csv(std::ostream& os) const;
    std::string to_json() const;
};

// Requires |u(center)| < theta (the center must sit on the interface).
BandReport band_measure(const Field& f, double theta, const std::vector<double>& radii,
                        std::array<double, 2> center);

// Flat-interface prediction for measure / (eps r^{n-1}): the exact tanh band
// width 2 sqrt(2) artanh(theta) times the section factor of the ball.
double band_reference_constant(double theta, int dim);

struct CleanBallResult {
    double kappa_found = 0.0;  // 0 means failure
    bool found = false;
    std::array<double, 2> q_minus{0.0, 0.0};
    std::array<double, 2> q_plus{0.0, 0.0};
};

// Largest kappa in the grid such that pure-phase balls of radius kappa*r fit
// inside both {u < -theta} cap B_r and {u > theta} cap B_r.
CleanBallResult clean_ball_search(const Field& f, double theta, double r,
                                  std::array<double, 2> center,
                                  const std::vector<double>& kappa_grid);

struct TrappingRow {
    double radius = 0.0;
    double omega_angle = 0.0;  // direction of the best slab (radians; 0 or pi in 1D)
    double gamma = 0.0;        // slab half-width (gamma = r when never trapped)
    double flatness = 0.0;     // gamma / r
};

struct TrappingReport {
    double theta = 0.0;
    std::vector<TrappingRow> rows;

    void write_csv(std::ostream& os) const;
    std::string to_json() const;
};

// Minimal gamma over a 1-degree direction grid such that
//   {w.x <= -gamma} cap B_r subset {u <= -theta}  and
//   {u <= theta} cap B_r subset {w.x <= gamma}.
// theta must lie in (sqrt(3)/3, 1).
TrappingReport trapped_flatness(const Grid& g, const std::vector<double>& values,
                                double theta, const std::vector<double>& radii);
TrappingReport trapped_flatness(const Field& f, double theta,
                                const std::vector<double>& radii);

struct UniformConvergenceReport {
    std::vector<double> eps;
    std::vector<bool> pass;
    int first_pass_index = -1;       // -1 when no field passes
    bool monotone_persistence = false;  // all entries after the first pass also pass
};

// Checks {|u_eps| < theta} cap B_{r0} against the delta-neighborhood of the
// boundary of the limit set E, field by field.
UniformConvergenceReport uniform_convergence_check(const std::vector<Field>& fields,
                                                   const SetRegion& limit_set,
                                                   double theta, double r0, double delta);

}  // namespace phaselab
