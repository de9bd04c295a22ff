#include "phaselab/landau.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "phaselab/numerics.hpp"

namespace phaselab {

namespace {

struct Coeffs {
    double a0, a2, a3, a4;
};

Coeffs eval_coeffs(const LandauModel& m, double T) {
    Coeffs c{m.a0, m.a2(T), m.symmetric ? 0.0 : m.a3(T), m.a4(T)};
    if (!std::isfinite(c.a2) || !std::isfinite(c.a3) || !std::isfinite(c.a4))
        throw ValidationError("landau: non-finite coefficient at T=" + std::to_string(T));
    if (!(c.a4 > 0.0))
        throw ValidationError("landau: a4(T) must be positive at T=" + std::to_string(T));
    return c;
}

double energy_of(const Coeffs& c, double eta) {
    return c.a0 + eta * eta * (c.a2 + eta * (c.a3 + eta * c.a4));
}

// Hausdorff distance between two nonempty sorted sets of reals.
double hausdorff(const std::vector<double>& a, const std::vector<double>& b) {
    auto one_sided = [](const std::vector<double>& p, const std::vector<double>& q) {
        double worst = 0.0;
        for (double x : p) {
            double best = std::numeric_limits<double>::infinity();
            for (double y : q) best = std::min(best, std::abs(x - y));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

LandauModel model_avpa() {
    LandauModel m;
    m.a0 = 0.25;
    m.a2 = [](double T) { return 0.5 * (T - 2.0); };
    m.a3 = [](double) { return 0.0; };
    m.a4 = [](double) { return 0.25; };
    m.Tc = 2.0;
    m.symmetric = true;
    m.name = "avpa";
    return m;
}

LandauModel model_bsntt6() {
    LandauModel m;
    m.a0 = 0.0;
    m.a2 = [](double) { return 1.0; };
    // The cubic coefficient is pinned to T - 4 up to T = 5; past that any
    // smooth increasing continuation below 2 works, matched in value and
    // slope at T = 5.
    m.a3 = [](double T) { return T <= 5.0 ? T - 4.0 : 2.0 - std::exp(5.0 - T); };
    m.a4 = [](double) { return 1.0; };
    m.Tc = 2.0;
    m.symmetric = false;
    m.name = "bsntt6";
    return m;
}

LandauModel model_bsntt6_degenerate() {
    LandauModel m;
    m.a0 = 0.0;
    m.a2 = [](double) { return 1.0; };
    m.a3 = [](double T) {
        if (T <= 3.0) {
            const double s = T - 2.0;
            return s * s * s - 2.0;
        }
        return 2.0 - 3.0 * std::exp(3.0 - T);  // value/slope matched at T = 3
    };
    m.a4 = [](double) { return 1.0; };
    m.Tc = 2.0;
    m.symmetric = false;
    m.name = "bsntt6-dege";
    return m;
}

const char* to_string(TransitionOrder t) {
    switch (t) {
        case TransitionOrder::SecondOrder: return "SecondOrder";
        case TransitionOrder::FirstOrder: return "FirstOrder";
        case TransitionOrder::DegenerateFirstOrder: return "DegenerateFirstOrder";
    }
    return "?";
}

double free_energy(const LandauModel& model, double T, double eta) {
    return energy_of(eval_coeffs(model, T), eta);
}

std::vector<double> critical_points(const LandauModel& model, double T) {
    const Coeffs c = eval_coeffs(model, T);
    // dF/deta = eta (2 a2 + 3 a3 eta + 4 a4 eta^2)
    std::vector<double> roots{0.0};
    const double qa = 4.0 * c.a4, qb = 3.0 * c.a3, qc = 2.0 * c.a2;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        // Stable quadratic formula: avoid cancellation in the smaller root.
        if (qb >= 0.0) {
            const double q = -0.5 * (qb + sq);
            roots.push_back(q / qa);
            if (q != 0.0) roots.push_back(qc / q);
        } else {
            const double q = -0.5 * (qb - sq);
            roots.push_back(q / qa);
            if (q != 0.0) roots.push_back(qc / q);
        }
    }
    // One Newton polish on the full derivative.
    for (double& r : roots) {
        if (r == 0.0) continue;
        const double g = r * (qc + r * (qb + r * qa));
        const double dg = qc + r * (2.0 * qb + 3.0 * qa * r);
        if (dg != 0.0) {
            const double rn = r - g / dg;
            if (std::isfinite(rn)) r = rn;
        }
    }
    std::sort(roots.begin(), roots.end());
    std::vector<double> merged;
    for (double r : roots) {
        if (!merged.empty() &&
            std::abs(r - merged.back()) <= 1e-12 * std::max(1.0, std::abs(r)))
            continue;
        merged.push_back(r);
    }
    return merged;
}

std::vector<double> global_minimizers(const LandauModel& model, double T, double tol) {
    if (!(tol > 0.0)) throw ValidationError("global_minimizers: tol must be positive");
    const std::vector<double> crit = critical_points(model, T);
    const Coeffs c = eval_coeffs(model, T);
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> energies;
    energies.reserve(crit.size());
    for (double eta : crit) {
        const double e = energy_of(c, eta);
        if (!std::isfinite(e)) throw ValidationError("global_minimizers: non-finite energy");
        energies.push_back(e);
        best = std::min(best, e);
    }
    std::vector<double> mins;
    for (std::size_t i = 0; i < crit.size(); ++i)
        if (energies[i] <= best + tol) mins.push_back(crit[i]);
    return mins;
}

TemperatureEnergy free_energy_of_temperature(const LandauModel& model, double T) {
    auto E = [&model](double t) {
        const std::vector<double> mins = global_minimizers(model, t);
        return free_energy(model, t, mins.front());
    };
    TemperatureEnergy out;
    out.E = E(T);
    out.dE_left = num::one_sided_derivative(E, T, -1);
    out.dE_right = num::one_sided_derivative(E, T, +1);
    return out;
}

double latent_heat(const LandauModel& model) {
    const TemperatureEnergy te = free_energy_of_temperature(model, model.Tc);
    return -model.Tc * (te.dE_right - te.dE_left);
}

BifurcationTable bifurcation_scan(const LandauModel& model, double T_min,
                                  double T_max, int steps) {
    if (!(T_min < T_max)) throw ValidationError("bifurcation_scan: need T_min < T_max");
    if (steps < 2) throw ValidationError("bifurcation_scan: need steps >= 2");
    BifurcationTable table;
    table.rows.reserve(steps);
    for (int i = 0; i < steps; ++i) {
        const double T = T_min + (T_max - T_min) * static_cast<double>(i) / (steps - 1);
        BifurcationRow row;
        row.T = T;
        row.minimizers = global_minimizers(model, T);
        row.energy = free_energy(model, T, row.minimizers.front());
        table.rows.push_back(std::move(row));
    }
    return table;
}

TransitionOrder classify_transition(const LandauModel& model) {
    // A discontinuous minimizer branch means the phases coexist tied exactly
    // at Tc, so the tie set there has positive diameter.  The one-sided probe
    // is kept as a fallback for models whose tie is not hit exactly; it
    // cannot stand alone because coefficients varying like (T - Tc)^3 change
    // by less than one ulp at Tc +- 1e-6.
    const std::vector<double> at_tc = global_minimizers(model, model.Tc);
    const double diameter = at_tc.back() - at_tc.front();
    const double dT = 1e-6;
    const std::vector<double> below = global_minimizers(model, model.Tc - dT);
    const std::vector<double> above = global_minimizers(model, model.Tc + dT);
    const bool jump =
        diameter > 1e-3 + 1e-9 || hausdorff(below, above) > 1e-3 + 1e-9;
    if (!jump) return TransitionOrder::SecondOrder;
    const TemperatureEnergy te = free_energy_of_temperature(model, model.Tc);
    if (std::abs(te.dE_left - te.dE_right) > 1e-4) return TransitionOrder::FirstOrder;
    return TransitionOrder::DegenerateFirstOrder;
}

void BifurcationTable::write_csv(std::ostream& os) const {
    std::size_t k = 0;
    for (const BifurcationRow& r : rows) k = std::max(k, r.minimizers.size());
    os << "T";
    for (std::size_t i = 1; i <= k; ++i) os << ",minimizer_" << i;
    os << ",energy\n";
    for (const BifurcationRow& r : rows) {
        os << format_double(r.T);
        for (std::size_t i = 0; i < k; ++i) {
            os << ',';
            if (i < r.minimizers.size()) os << format_double(r.minimizers[i]);
        }
        os << ',' << format_double(r.energy) << '\n';
    }
}

std::string BifurcationTable::to_json() const {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const BifurcationRow& r : rows) {
        nlohmann::ordered_json row;
        row["T"] = r.T;
        row["minimizers"] = r.minimizers;
        row["energy"] = r.energy;
        arr.push_back(std::move(row));
    }
    return arr.dump();
}

}  // namespace phaselab
