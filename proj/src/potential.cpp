#include "phaselab/potential.hpp"

#include <cmath>

#include "phaselab/numerics.hpp"

namespace phaselab {

DoubleWell quartic_well() {
    DoubleWell w;
    w.W = [](double u) {
        const double q = 1.0 - u * u;
        return 0.25 * q * q;
    };
    w.dW = [](double u) { return u * u * u - u; };
    w.d2W = [](double u) { return 3.0 * u * u - 1.0; };
    w.label = "quartic";
    return w;
}

WellValidationReport validate_double_well(const DoubleWell& w, int samples) {
    if (samples < 100) throw ValidationError("validate_double_well: samples must be >= 100");
    WellValidationReport rep;
    const double zero_tol = 1e-12;

    if (std::abs(w.W(-1.0)) > zero_tol) rep.violations.push_back("W(-1) != 0");
    if (std::abs(w.W(1.0)) > zero_tol) rep.violations.push_back("W(1) != 0");
    if (!(w.d2W(-1.0) > 0.0)) rep.violations.push_back("W''(-1) <= 0");
    if (!(w.d2W(1.0) > 0.0)) rep.violations.push_back("W''(1) <= 0");

    // Positivity on [-2,2] away from the wells, sampled (never at +-1 exactly).
    bool positive = true;
    for (int i = 0; i <= samples; ++i) {
        const double u = -2.0 + 4.0 * static_cast<double>(i) / samples;
        if (std::abs(u - 1.0) < 1e-9 || std::abs(u + 1.0) < 1e-9) continue;
        if (!(w.W(u) > 0.0)) {
            positive = false;
            break;
        }
    }
    if (!positive) rep.violations.push_back("W not strictly positive away from -1, 1");

    // dW must match central differences of W.
    const double h = 1e-4;
    double worst = 0.0;
    for (int i = 0; i <= samples; ++i) {
        const double u = -2.0 + 4.0 * static_cast<double>(i) / samples;
        const double fd = (w.W(u + h) - w.W(u - h)) / (2.0 * h);
        const double err = std::abs(fd - w.dW(u)) / (1.0 + std::abs(w.dW(u)));
        worst = std::max(worst, err);
    }
    if (worst >= 1e-5) rep.violations.push_back("dW inconsistent with W (central differences)");

    rep.ok = rep.violations.empty();
    return rep;
}

double surface_tension_constant(const DoubleWell& w) {
    auto integrand = [&w](double r) {
        const double v = 2.0 * w.W(r);
        return v > 0.0 ? std::sqrt(v) : 0.0;
    };
    return num::integrate(integrand, -1.0, 1.0, 1e-8);
}

}  // namespace phaselab
