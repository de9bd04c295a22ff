// potential.hpp
// Double-well potentials with nondegenerate minima at -1 and +1, their
// validation, and the surface-tension constant of the sharp-interface limit.

#pragma once

#include <functional>
#include <string>
#include <vector>

namespace phaselab {

struct DoubleWell {
    std::function<double(double)> W;
    std::function<double(double)> dW;
    std::function<double(double)> d2W;
    std::string label;
};

struct WellValidationReport {
    bool ok = false;
    std::vector<std::string> violations;  // one entry per failed clause
};

// The symmetric quartic W(u) = (1 - u^2)^2 / 4.
DoubleWell quartic_well();

// Numerically checks the double-well conditions on a sampled grid:
// W(+-1) = 0, W > 0 away from +-1 on [-2,2], W''(+-1) > 0, and consistency
// of dW with W under central differences.
WellValidationReport validate_double_well(const DoubleWell& w, int samples);

// integral_{-1}^{1} sqrt(2 W(r)) dr, the per-area cost of a flat limit
// interface.  Adaptive quadrature to absolute tolerance 1e-8.
double surface_tension_constant(const DoubleWell& w);

}  // namespace phaselab
