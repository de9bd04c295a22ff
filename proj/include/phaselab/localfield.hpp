// localfield.hpp
// Discretized gradient-plus-well energy, Allen-Cahn residuals, constrained
// energy descent, the 1D heteroclinic layer, the stability quadratic form and
// the sharp-interface limit probe.

#pragma once

#include <vector>

#include "phaselab/grid.hpp"
#include "phaselab/potential.hpp"

namespace phaselab {

// Trapezoid discretization of  integral( eps |grad u|^2 / 2 + Q W(u) / eps ).
// Gradients are forward differences on cells.
double energy_local(const Field& f, const DoubleWell& w);

// sup over interior nodes of | eps^2 Lap_h(u) - Q dW(u) |, 3/5-point stencil.
double residual_allen_cahn(const Field& f, const DoubleWell& w);

struct MinimizeOptions {
    int max_iters = 50000;
    double tol = 1e-6;       // stop when the Allen-Cahn residual drops below
    double step0 = 0.0;      // 0 = curvature-scaled default
    double armijo = 1e-4;
    bool record_trace = false;
};

struct MinimizeResult {
    Field field;
    double energy = 0.0;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> energy_trace;  // filled when record_trace is set
};

// Explicit energy descent with backtracking line search; boundary nodes stay
// fixed.  Accepted iterates never increase the energy.  Throws NumericError
// when the line search cannot make progress.
MinimizeResult minimize_local(const Field& f, const DoubleWell& w,
                              const MinimizeOptions& opts = {});

struct LayerProfile {
    std::vector<double> x;  // uniform abscissae
    std::vector<double> u;
};

// Heteroclinic of u'' = W'(u) with u(0) = 0, u(+-inf) = +-1, computed from
// the first integral u' = sqrt(2 W(u)).  The returned samples satisfy the
// second-order equation under central differences to within tol.
LayerProfile layer_profile_1d(const DoubleWell& w, double half_width, double tol);

// integral( |grad phi|^2 + W''(u) phi^2 ); phi must vanish on the boundary
// layer.
double stability_form(const Field& f, const DoubleWell& w,
                      const std::vector<double>& phi);

struct GammaProbeRow {
    double eps = 0.0;
    double energy = 0.0;
};

struct GammaProbeResult {
    std::vector<GammaProbeRow> rows;
    double limit_constant = 0.0;  // integral sqrt(2W) over [-1,1]
};

// 1D minimization on (-1/2, 1/2) with boundary data -1/+1 for each eps in a
// positive decreasing list; the grid is refined as eps shrinks so that the
// discretization bias decays along the list.
GammaProbeResult gamma_probe_local(const std::vector<double>& eps_list,
                                   const DoubleWell& w);

}  // namespace phaselab
