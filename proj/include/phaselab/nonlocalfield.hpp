// nonlocalfield.hpp
// Fractional Laplacian, Gagliardo energy over the cross-shaped interaction
// set, the rescaled long-range functional with its alpha-dependent gauge,
// nonlocal minimization and the transition scaling-law probe.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "phaselab/grid.hpp"
#include "phaselab/localfield.hpp"
#include "phaselab/potential.hpp"

namespace phaselab {

// Unnormalized kernel |x - y|^{-n-alpha}; homogeneity degree -n-alpha must
// stay inside (-n-2, -n), i.e. alpha in (0,2).
struct KernelAlpha {
    int n = 1;
    double alpha = 0.5;
};

KernelAlpha make_kernel(int n, double alpha);

// Order parameter on cells tiling the domain, with analytically prescribed
// exterior data.  Cell centers are the grid nodes; the domain spans half a
// cell beyond the extreme nodes on each side.
struct NonlocalField {
    Grid grid;
    std::vector<double> values;
    std::function<double(double, double)> exterior;  // must range in [-1, 1]
    double eps = 1.0;
    KernelAlpha kernel;

    double domain_lo() const { return grid.lo[0] - 0.5 * grid.h; }
    double domain_hi() const { return grid.hi()[0] + 0.5 * grid.h; }
};

// Cells tile (a, b) exactly.
NonlocalField nonlocal_line_field(double a, double b, int cells, double eps,
                                  const KernelAlpha& kernel,
                                  const std::function<double(double)>& init,
                                  const std::function<double(double)>& exterior);

// Principal-value fractional Laplacian of a smooth 1D function at x:
// integral over z > 0 of (2u(x) - u(x+z) - u(x-z)) z^{-1-alpha}, with the
// tail beyond the cutoff R evaluated assuming u is constant past the window.
double fractional_laplacian_1d(const std::function<double(double)>& u, double x,
                               const KernelAlpha& kernel, double cutoff_R);

// The raw double sum over ordered pairs of the cross-shaped set (no 1/4).
// Exterior interactions are truncated at 50 * diam(domain) with an analytic
// power-law tail; the diagonal carries a linear-model same-cell correction.
double gagliardo_term(const NonlocalField& f);

// 1/4 * gagliardo_term + integral of W over the domain.  Under this
// convention a pure two-phase step evaluates to exactly twice the fractional
// perimeter in the domain.
double energy_nonlocal(const NonlocalField& f, const DoubleWell& w);

// Gauge factor: eps^-alpha (alpha < 1), 1/(eps |ln eps|) (alpha = 1),
// eps^-1 (alpha > 1).
double sigma_eps(double alpha, double eps);

// sigma_eps * [ eps^alpha * gagliardo_term + potential term ].
double scaled_energy(const NonlocalField& f, const DoubleWell& w);

struct NonlocalMinimizeResult {
    NonlocalField field;
    double energy = 0.0;      // scaled_energy of the result
    double grad_norm = 0.0;   // sup gradient per unit cell length
    int iterations = 0;
    bool converged = false;
};

NonlocalMinimizeResult minimize_nonlocal(const NonlocalField& f, const DoubleWell& w,
                                         const MinimizeOptions& opts = {});

struct ScalingProbeReport {
    double alpha = 0.0;
    std::vector<double> eps;
    std::vector<double> J;          // Gagliardo integral of u*(x/eps) on Q((-1,1))
    double fitted_exponent = 0.0;   // slope of log(eps^alpha J) vs log eps; for
                                    // alpha == 1 the slope of J vs |ln eps|
    double r2 = 0.0;
    std::string to_json() const;
};

// u_star must be odd and equal to 1 on [1, inf).  Needs at least three eps
// values.
ScalingProbeReport scaling_probe(double alpha, const std::vector<double>& eps_list,
                                 const std::function<double(double)>& u_star);

}  // namespace phaselab
