// numerics.hpp
// Shared numerical kernels: adaptive quadrature, power-law antiderivatives,
// least-squares fitting and a counter-based RNG for reproducible sampling.

#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace phaselab {

// Thrown when an iterative numerical procedure fails to reach its tolerance
// (quadrature non-convergence, line-search failure, unstable refinement).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown on invalid inputs or violated preconditions.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

namespace num {

// Adaptive Gauss-Kronrod (G7/K15) quadrature of f over [a, b] to an absolute
// tolerance. Throws NumericError when the interval budget is exhausted.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_intervals = 20000);

// Second antiderivative of r^{-1-alpha}, so that the interaction of two 1D
// intervals is a four-term combination of psi values.  psi(0) = 0 for
// alpha < 1; for alpha >= 1 the corner value diverges.
double psi_power(double r, double alpha);

// Interaction integral of |x-y|^{-1-alpha} over [a1,a2] x [b1,b2] with
// a2 <= b1 (disjoint ordered intervals).  Endpoints may be +-infinity.
// Diverges (throws NumericError) when the intervals touch and alpha >= 1.
double interval_interaction(double a1, double a2, double b1, double b2,
                            double alpha);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

// Ordinary least squares y ~ slope*x + intercept.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Counter-based generator: a fixed (seed, counter) pair always yields the
// same value on every platform.  Based on splitmix64 finalization.
std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t counter);

// Uniform double in [0, 1) from a (seed, counter) pair.
double counter_uniform(std::uint64_t seed, std::uint64_t counter);

// C^1 ramp: 0 for t <= 0, 1 for t >= 1, 3t^2 - 2t^3 between.
double smoothstep(double t);

// One-sided derivative of g at x by first-order differences with one
// Richardson refinement; side = +1 (right) or -1 (left).
double one_sided_derivative(const std::function<double(double)>& g, double x,
                            int side, double h = 1e-5);

}  // namespace num
}  // namespace phaselab
