// geometry.hpp
// Set primitives and the fractional set calculus: alpha-interactions between
// disjoint sets, fractional perimeter with its three-term localization,
// classical perimeter, nonlocal mean curvature of boundaries and the
// shrinking-gap interaction lower bound probe.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "phaselab/grid.hpp"
#include "phaselab/nonlocalfield.hpp"

namespace phaselab {

struct SetRegion {
    enum class Kind { All, Halfspace, Ball, Interval, Cube, LawsonCone, GridIndicator };

    Kind kind = Kind::All;
    int dim = 1;
    bool complemented = false;

    // halfspace { x : normal . x <= offset }, |normal| = 1
    std::array<double, 2> normal{1.0, 0.0};
    double offset = 0.0;
    // ball
    std::array<double, 2> center{0.0, 0.0};
    double radius = 0.0;
    // interval [a, b]
    double a = 0.0, b = 0.0;
    // cube centered at the origin
    double side = 0.0;
    // Lawson cone split: points are reduced pairs (|y|, |z|)
    int cone_m = 0, cone_n = 0;
    double cone_delta = 0.0;
    // grid indicator
    Grid grid;
    std::vector<std::uint8_t> mask;

    static SetRegion everything(int dim);
    static SetRegion halfspace(std::array<double, 2> normal, double offset, int dim);
    static SetRegion ball(std::array<double, 2> center, double radius, int dim);
    static SetRegion interval(double a, double b);
    static SetRegion cube(double side, int dim);
    static SetRegion indicator(const Grid& g, std::vector<std::uint8_t> mask);

    SetRegion complement() const;
    bool contains(std::array<double, 2> p) const;
    std::string to_json() const;
};

// {|z| <= delta |y|} for the split R^m x R^{n-m}; membership queries take the
// reduced radii (|y|, |z|).
SetRegion lawson_cone_profile(int m, int n, double delta);

enum class InteractionMethod { Quadrature, MonteCarlo };

struct SampleBudget {
    std::uint64_t seed = 0;   // required: results are reproducible bit-for-bit
    long samples = 200000;    // total sample budget across replicates
    int replicates = 16;      // independent stratified passes for the CI
};

struct Estimate {
    double value = 0.0;
    double error = 0.0;  // 95% half-width (MC) or refinement delta (quadrature)
};

// I_alpha(E, F) over disjoint sets.  1D interval geometry goes through exact
// antiderivatives; everything else is stratified Monte Carlo.
Estimate interaction_alpha(const SetRegion& E, const SetRegion& F,
                           const KernelAlpha& kernel, InteractionMethod method,
                           const SampleBudget& budget);

// Per_alpha(E, Omega) = I(E cap O, E^c cap O) + I(E cap O^c, E^c cap O)
//                      + I(E cap O, E^c cap O^c); requires alpha in (0,1).
Estimate frac_perimeter(const SetRegion& E, const SetRegion& Omega,
                        const KernelAlpha& kernel, const SampleBudget& budget);

// Classical perimeter of E inside the window Omega; exact for the analytic
// primitives, marching-squares estimate for 2D grid indicators.
double classical_perimeter(const SetRegion& E, const SetRegion& Omega);

// Principal-value integral of (chi_{E^c} - chi_E)(y) |x-y|^{-n-alpha} at a
// boundary point x, symmetric-shell quadrature plus analytic tail.
// Unnormalized; only sign/zero structure is meaningful.
double nonlocal_mean_curvature(const SetRegion& E, std::array<double, 2> x,
                               const KernelAlpha& kernel, double cutoff);

struct LowerBoundProbeReport {
    double alpha = 0.0;
    std::vector<double> gaps;
    std::vector<double> interactions;
    std::vector<double> regressors;  // |ln g| or g^{1-alpha}
    double slope = 0.0;              // fitted c0
    double intercept = 0.0;
    double r2 = 0.0;
    bool degenerate_fit = false;
    std::string model;
    std::string to_json() const;
};

// Left/right blocks of the unit interval separated by a gap of measure g;
// fits I_alpha against |ln g| (alpha = 1) or g^{1-alpha} (alpha > 1).
LowerBoundProbeReport interaction_lower_bound_probe(const std::vector<double>& gap_measures,
                                                    double alpha);

// Euclidean distance from p to the (topological) boundary of the region;
// supported for halfspace, ball, interval and cube primitives.
double boundary_distance(const SetRegion& r, std::array<double, 2> p);

}  // namespace phaselab
