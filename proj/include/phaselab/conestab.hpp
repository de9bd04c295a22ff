// conestab.hpp
// Second-variation analysis of rotational cones reduced to one radial
// dimension: numeric mean curvature and second-fundamental-form norm on the
// unit link, the radial stability quadratic form, and the Simons
// dimension-threshold scan with explicit two-regime test functions.

#pragma once

#include <functional>
#include <string>
#include <vector>

namespace phaselab {

// {|z| = delta |y|} over R^m x R^{n-m}, described at unit distance by the
// norm of its second fundamental form and the measure of its link.
struct ConeProfile {
    int n = 0;
    int m = 0;
    double delta = 0.0;
    double sff_norm_unit = 0.0;  // |A| at |x| = 1; c(x) = sff_norm_unit / |x|
    double link_measure = 0.0;   // H^{n-2} of the unit link
};

// Curvatures are differenced numerically from the level-set parametrization;
// nothing about the cone is hard-coded.
ConeProfile make_cone_profile(int m, int n, double delta);

// Mean curvature at a unit-distance point (sum of principal curvatures,
// normal pointing out of {|z| < delta |y|}).
double lawson_mean_curvature(int m, int n, double delta);

// Aperture with vanishing mean curvature, by bisection; requires a sign
// change, i.e. both blocks of the split at least 2-dimensional.
double lawson_balanced_aperture(int m, int n);

// phi(rho) = rho^alpha for rho < 1 and rho^{alpha+beta} beyond, smoothly
// regularized, with C^1 cutoffs at inner_cut and outer_cut.
struct RadialTestFunction {
    double alpha_exp = 0.0;
    double beta_exp = 0.0;
    double inner_cut = 1e-3;
    double outer_cut = 1e3;
    double reg_eps = 1e-4;

    // 2 alpha + n - 5 > 0 and 2 (alpha+beta) + n - 5 < 0.
    void validate(int n) const;
    bool admissible(int n) const;
    double value(double rho) const;
    double deriv(double rho) const;
};

// Q(phi) = link_measure * int ( phi'^2 - sff^2 phi^2 / rho^2 ) rho^{n-2} drho.
double stability_form_radial(const ConeProfile& cone, const RadialTestFunction& phi,
                             double quad_tol = 1e-9);

// Same quadratic form over arbitrary compactly supported radial data.
double radial_quadratic_form(const ConeProfile& cone,
                             const std::function<double(double)>& phi,
                             const std::function<double(double)>& dphi, double lo,
                             double hi, double quad_tol = 1e-9);

enum class ConeVerdict { UnstableWithWitness, NoNegativeDirectionFound };

const char* to_string(ConeVerdict v);

struct StabilityScanEntry {
    ConeProfile cone;
    double hardy_constant = 0.0;  // (n-3)^2 / 4
    ConeVerdict verdict = ConeVerdict::NoNegativeDirectionFound;
    RadialTestFunction witness;   // meaningful only for UnstableWithWitness
    double q_value = 0.0;         // most negative Q found over the family
};

struct StabilityScanReport {
    std::vector<StabilityScanEntry> entries;
    std::string to_json() const;
};

// Scans the Simons family (n = 2m, delta = 1) over a grid of admissible
// exponent pairs with local refinement.  "NoNegativeDirectionFound" is
// family-relative, not a proof of stability.
StabilityScanReport stability_scan(const std::vector<int>& simons_dims,
                                   int search_budget = 24, double quad_tol = 1e-9);

}  // namespace phaselab
