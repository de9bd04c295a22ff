#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "phaselab/conestab.hpp"
#include "phaselab/numerics.hpp"

using namespace phaselab;

namespace {

// Rotational-cone curvature oracle: at a unit-distance point the principal
// curvatures w.r.t. the normal pointing out of {|z| < delta |y|} are
// -delta (m-1 of them, along the y-sphere) and 1/delta (k-1 of them).
double oracle_sff_sq(int m, int n, double delta) {
    const int k = n - m;
    return (m - 1) * delta * delta + (k - 1) / (delta * delta);
}

double oracle_mean(int m, int n, double delta) {
    const int k = n - m;
    return (k - 1) / delta - (m - 1) * delta;
}

RadialTestFunction explicit_family(int n) {
    RadialTestFunction phi;
    phi.alpha_exp = 0.25 * (5.0 - n) + 0.5 * std::sqrt(2.0);
    phi.beta_exp = -std::sqrt(2.0);
    return phi;
}

}  // namespace

TEST_CASE("numeric cone curvatures match the rotational oracle") {
    for (int n : {4, 6, 8}) {
        const ConeProfile cone = make_cone_profile(n / 2, n, 1.0);
        CHECK(cone.sff_norm_unit * cone.sff_norm_unit ==
              doctest::Approx(oracle_sff_sq(n / 2, n, 1.0)).epsilon(1e-5));
        CHECK(cone.link_measure > 0.0);
        CHECK(std::abs(lawson_mean_curvature(n / 2, n, 1.0)) < 1e-8);
    }
    // uneven apertures
    const ConeProfile c = make_cone_profile(2, 5, 1.7);
    CHECK(c.sff_norm_unit * c.sff_norm_unit ==
          doctest::Approx(oracle_sff_sq(2, 5, 1.7)).epsilon(1e-5));
}

TEST_CASE("mean curvature sign structure over the aperture") {
    // (2,3) split: root at delta* = sqrt((k-1)/(m-1)) = sqrt(2)
    const double h1 = lawson_mean_curvature(2, 5, 1.0);
    const double h2 = lawson_mean_curvature(2, 5, 2.0);
    CHECK(h1 * h2 < 0.0);
    CHECK(h1 == doctest::Approx(oracle_mean(2, 5, 1.0)).epsilon(1e-6));
    CHECK(h2 == doctest::Approx(oracle_mean(2, 5, 2.0)).epsilon(1e-6));

    const double root = lawson_balanced_aperture(2, 5);
    CHECK(root == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));

    // degenerating aperture blows the curvature up
    CHECK(std::abs(lawson_mean_curvature(2, 5, 1e-3)) > 100.0);

    // a one-dimensional block has sign-definite mean curvature: no bracket
    CHECK_THROWS_AS(lawson_balanced_aperture(1, 3), NumericError);
}

TEST_CASE("test-function admissibility") {
    for (int n = 3; n <= 7; ++n) {
        const RadialTestFunction phi = explicit_family(n);
        CHECK_NOTHROW(phi.validate(n));
        // kappa_1 = 2 - alpha^2 and kappa_2 = 2 - (alpha+beta)^2 are positive
        CHECK(2.0 - phi.alpha_exp * phi.alpha_exp > 0.0);
        const double s = phi.alpha_exp + phi.beta_exp;
        CHECK(2.0 - s * s > 0.0);
    }
    // for n = 8 the explicit family fails the tail condition...
    CHECK(!explicit_family(8).admissible(8));
    // ...and no pair with both kappa positive exists: that needs
    // alpha + beta < (5-n)/2 = -1.5 together with |alpha+beta| < sqrt(2)
    CHECK(1.5 > std::sqrt(2.0));

    RadialTestFunction bad = explicit_family(4);
    bad.beta_exp = 0.0;  // integrable-tail condition violated
    CHECK_THROWS_AS(bad.validate(4), ValidationError);
}

TEST_CASE("radial stability form") {
    // flat reference: no curvature term, the form is a pure Dirichlet energy
    ConeProfile flat;
    flat.n = 4;
    flat.m = 2;
    flat.delta = 1.0;
    flat.sff_norm_unit = 0.0;
    flat.link_measure = 1.0;
    const RadialTestFunction phi4 = explicit_family(4);
    CHECK(stability_form_radial(flat, phi4) > 0.0);
    // pure Dirichlet energy is positive for every admissible direction
    for (double shift : {0.1, 0.3, 0.6}) {
        RadialTestFunction other = phi4;
        other.alpha_exp += shift;
        other.beta_exp -= 2.0 * shift;
        if (other.admissible(4)) CHECK(stability_form_radial(flat, other) > 0.0);
    }

    // Simons cone in n = 4 is destabilized by the explicit family
    const ConeProfile simons4 = make_cone_profile(2, 4, 1.0);
    const double q4 = stability_form_radial(simons4, phi4);
    CHECK(q4 < 0.0);

    // dense log-spaced Riemann oracle over the same integrand
    {
        const int nn = 400000;
        const double lo = phi4.inner_cut, hi = 2.0 * phi4.outer_cut;
        const double lr = std::log(hi / lo);
        double acc = 0.0;
        for (int i = 0; i < nn; ++i) {
            const double rho = lo * std::exp(lr * (i + 0.5) / nn);
            const double drho = rho * lr / nn;
            const double v = phi4.value(rho), d = phi4.deriv(rho);
            const double c = simons4.sff_norm_unit / rho;
            acc += (d * d - c * c * v * v) * std::pow(rho, simons4.n - 2.0) * drho;
        }
        acc *= simons4.link_measure;
        CHECK(q4 == doctest::Approx(acc).epsilon(1e-4));
    }

    // quadratic homogeneity and the t^{n-3} rescaling law
    auto value = [&phi4](double r) { return phi4.value(r); };
    auto deriv = [&phi4](double r) { return phi4.deriv(r); };
    const double base = radial_quadratic_form(simons4, value, deriv, phi4.inner_cut,
                                              2.0 * phi4.outer_cut);
    auto value2 = [&phi4](double r) { return 2.0 * phi4.value(r); };
    auto deriv2 = [&phi4](double r) { return 2.0 * phi4.deriv(r); };
    CHECK(radial_quadratic_form(simons4, value2, deriv2, phi4.inner_cut,
                                2.0 * phi4.outer_cut) ==
          doctest::Approx(4.0 * base).epsilon(1e-9));

    const double t = 2.0;
    auto value_t = [&phi4, t](double r) { return phi4.value(r / t); };
    auto deriv_t = [&phi4, t](double r) { return phi4.deriv(r / t) / t; };
    CHECK(radial_quadratic_form(simons4, value_t, deriv_t, t * phi4.inner_cut,
                                t * 2.0 * phi4.outer_cut) ==
          doctest::Approx(std::pow(t, simons4.n - 3.0) * base).epsilon(1e-9));
}

TEST_CASE("Simons dimension scan") {
    const StabilityScanReport rep = stability_scan({4, 6, 8}, 16);
    REQUIRE(rep.entries.size() == 3);

    const auto& e4 = rep.entries[0];
    CHECK(e4.verdict == ConeVerdict::UnstableWithWitness);
    CHECK(e4.q_value < 0.0);
    CHECK(e4.witness.admissible(4));

    const auto& e6 = rep.entries[1];
    CHECK(e6.verdict == ConeVerdict::UnstableWithWitness);

    const auto& e8 = rep.entries[2];
    CHECK(e8.verdict == ConeVerdict::NoNegativeDirectionFound);

    // Hardy-threshold consistency
    for (const auto& e : rep.entries) {
        const double margin =
            e.cone.sff_norm_unit * e.cone.sff_norm_unit - e.hardy_constant;
        if (margin > 0.0)
            CHECK(e.verdict == ConeVerdict::UnstableWithWitness);
        else
            CHECK(e.verdict == ConeVerdict::NoNegativeDirectionFound);
    }

    const std::string js = rep.to_json();
    CHECK(js.find("\"verdict\":\"UnstableWithWitness\"") != std::string::npos);
    CHECK(js.find("\"hardy_constant\"") != std::string::npos);

    CHECK_THROWS_AS(stability_scan({5}, 16), ValidationError);
}
