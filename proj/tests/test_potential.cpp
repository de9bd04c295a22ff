#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "phaselab/numerics.hpp"
#include "phaselab/potential.hpp"

using namespace phaselab;

TEST_CASE("quartic well values") {
    const DoubleWell w = quartic_well();
    CHECK(w.W(0.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(w.dW(1.0) == doctest::Approx(0.0));
    CHECK(w.dW(-1.0) == doctest::Approx(0.0));
    CHECK(w.d2W(1.0) == doctest::Approx(2.0));
    // derivative consistency against central differences
    for (double u : {-1.7, -0.4, 0.0, 0.9, 1.6}) {
        const double h = 1e-6;
        const double fd = (w.W(u + h) - w.W(u - h)) / (2.0 * h);
        CHECK(w.dW(u) == doctest::Approx(fd).epsilon(1e-8));
        const double fd2 = (w.dW(u + h) - w.dW(u - h)) / (2.0 * h);
        CHECK(w.d2W(u) == doctest::Approx(fd2).epsilon(1e-8));
    }
}

TEST_CASE("double-well validation") {
    CHECK(validate_double_well(quartic_well(), 100).ok);
    CHECK(validate_double_well(quartic_well(), 1000).ok);
    CHECK(validate_double_well(quartic_well(), 10000).ok);

    DoubleWell offset = quartic_well();
    offset.W = [](double u) {
        const double q = 1.0 - u * u;
        return 0.25 * q * q + 0.1;
    };
    const auto rep_offset = validate_double_well(offset, 500);
    CHECK(!rep_offset.ok);
    bool saw_zero_violation = false;
    for (const auto& v : rep_offset.violations)
        saw_zero_violation = saw_zero_violation || v.find("!= 0") != std::string::npos;
    CHECK(saw_zero_violation);

    DoubleWell degenerate;
    degenerate.label = "quartic-power-4";
    degenerate.W = [](double u) {
        const double q = 1.0 - u * u;
        return q * q * q * q;
    };
    degenerate.dW = [](double u) {
        const double q = 1.0 - u * u;
        return -8.0 * u * q * q * q;
    };
    degenerate.d2W = [](double u) {
        const double q = 1.0 - u * u;
        return -8.0 * q * q * q + 48.0 * u * u * q * q;
    };
    const auto rep_dege = validate_double_well(degenerate, 500);
    CHECK(!rep_dege.ok);
    bool saw_flat_wells = false;
    for (const auto& v : rep_dege.violations)
        saw_flat_wells = saw_flat_wells || v.find("W''") != std::string::npos;
    CHECK(saw_flat_wells);

    CHECK_THROWS_AS(validate_double_well(quartic_well(), 10), ValidationError);
}

TEST_CASE("surface tension constant") {
    // integral sqrt(2 W) = integral (1 - r^2)/sqrt(2) = (4/3)/sqrt(2) = 2 sqrt(2)/3
    const double expected = 2.0 * std::sqrt(2.0) / 3.0;
    CHECK(surface_tension_constant(quartic_well()) ==
          doctest::Approx(expected).epsilon(1e-8));

    // scaling W by 4 doubles the constant
    DoubleWell scaled = quartic_well();
    scaled.W = [](double u) {
        const double q = 1.0 - u * u;
        return q * q;  // 4 * quartic
    };
    CHECK(surface_tension_constant(scaled) ==
          doctest::Approx(2.0 * expected).epsilon(1e-8));

    // W = (1-u^2)^2/2: integrand becomes exactly 1 - r^2, integral 4/3
    DoubleWell half = quartic_well();
    half.W = [](double u) {
        const double q = 1.0 - u * u;
        return 0.5 * q * q;
    };
    CHECK(surface_tension_constant(half) == doctest::Approx(4.0 / 3.0).epsilon(1e-8));
}

TEST_CASE("surface tension scales like k under W -> k^2 W") {
    for (double k : {2.0, 3.0}) {
        DoubleWell w = quartic_well();
        w.W = [k](double u) {
            const double q = 1.0 - u * u;
            return k * k * 0.25 * q * q;
        };
        CHECK(surface_tension_constant(w) ==
              doctest::Approx(k * surface_tension_constant(quartic_well()))
                  .epsilon(1e-8));
    }
}
