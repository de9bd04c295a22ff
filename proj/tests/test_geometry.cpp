#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "phaselab/geometry.hpp"
#include "phaselab/numerics.hpp"

using namespace phaselab;

namespace {

// Semi-analytic oracle: exact kernel column against [c, d], Simpson in x.
double iterated_interaction(double a, double b, double c, double d, double alpha,
                            int panels = 20000) {
    auto column = [&](double x) {
        return (std::pow(c - x, -alpha) - std::pow(d - x, -alpha)) / alpha;
    };
    double acc = 0.0;
    const double h = (b - a) / panels;
    for (int i = 0; i < panels; ++i) {
        const double x0 = a + i * h, x1 = x0 + h;
        acc += (column(x0) + 4.0 * column(0.5 * (x0 + x1)) + column(x1)) * h / 6.0;
    }
    return acc;
}

SampleBudget budget_with(std::uint64_t seed, long samples = 400000) {
    SampleBudget b;
    b.seed = seed;
    b.samples = samples;
    return b;
}

}  // namespace

TEST_CASE("interval interactions: closed form vs iterated oracle") {
    const KernelAlpha k = make_kernel(1, 0.5);
    const SetRegion E = SetRegion::interval(0.0, 1.0);
    const SetRegion F = SetRegion::interval(2.0, 3.0);
    const Estimate ef = interaction_alpha(E, F, k, InteractionMethod::Quadrature, {});
    const Estimate fe = interaction_alpha(F, E, k, InteractionMethod::Quadrature, {});
    CHECK(ef.value == doctest::Approx(fe.value).epsilon(1e-14));
    CHECK(ef.value ==
          doctest::Approx(iterated_interaction(0.0, 1.0, 2.0, 3.0, 0.5)).epsilon(1e-6));

    // dilation by t = 2 scales by t^{n - alpha} = 2^{0.5}
    const SetRegion E2 = SetRegion::interval(0.0, 2.0);
    const SetRegion F2 = SetRegion::interval(4.0, 6.0);
    const Estimate scaled = interaction_alpha(E2, F2, k, InteractionMethod::Quadrature, {});
    CHECK(scaled.value == doctest::Approx(std::pow(2.0, 0.5) * ef.value).epsilon(1e-12));

    // overlap rejected; touching diverges for alpha >= 1
    CHECK_THROWS_AS(interaction_alpha(SetRegion::interval(0.0, 2.0),
                                      SetRegion::interval(1.0, 3.0), k,
                                      InteractionMethod::Quadrature, {}),
                    ValidationError);
    CHECK_THROWS_AS(interaction_alpha(SetRegion::interval(0.0, 1.0),
                                      SetRegion::interval(1.0, 2.0),
                                      make_kernel(1, 1.2),
                                      InteractionMethod::Quadrature, {}),
                    NumericError);
}

TEST_CASE("Monte Carlo interactions") {
    const KernelAlpha k = make_kernel(1, 0.5);
    const SetRegion E = SetRegion::interval(0.0, 1.0);
    const SetRegion F = SetRegion::interval(2.0, 3.0);
    const Estimate exact = interaction_alpha(E, F, k, InteractionMethod::Quadrature, {});
    const Estimate mc = interaction_alpha(E, F, k, InteractionMethod::MonteCarlo,
                                          budget_with(1234));
    CHECK(std::abs(mc.value - exact.value) < 4.0 * mc.error + 1e-6);

    // reproducibility for a fixed seed
    const Estimate mc2 = interaction_alpha(E, F, k, InteractionMethod::MonteCarlo,
                                           budget_with(1234));
    CHECK(mc.value == mc2.value);
    CHECK(mc.error == mc2.error);

    // 2D balls: symmetry within the confidence interval and dilation scaling
    const KernelAlpha k2 = make_kernel(2, 0.5);
    const SetRegion B1 = SetRegion::ball({0.0, 0.0}, 1.0, 2);
    const SetRegion B2 = SetRegion::ball({3.0, 0.0}, 1.0, 2);
    const Estimate ab = interaction_alpha(B1, B2, k2, InteractionMethod::MonteCarlo,
                                          budget_with(77));
    const Estimate ba = interaction_alpha(B2, B1, k2, InteractionMethod::MonteCarlo,
                                          budget_with(78));
    CHECK(std::abs(ab.value - ba.value) < 4.0 * (ab.error + ba.error));

    const SetRegion B1d = SetRegion::ball({0.0, 0.0}, 2.0, 2);
    const SetRegion B2d = SetRegion::ball({6.0, 0.0}, 2.0, 2);
    const Estimate abd = interaction_alpha(B1d, B2d, k2, InteractionMethod::MonteCarlo,
                                           budget_with(79));
    const double factor = std::pow(2.0, 2.0 - 0.5);
    CHECK(std::abs(abd.value - factor * ab.value) <
          4.0 * (abd.error + factor * ab.error));

    // overlapping 2D regions rejected
    CHECK_THROWS_AS(interaction_alpha(B1, SetRegion::ball({0.5, 0.0}, 1.0, 2), k2,
                                      InteractionMethod::MonteCarlo, budget_with(5)),
                    ValidationError);
}

TEST_CASE("interaction additivity over disjoint unions") {
    const KernelAlpha k = make_kernel(1, 0.5);
    const SetRegion E = SetRegion::interval(0.0, 1.0);
    const SetRegion F1 = SetRegion::interval(2.0, 3.0);
    const SetRegion F2 = SetRegion::interval(4.0, 5.0);
    // union represented as a 1D indicator mask
    Grid g = Grid::line(2.0 + 0.005, 5.0 - 0.005, 300);
    std::vector<std::uint8_t> mask(g.size());
    for (int i = 0; i < g.size(); ++i) {
        const double x = g.x(i);
        mask[i] = (x < 3.0 || x > 4.0) ? 1 : 0;
    }
    const SetRegion F_union = SetRegion::indicator(g, mask);
    const double sep = interaction_alpha(E, F1, k, InteractionMethod::Quadrature, {}).value +
                       interaction_alpha(E, F2, k, InteractionMethod::Quadrature, {}).value;
    const Estimate uni =
        interaction_alpha(E, F_union, k, InteractionMethod::MonteCarlo, budget_with(901));
    CHECK(std::abs(uni.value - sep) < 4.0 * uni.error + 0.02 * sep);
}

TEST_CASE("fractional perimeter closed forms") {
    const SetRegion E = SetRegion::interval(0.0, 1.0);
    const SetRegion line = SetRegion::everything(1);
    for (double alpha : {0.25, 0.5, 0.75}) {
        const Estimate p = frac_perimeter(E, line, make_kernel(1, alpha), {});
        const double expected = 2.0 / (alpha * (1.0 - alpha));
        CHECK(std::abs(p.value - expected) < 0.005 * expected);
    }
    CHECK_THROWS_AS(frac_perimeter(E, line, make_kernel(1, 1.5), {}), ValidationError);

    // symmetric in E <-> E^c
    const KernelAlpha k = make_kernel(1, 0.5);
    const SetRegion window = SetRegion::interval(-2.0, 2.0);
    const Estimate pe = frac_perimeter(E, window, k, {});
    const Estimate pc = frac_perimeter(E.complement(), window, k, {});
    CHECK(pe.value == doctest::Approx(pc.value).epsilon(1e-12));

    // monotone in the window
    const Estimate small = frac_perimeter(E, SetRegion::interval(-0.5, 0.5), k, {});
    CHECK(small.value <= pe.value + 1e-12);

    // three terms are nonnegative and bounded by the total: windowed value
    // never exceeds the whole-line perimeter
    const Estimate full = frac_perimeter(E, line, k, {});
    CHECK(pe.value <= full.value + 1e-12);

    // dilation in 1D: Per_alpha(tE, tOmega) = t^{1-alpha} Per_alpha(E, Omega)
    const Estimate dil = frac_perimeter(SetRegion::interval(0.0, 2.0),
                                        SetRegion::interval(-4.0, 4.0), k, {});
    CHECK(dil.value == doctest::Approx(std::pow(2.0, 0.5) * pe.value).epsilon(1e-12));

    // each localization term is nonnegative and bounded by the total:
    // I(E cap O, E^c cap O) assembled from its two interval pieces
    const double term1 =
        interaction_alpha(E, SetRegion::interval(-2.0, 0.0), k,
                          InteractionMethod::Quadrature, {})
            .value +
        interaction_alpha(E, SetRegion::interval(1.0, 2.0), k,
                          InteractionMethod::Quadrature, {})
            .value;
    CHECK(term1 >= 0.0);
    CHECK(term1 <= pe.value + 1e-12);
}

TEST_CASE("fractional perimeter in 2D via Monte Carlo") {
    const KernelAlpha k = make_kernel(2, 0.5);
    const SetRegion E = SetRegion::ball({0.0, 0.0}, 0.5, 2);
    const SetRegion W1 = SetRegion::ball({0.0, 0.0}, 1.0, 2);
    SampleBudget b = budget_with(333, 600000);
    const Estimate p1 = frac_perimeter(E, W1, k, b);
    CHECK(p1.value > 0.0);

    // dilation by t = 2 scales by t^{n - alpha} = 2^{1.5}
    const SetRegion E2 = SetRegion::ball({0.0, 0.0}, 1.0, 2);
    const SetRegion W2 = SetRegion::ball({0.0, 0.0}, 2.0, 2);
    b.seed = 334;
    const Estimate p2 = frac_perimeter(E2, W2, k, b);
    const double factor = std::pow(2.0, 1.5);
    CHECK(std::abs(p2.value - factor * p1.value) <
          4.0 * (p2.error + factor * p1.error));
}

TEST_CASE("nonlocal mean curvature of a sampled indicator disc") {
    const KernelAlpha k = make_kernel(2, 0.5);
    Grid g = Grid::square(-1.0, 1.0, 257);
    std::vector<std::uint8_t> mask(g.size());
    for (int idx = 0; idx < g.size(); ++idx) {
        const auto p = g.pos(idx);
        mask[idx] = p[0] * p[0] + p[1] * p[1] < 0.25 ? 1 : 0;
    }
    const SetRegion sampled = SetRegion::indicator(g, mask);
    const SetRegion exact = SetRegion::ball({0.0, 0.0}, 0.5, 2);
    // The staircase boundary of a binary mask dominates the near shells, so
    // only the sign and the order of magnitude are meaningful here.
    const double v_sampled = nonlocal_mean_curvature(sampled, {0.5, 0.0}, k, 10.0);
    const double v_exact = nonlocal_mean_curvature(exact, {0.5, 0.0}, k, 10.0);
    CHECK(v_sampled > 0.0);
    CHECK(v_sampled < 3.0 * v_exact);
    CHECK(v_sampled > v_exact / 3.0);
}

TEST_CASE("classical perimeter") {
    const SetRegion disc = SetRegion::ball({0.0, 0.0}, 1.0, 2);
    CHECK(classical_perimeter(disc, SetRegion::everything(2)) ==
          doctest::Approx(2.0 * M_PI).epsilon(1e-12));

    const SetRegion half = SetRegion::halfspace({1.0, 0.0}, 0.0, 2);
    CHECK(classical_perimeter(half, SetRegion::cube(1.0, 2)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(classical_perimeter(half, SetRegion::ball({0.0, 0.0}, 1.0, 2)) ==
          doctest::Approx(2.0).epsilon(1e-12));

    // circle clipped by a ball window: arc length from the chord geometry
    const SetRegion win = SetRegion::ball({1.0, 0.0}, 1.0, 2);
    const double d = 1.0, r = 1.0, R = 1.0;
    const double q = (d * d + r * r - R * R) / (2.0 * d * r);
    CHECK(classical_perimeter(disc, win) ==
          doctest::Approx(2.0 * std::acos(q) * r).epsilon(1e-12));

    // grid-sampled disc of radius 1/2 at h = 1/128
    Grid g = Grid::square(-1.0, 1.0, 257);
    std::vector<std::uint8_t> mask(g.size());
    for (int idx = 0; idx < g.size(); ++idx) {
        const auto p = g.pos(idx);
        mask[idx] = p[0] * p[0] + p[1] * p[1] < 0.25 ? 1 : 0;
    }
    const double per = classical_perimeter(SetRegion::indicator(g, mask),
                                           SetRegion::everything(2));
    CHECK(std::abs(per - M_PI) < 0.02 * M_PI);

    // 1D intervals: endpoints inside the window
    CHECK(classical_perimeter(SetRegion::interval(0.0, 1.0), SetRegion::everything(1)) ==
          doctest::Approx(2.0));
    CHECK(classical_perimeter(SetRegion::interval(0.0, 1.0),
                              SetRegion::interval(-0.5, 0.5)) == doctest::Approx(1.0));
}

TEST_CASE("nonlocal mean curvature") {
    for (double alpha : {0.25, 0.5, 0.75}) {
        const KernelAlpha k = make_kernel(2, alpha);
        const SetRegion half = SetRegion::halfspace({1.0, 0.0}, 0.25, 2);
        CHECK(std::abs(nonlocal_mean_curvature(half, {0.25, 3.0}, k, 10.0)) < 1e-6);

        const SetRegion disc = SetRegion::ball({0.0, 0.0}, 1.0, 2);
        const double v = nonlocal_mean_curvature(disc, {1.0, 0.0}, k, 50.0);
        CHECK(v > 0.0);
        // complement flips the sign exactly
        const double vc = nonlocal_mean_curvature(disc.complement(), {1.0, 0.0}, k, 50.0);
        CHECK(vc == doctest::Approx(-v).epsilon(1e-15));
    }

    // 1D interval at its right endpoint: exterior dominates past the span
    const KernelAlpha k1 = make_kernel(1, 0.5);
    const SetRegion seg = SetRegion::interval(0.0, 2.0);
    const double nm = nonlocal_mean_curvature(seg, {2.0, 0.0}, k1, 10.0);
    CHECK(nm == doctest::Approx(2.0 * std::pow(2.0, -0.5) / 0.5).epsilon(1e-12));

    CHECK_THROWS_AS(
        nonlocal_mean_curvature(seg, {1.0, 0.0}, k1, 10.0),  // not a boundary point
        ValidationError);
}

TEST_CASE("Lawson cone membership") {
    const SetRegion cone = lawson_cone_profile(3, 7, 0.8);
    CHECK(cone.contains({2.0, 0.0}));      // |z| = 0
    CHECK(cone.contains({1.0, 0.5}));
    CHECK(!cone.contains({0.5, 1.0}));
    // scaling invariance
    for (double t : {0.5, 2.0, 17.0})
        CHECK(cone.contains({1.0 * t, 0.7 * t}) == cone.contains({1.0, 0.7}));
    // equal split with delta = 1: swapping the blocks exchanges the region
    // with its complement and fixes the defining surface |z| = |y|
    const SetRegion sym = lawson_cone_profile(2, 4, 1.0);
    for (double a : {0.3, 1.0, 2.5})
        for (double b : {0.3, 1.0, 2.5}) {
            if (a == b) {
                CHECK(sym.contains({a, b}));
                CHECK(sym.contains({b, a}));
            } else {
                CHECK(sym.contains({a, b}) != sym.contains({b, a}));
            }
        }
    CHECK_THROWS_AS(lawson_cone_profile(0, 4, 1.0), ValidationError);
}

TEST_CASE("interaction lower bound probe") {
    const std::vector<double> gaps{1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64,
                                   1.0 / 128, 1.0 / 256};
    const LowerBoundProbeReport log_probe = interaction_lower_bound_probe(gaps, 1.0);
    CHECK(log_probe.slope > 0.0);
    CHECK(log_probe.r2 > 0.98);

    const LowerBoundProbeReport pow_probe = interaction_lower_bound_probe(gaps, 1.5);
    CHECK(pow_probe.slope > 0.0);
    CHECK(pow_probe.r2 > 0.98);

    // fixed positive gap: direct iterated-quadrature oracle
    const double g = 0.25;
    const double lo = 0.5 * (1.0 - g), hi = 0.5 * (1.0 + g);
    const double direct = iterated_interaction(0.0, lo, hi, 1.0, 1.5, 40000);
    const LowerBoundProbeReport single =
        interaction_lower_bound_probe({0.5, g, 0.125}, 1.5);
    CHECK(single.interactions[1] == doctest::Approx(direct).epsilon(1e-6));

    CHECK_THROWS_AS(interaction_lower_bound_probe(gaps, 0.5), ValidationError);
    CHECK_THROWS_AS(interaction_lower_bound_probe({0.5, 0.25}, 1.0), ValidationError);
}

TEST_CASE("region descriptors") {
    const std::string js = SetRegion::ball({1.0, 2.0}, 3.0, 2).to_json();
    CHECK(js.find("\"kind\":\"ball\"") != std::string::npos);
    CHECK(js.find("\"radius\":3.0") != std::string::npos);
    const std::string cone_js = lawson_cone_profile(2, 4, 1.0).to_json();
    CHECK(cone_js.find("lawson_cone") != std::string::npos);
}
