#include "phaselab/conestab.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <json.hpp>

#include "phaselab/numerics.hpp"

namespace phaselab {

namespace {

constexpr int kMaxDim = 12;

using Point = std::array<double, kMaxDim>;

// Level-set function of the cone {|z| = delta |y|}, smooth away from the
// coordinate axes.
double cone_levelset(const Point& p, int m, int n, double delta) {
    double y2 = 0.0, z2 = 0.0;
    for (int i = 0; i < m; ++i) y2 += p[i] * p[i];
    for (int i = m; i < n; ++i) z2 += p[i] * p[i];
    return std::sqrt(z2) - delta * std::sqrt(y2);
}

// Unit-distance reference point with both radii strictly positive.
Point link_point(int m, int /*n*/, double delta) {
    Point p{};
    const double a = 1.0 / std::sqrt(1.0 + delta * delta);
    p[0] = a;
    p[m] = delta * a;
    return p;
}

struct CurvatureSample {
    double mean = 0.0;    // trace of the shape operator
    double norm2 = 0.0;   // squared Frobenius norm
};

CurvatureSample curvature_fd(int m, int n, double delta, double h) {
    const Point p0 = link_point(m, n, delta);
    auto F = [&](const Point& p) { return cone_levelset(p, m, n, delta); };

    std::array<double, kMaxDim> grad{};
    for (int i = 0; i < n; ++i) {
        Point pp = p0, pm = p0;
        pp[i] += h;
        pm[i] -= h;
        grad[i] = (F(pp) - F(pm)) / (2.0 * h);
    }
    double gnorm = 0.0;
    for (int i = 0; i < n; ++i) gnorm += grad[i] * grad[i];
    gnorm = std::sqrt(gnorm);

    double hess[kMaxDim][kMaxDim];
    const double f0 = F(p0);
    for (int i = 0; i < n; ++i) {
        Point pp = p0, pm = p0;
        pp[i] += h;
        pm[i] -= h;
        hess[i][i] = (F(pp) - 2.0 * f0 + F(pm)) / (h * h);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Point ppp = p0, ppm = p0, pmp = p0, pmm = p0;
            ppp[i] += h;
            ppp[j] += h;
            ppm[i] += h;
            ppm[j] -= h;
            pmp[i] -= h;
            pmp[j] += h;
            pmm[i] -= h;
            pmm[j] -= h;
            hess[i][j] = hess[j][i] =
                (F(ppp) - F(ppm) - F(pmp) + F(pmm)) / (4.0 * h * h);
        }

    // Project to the tangent space: A = P H P / |grad F|.
    std::array<double, kMaxDim> nu{};
    for (int i = 0; i < n; ++i) nu[i] = grad[i] / gnorm;
    double a[kMaxDim][kMaxDim];
    // HP
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double hn = 0.0;
            for (int k = 0; k < n; ++k) hn += hess[i][k] * nu[k];
            a[i][j] = hess[i][j] - hn * nu[j];
        }
    // P (HP)
    CurvatureSample out;
    for (int i = 0; i < n; ++i) {
        double col_n[kMaxDim];
        for (int j = 0; j < n; ++j) {
            double nh = 0.0;
            for (int k = 0; k < n; ++k) nh += nu[k] * a[k][j];
            col_n[j] = nh;
        }
        for (int j = 0; j < n; ++j) {
            const double v = (a[i][j] - nu[i] * col_n[j]) / gnorm;
            if (i == j) out.mean += v;
            out.norm2 += v * v;
        }
    }
    return out;
}

double sphere_area(int d) {  // |S^{d-1}|
    if (d < 1) throw ValidationError("sphere_area: bad dimension");
    return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
}

double cutoff_up(double rho, double lo) {
    // 0 below lo, 1 above 2 lo, C^1 ramp between.
    return num::smoothstep((rho - lo) / lo);
}

double cutoff_up_deriv(double rho, double lo) {
    const double t = (rho - lo) / lo;
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return 6.0 * t * (1.0 - t) / lo;
}

}  // namespace

ConeProfile make_cone_profile(int m, int n, double delta) {
    if (n < 2 || n > kMaxDim) throw ValidationError("cone: dimension out of range");
    if (m < 1 || m > n - 1) throw ValidationError("cone: need 1 <= m <= n-1");
    if (!(delta > 0.0)) throw ValidationError("cone: aperture must be positive");
    const double h = 5e-4;
    const CurvatureSample c1 = curvature_fd(m, n, delta, h);
    const CurvatureSample c2 = curvature_fd(m, n, delta, 0.5 * h);
    ConeProfile cone;
    cone.n = n;
    cone.m = m;
    cone.delta = delta;
    const double norm2 = (4.0 * c2.norm2 - c1.norm2) / 3.0;
    cone.sff_norm_unit = std::sqrt(std::max(0.0, norm2));
    const double a = 1.0 / std::sqrt(1.0 + delta * delta);
    const double b = delta * a;
    double link = 1.0;
    link *= m >= 2 ? sphere_area(m) * std::pow(a, m - 1) : 2.0;
    link *= (n - m) >= 2 ? sphere_area(n - m) * std::pow(b, n - m - 1) : 2.0;
    cone.link_measure = link;
    return cone;
}

double lawson_mean_curvature(int m, int n, double delta) {
    if (n < 2 || n > kMaxDim) throw ValidationError("cone: dimension out of range");
    if (m < 1 || m > n - 1) throw ValidationError("cone: need 1 <= m <= n-1");
    if (!(delta > 0.0)) throw ValidationError("cone: aperture must be positive");
    const double h = 5e-4;
    const CurvatureSample c1 = curvature_fd(m, n, delta, h);
    const CurvatureSample c2 = curvature_fd(m, n, delta, 0.5 * h);
    return (4.0 * c2.mean - c1.mean) / 3.0;
}

double lawson_balanced_aperture(int m, int n) {
    double lo = 1e-3, hi = 1e3;
    double flo = lawson_mean_curvature(m, n, lo);
    double fhi = lawson_mean_curvature(m, n, hi);
    if (flo * fhi > 0.0)
        throw NumericError(
            "lawson_balanced_aperture: no sign change in the bracket (both blocks must "
            "be at least 2-dimensional)");
    for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        const double fm = lawson_mean_curvature(m, n, mid);
        if (fm == 0.0) return mid;
        if (fm * flo < 0.0) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
        if (hi - lo < 1e-12 * hi) break;
    }
    (void)fhi;
    return std::sqrt(lo * hi);
}

void RadialTestFunction::validate(int n) const {
    if (!(inner_cut > 0.0) || !(outer_cut > 2.0 * inner_cut))
        throw ValidationError("test function: cutoffs must satisfy 0 < inner < outer/2");
    if (!(reg_eps > 0.0)) throw ValidationError("test function: reg_eps must be positive");
    if (!admissible(n))
        throw ValidationError(
            "test function: exponents violate 2a+n-5 > 0 and 2(a+b)+n-5 < 0");
}

bool RadialTestFunction::admissible(int n) const {
    return 2.0 * alpha_exp + n - 5.0 > 0.0 &&
           2.0 * (alpha_exp + beta_exp) + n - 5.0 < 0.0;
}

// Smooth-min regularization of the two-regime profile: with beta < 0 the
// factor (1 + rho^beta - sqrt((rho^beta - 1)^2 + eps))/2 tends to 1 inside
// the unit ball and to rho^beta outside, so the profile interpolates rho^a
// and rho^{a+b} as required by the integrability conditions.
double RadialTestFunction::value(double rho) const {
    if (rho <= inner_cut || rho >= 2.0 * outer_cut) return 0.0;
    const double rb = std::pow(rho, beta_exp);
    const double s = std::sqrt((rb - 1.0) * (rb - 1.0) + reg_eps);
    const double core = 0.5 * std::pow(rho, alpha_exp) * (1.0 + rb - s);
    const double tau =
        cutoff_up(rho, inner_cut) * cutoff_up(2.0 * outer_cut - rho + outer_cut, outer_cut);
    return core * tau;
}

double RadialTestFunction::deriv(double rho) const {
    if (rho <= inner_cut || rho >= 2.0 * outer_cut) return 0.0;
    const double rb = std::pow(rho, beta_exp);
    const double s = std::sqrt((rb - 1.0) * (rb - 1.0) + reg_eps);
    const double core = 0.5 * std::pow(rho, alpha_exp) * (1.0 + rb - s);
    const double dcore =
        0.5 * std::pow(rho, alpha_exp - 1.0) *
        (alpha_exp * (1.0 + rb - s) + beta_exp * rb * (1.0 - (rb - 1.0) / s));
    const double up = cutoff_up(rho, inner_cut);
    const double dn = cutoff_up(2.0 * outer_cut - rho + outer_cut, outer_cut);
    const double dup = cutoff_up_deriv(rho, inner_cut);
    const double ddn = -cutoff_up_deriv(2.0 * outer_cut - rho + outer_cut, outer_cut);
    return dcore * up * dn + core * (dup * dn + up * ddn);
}

double radial_quadratic_form(const ConeProfile& cone,
                             const std::function<double(double)>& phi,
                             const std::function<double(double)>& dphi, double lo,
                             double hi, double quad_tol) {
    if (!(lo >= 0.0 && hi > lo)) throw ValidationError("radial form: bad support");
    auto integrand = [&](double rho) {
        const double v = phi(rho);
        const double d = dphi(rho);
        const double c = cone.sff_norm_unit / rho;
        return (d * d - c * c * v * v) * std::pow(rho, cone.n - 2.0);
    };
    // Near-boundary exponents make the two sign-definite parts huge; an
    // absolute tolerance must be scaled by the integrand mass to stay
    // reachable in double precision.
    auto mass = [&](double rho) {
        const double v = phi(rho);
        const double d = dphi(rho);
        const double c = cone.sff_norm_unit / rho;
        return (d * d + c * c * v * v) * std::pow(rho, cone.n - 2.0);
    };
    const double rough = num::integrate(mass, lo, hi, 1.0, 4000);
    const double tol = std::max(quad_tol, 1e-10 * std::abs(rough));
    return cone.link_measure * num::integrate(integrand, lo, hi, tol, 40000);
}

double stability_form_radial(const ConeProfile& cone, const RadialTestFunction& phi,
                             double quad_tol) {
    phi.validate(cone.n);
    return radial_quadratic_form(
        cone, [&phi](double r) { return phi.value(r); },
        [&phi](double r) { return phi.deriv(r); }, phi.inner_cut, 2.0 * phi.outer_cut,
        quad_tol);
}

const char* to_string(ConeVerdict v) {
    switch (v) {
        case ConeVerdict::UnstableWithWitness: return "UnstableWithWitness";
        case ConeVerdict::NoNegativeDirectionFound: return "NoNegativeDirectionFound";
    }
    return "?";
}

StabilityScanReport stability_scan(const std::vector<int>& simons_dims,
                                   int search_budget, double quad_tol) {
    if (search_budget < 2) throw ValidationError("stability_scan: budget too small");
    StabilityScanReport report;
    for (int n : simons_dims) {
        if (n < 4 || n % 2 != 0)
            throw ValidationError("stability_scan: Simons dimensions are even and >= 4");
        StabilityScanEntry entry;
        entry.cone = make_cone_profile(n / 2, n, 1.0);
        entry.hardy_constant = 0.25 * (n - 3.0) * (n - 3.0);

        const double pivot = 0.5 * (5.0 - n);  // admissibility threshold for both exponents
        double best_q = std::numeric_limits<double>::infinity();
        RadialTestFunction best;
        auto consider = [&](double ae, double se) {
            RadialTestFunction cand;
            cand.alpha_exp = ae;
            cand.beta_exp = se - ae;
            if (!cand.admissible(n)) return;
            const double q = stability_form_radial(entry.cone, cand, quad_tol);
            if (q < best_q) {
                best_q = q;
                best = cand;
            }
        };
        // Explicit two-regime exponents known to work in low dimensions.
        consider(0.25 * (5.0 - n) + 0.5 * std::sqrt(2.0),
                 0.25 * (5.0 - n) - 0.5 * std::sqrt(2.0));
        for (int i = 1; i <= search_budget; ++i)
            for (int j = 1; j <= search_budget; ++j) {
                const double ae = pivot + 2.0 * i / search_budget;
                const double se = pivot - 2.0 * j / search_budget;
                consider(ae, se);
            }
        // Local refinement around the best pair.
        for (int round = 0; round < 2; ++round) {
            const double step = 0.1 / (round + 1);
            const double a0 = best.alpha_exp, s0 = best.alpha_exp + best.beta_exp;
            for (int di = -2; di <= 2; ++di)
                for (int dj = -2; dj <= 2; ++dj)
                    consider(a0 + step * di, s0 + step * dj);
        }
        entry.q_value = best_q;
        if (best_q < -quad_tol) {
            entry.verdict = ConeVerdict::UnstableWithWitness;
            entry.witness = best;
        } else {
            entry.verdict = ConeVerdict::NoNegativeDirectionFound;
        }
        report.entries.push_back(entry);
    }
    return report;
}

std::string StabilityScanReport::to_json() const {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const StabilityScanEntry& e : entries) {
        nlohmann::ordered_json j;
        j["n"] = e.cone.n;
        j["m"] = e.cone.m;
        j["delta"] = e.cone.delta;
        j["sff_norm_unit"] = e.cone.sff_norm_unit;
        j["hardy_constant"] = e.hardy_constant;
        j["verdict"] = to_string(e.verdict);
        if (e.verdict == ConeVerdict::UnstableWithWitness) {
            nlohmann::ordered_json w;
            w["alpha"] = e.witness.alpha_exp;
            w["beta"] = e.witness.beta_exp;
            w["inner_cut"] = e.witness.inner_cut;
            w["outer_cut"] = e.witness.outer_cut;
            j["witness_params"] = std::move(w);
        } else {
            j["witness_params"] = nullptr;
        }
        j["q_value"] = e.q_value;
        arr.push_back(std::move(j));
    }
    return arr.dump();
}

}  // namespace phaselab
