#include "phaselab/nonlocalfield.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "phaselab/numerics.hpp"

namespace phaselab {

namespace {

constexpr double kExteriorReach = 50.0;  // truncation radius in domain diameters

// Exact integral of |x-y|^{-1-alpha} over two 1D cells `sep` cells apart.
// Touching cells (sep == 1) keep the exact value only for alpha < 1; for
// alpha >= 1 the exact integral diverges against cellwise-constant data, so
// the midpoint value is used there (fields are smooth in that regime).
double pair_weight_1d(int sep, double h, double alpha) {
    const double d = sep * h;
    if (sep >= 2 || alpha < 1.0)
        return num::psi_power(d + h, alpha) - 2.0 * num::psi_power(d, alpha) +
               num::psi_power(d - h, alpha);
    return h * h * std::pow(d, -1.0 - alpha);
}

double same_cell_coeff_1d(double alpha) { return 2.0 / ((2.0 - alpha) * (3.0 - alpha)); }

// Sign-limited slope; flat on one side (e.g. at a sharp step) gives zero.
double limited_slope(double um, double u0, double up, double h) {
    const double a = (u0 - um) / h, b = (up - u0) / h;
    if (a * b <= 0.0) return 0.0;
    return 2.0 * a * b / (a + b);
}

struct ExteriorQuadratic {
    // Exterior + tail contribution for cell i is a_i u^2 - 2 b_i u + c_i.
    std::vector<double> a, b, c;
};

ExteriorQuadratic exterior_coefficients_1d(const NonlocalField& f) {
    const Grid& g = f.grid;
    const int m = g.counts[0];
    const double h = g.h;
    const double alpha = f.kernel.alpha;
    const double A = f.domain_lo(), B = f.domain_hi();
    const double reach = kExteriorReach * (B - A);
    const int next = static_cast<int>(std::llround(reach / h));

    ExteriorQuadratic q;
    q.a.assign(m, 0.0);
    q.b.assign(m, 0.0);
    q.c.assign(m, 0.0);
    for (int side = 0; side < 2; ++side) {
        const double sgn = side == 0 ? -1.0 : 1.0;
        const double edge = side == 0 ? A : B;
        for (int k = 0; k < next; ++k) {
            const double center = edge + sgn * (0.5 + k) * h;
            const double v = f.exterior(center, 0.0);
            for (int i = 0; i < m; ++i) {
                const int sep = (side == 0 ? i : m - 1 - i) + k + 1;
                const double w = 2.0 * pair_weight_1d(sep, h, alpha);
                q.a[i] += w;
                q.b[i] += w * v;
                q.c[i] += w * v * v;
            }
        }
        // Constant tail past the truncation radius: kernel column integral
        // times the cell measure.
        const double far = edge + sgn * (reach + h);
        const double v = f.exterior(far, 0.0);
        for (int i = 0; i < m; ++i) {
            const double dist = std::abs(edge + sgn * reach - g.x(i));
            const double w = 2.0 * h * std::pow(dist, -alpha) / alpha;
            q.a[i] += w;
            q.b[i] += w * v;
            q.c[i] += w * v * v;
        }
    }
    return q;
}

struct RingCell {
    double x, y, area, value;
};

// Exterior of a 2D box domain tiled by rings of geometrically growing cells.
std::vector<RingCell> exterior_rings_2d(const NonlocalField& f) {
    const Grid& g = f.grid;
    const double h = g.h;
    const double lo0 = g.lo[0] - 0.5 * h, lo1 = g.lo[1] - 0.5 * h;
    const double hi0 = g.hi()[0] + 0.5 * h, hi1 = g.hi()[1] + 0.5 * h;
    const double diam = std::max(hi0 - lo0, hi1 - lo1);
    const double reach = kExteriorReach * diam;

    std::vector<RingCell> cells;
    double inner_lo0 = lo0, inner_lo1 = lo1, inner_hi0 = hi0, inner_hi1 = hi1;
    double t = h;
    while (inner_hi0 - hi0 < reach) {
        const double out_lo0 = inner_lo0 - t, out_lo1 = inner_lo1 - t;
        const double out_hi0 = inner_hi0 + t, out_hi1 = inner_hi1 + t;
        const int nx = std::max(1, static_cast<int>(std::ceil((out_hi0 - out_lo0) / t)));
        const double s = (out_hi0 - out_lo0) / nx;
        // bottom and top strips
        for (int k = 0; k < nx; ++k) {
            const double cx = out_lo0 + (k + 0.5) * s;
            cells.push_back({cx, inner_lo1 - 0.5 * t, s * t, 0.0});
            cells.push_back({cx, inner_hi1 + 0.5 * t, s * t, 0.0});
        }
        // left and right strips (between the horizontal strips)
        const int ny = std::max(1, static_cast<int>(std::ceil((inner_hi1 - inner_lo1) / t)));
        const double sy = (inner_hi1 - inner_lo1) / ny;
        for (int k = 0; k < ny; ++k) {
            const double cy = inner_lo1 + (k + 0.5) * sy;
            cells.push_back({inner_lo0 - 0.5 * t, cy, sy * t, 0.0});
            cells.push_back({inner_hi0 + 0.5 * t, cy, sy * t, 0.0});
        }
        inner_lo0 = out_lo0;
        inner_lo1 = out_lo1;
        inner_hi0 = out_hi0;
        inner_hi1 = out_hi1;
        t *= 1.5;
    }
    for (RingCell& c : cells) c.value = f.exterior(c.x, c.y);
    return cells;
}

double gagliardo_1d(const NonlocalField& f) {
    const Grid& g = f.grid;
    const int m = g.counts[0];
    const double h = g.h;
    const double alpha = f.kernel.alpha;
    const std::vector<double>& u = f.values;

    std::vector<double> wsep(m, 0.0);
    for (int s = 1; s < m; ++s) wsep[s] = pair_weight_1d(s, h, alpha);

    double sum = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            const double d = u[i] - u[j];
            sum += 2.0 * d * d * wsep[j - i];
        }

    const double coeff = same_cell_coeff_1d(alpha) * std::pow(h, 3.0 - alpha);
    for (int i = 0; i < m; ++i) {
        const double um = i > 0 ? u[i - 1] : f.exterior(f.domain_lo() - 0.5 * h, 0.0);
        const double up = i < m - 1 ? u[i + 1] : f.exterior(f.domain_hi() + 0.5 * h, 0.0);
        const double s = limited_slope(um, u[i], up, h);
        sum += s * s * coeff;
    }

    const ExteriorQuadratic q = exterior_coefficients_1d(f);
    for (int i = 0; i < m; ++i)
        sum += q.a[i] * u[i] * u[i] - 2.0 * q.b[i] * u[i] + q.c[i];
    return sum;
}

double gagliardo_2d(const NonlocalField& f) {
    const Grid& g = f.grid;
    const int nx = g.counts[0], ny = g.counts[1];
    const double h = g.h;
    const double alpha = f.kernel.alpha;
    const double np_alpha = -(2.0 + alpha) * 0.5;
    const std::vector<double>& u = f.values;
    const double cell_area = h * h;

    double sum = 0.0;
    const int total = nx * ny;
    for (int p = 0; p < total; ++p) {
        const int pi = p % nx, pj = p / nx;
        const double px = g.x(pi), py = g.y(pj);
        for (int q = p + 1; q < total; ++q) {
            const int qi = q % nx, qj = q / nx;
            const double dx = g.x(qi) - px, dy = g.y(qj) - py;
            const double d = u[p] - u[q];
            sum += 2.0 * d * d * cell_area * cell_area *
                   std::pow(dx * dx + dy * dy, np_alpha);
        }
    }

    // Same-cell correction from axis slopes (cross terms cancel by symmetry).
    static thread_local double cached_alpha = -1.0, cached_iax = 0.0;
    if (cached_alpha != alpha) {
        auto inner = [alpha](double z2) {
            return num::integrate(
                [alpha, z2](double z1) {
                    const double r2 = z1 * z1 + z2 * z2;
                    if (r2 == 0.0) return 0.0;
                    return z1 * z1 * std::pow(r2, -(2.0 + alpha) * 0.5) * (1.0 - z1);
                },
                0.0, 1.0, 1e-10);
        };
        cached_iax = 4.0 * num::integrate(
                               [&inner](double z2) { return inner(z2) * (1.0 - z2); }, 0.0,
                               1.0, 1e-8);
        cached_alpha = alpha;
    }
    const double corr_coeff = cached_iax * std::pow(h, 4.0 - alpha);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            auto val = [&](int ii, int jj) {
                if (ii >= 0 && ii < nx && jj >= 0 && jj < ny) return u[g.index(ii, jj)];
                return f.exterior(g.lo[0] + ii * h, g.lo[1] + jj * h);
            };
            const double sx = limited_slope(val(i - 1, j), val(i, j), val(i + 1, j), h);
            const double sy = limited_slope(val(i, j - 1), val(i, j), val(i, j + 1), h);
            sum += (sx * sx + sy * sy) * corr_coeff;
        }

    const std::vector<RingCell> ext = exterior_rings_2d(f);
    for (int p = 0; p < total; ++p) {
        const int pi = p % nx, pj = p / nx;
        const double px = g.x(pi), py = g.y(pj);
        for (const RingCell& e : ext) {
            const double dx = e.x - px, dy = e.y - py;
            const double d = u[p] - e.value;
            sum += 2.0 * d * d * cell_area * e.area * std::pow(dx * dx + dy * dy, np_alpha);
        }
        // Radial tail against the angular average of the far exterior.
        const double diam =
            std::max(g.hi()[0] - g.lo[0], g.hi()[1] - g.lo[1]) + h;
        const double reach = kExteriorReach * diam;
        double far_avg = 0.0;
        for (int a = 0; a < 16; ++a) {
            const double ang = 2.0 * M_PI * a / 16.0;
            far_avg += f.exterior(px + reach * std::cos(ang), py + reach * std::sin(ang));
        }
        far_avg /= 16.0;
        const double d = u[p] - far_avg;
        sum += 2.0 * d * d * cell_area * 2.0 * M_PI * std::pow(reach, -alpha) / alpha;
    }
    return sum;
}

double potential_term(const NonlocalField& f, const DoubleWell& w) {
    const double vol = f.grid.dim == 1 ? f.grid.h : f.grid.h * f.grid.h;
    double p = 0.0;
    for (double v : f.values) p += w.W(v);
    return p * vol;
}

void check_field(const NonlocalField& f) {
    if (f.grid.dim != 1 && f.grid.dim != 2)
        throw ValidationError("nonlocal: dimension must be 1 or 2");
    if (f.grid.dim == 2 && (f.grid.counts[0] > 64 || f.grid.counts[1] > 64))
        throw ValidationError("nonlocal: 2D grids are limited to 64x64 cells");
    if (static_cast<int>(f.values.size()) != f.grid.size())
        throw ValidationError("nonlocal: value count does not match grid");
    if (!f.exterior) throw ValidationError("nonlocal: exterior data required");
    if (!(f.eps > 0.0)) throw ValidationError("nonlocal: eps must be positive");
    for (double v : f.values)
        if (!std::isfinite(v)) throw ValidationError("nonlocal: non-finite value");
}

}  // namespace

KernelAlpha make_kernel(int n, double alpha) {
    if (n < 1) throw ValidationError("kernel: dimension must be positive");
    if (!(alpha > 0.0 && alpha < 2.0))
        throw ValidationError("kernel: alpha must lie in (0,2)");
    return KernelAlpha{n, alpha};
}

NonlocalField nonlocal_line_field(double a, double b, int cells, double eps,
                                  const KernelAlpha& kernel,
                                  const std::function<double(double)>& init,
                                  const std::function<double(double)>& exterior) {
    if (!(a < b)) throw ValidationError("nonlocal: need a < b");
    if (cells < 4) throw ValidationError("nonlocal: need at least 4 cells");
    if (kernel.n != 1) throw ValidationError("nonlocal: kernel dimension mismatch");
    NonlocalField f;
    const double h = (b - a) / cells;
    f.grid.dim = 1;
    f.grid.h = h;
    f.grid.lo = {a + 0.5 * h, 0.0};
    f.grid.counts = {cells, 1};
    f.eps = eps;
    f.kernel = kernel;
    f.values.resize(cells);
    for (int i = 0; i < cells; ++i) f.values[i] = init(f.grid.x(i));
    f.exterior = [exterior](double x, double) { return exterior(x); };
    check_field(f);
    return f;
}

double fractional_laplacian_1d(const std::function<double(double)>& u, double x,
                               const KernelAlpha& kernel, double cutoff_R) {
    if (kernel.n != 1) throw ValidationError("fractional_laplacian_1d: kernel must be 1D");
    if (!(cutoff_R > 1.0)) throw ValidationError("fractional_laplacian_1d: cutoff must exceed 1");
    const double alpha = kernel.alpha;
    const double u0 = u(x);
    auto paired = [&](double z) {
        return (2.0 * u0 - u(x + z) - u(x - z)) * std::pow(z, -1.0 - alpha);
    };
    // Dyadic refinement towards the origin; each annulus is integrated to
    // high accuracy and the sum must stabilize.
    double total = 0.0;
    double hi = cutoff_R;
    bool converged = false;
    for (int k = 0; k < 80; ++k) {
        const double lo = hi * 0.5;
        const double piece = num::integrate(paired, lo, hi, 1e-12, 4000);
        total += piece;
        hi = lo;
        if (hi < 1e-8 && std::abs(piece) < 1e-8 * (1.0 + std::abs(total))) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NumericError("fractional_laplacian_1d: near-origin refinement failed");
    // Tail: u constant beyond the window.
    total += (2.0 * u0 - u(x + cutoff_R) - u(x - cutoff_R)) *
             std::pow(cutoff_R, -alpha) / alpha;
    return total;
}

double gagliardo_term(const NonlocalField& f) {
    check_field(f);
    const double g = f.grid.dim == 1 ? gagliardo_1d(f) : gagliardo_2d(f);
    if (!std::isfinite(g))
        throw NumericError(
            "gagliardo_term: non-finite interaction; refine the grid (alpha close to 2 "
            "needs finer cells)");
    return g;
}

double energy_nonlocal(const NonlocalField& f, const DoubleWell& w) {
    return 0.25 * gagliardo_term(f) + potential_term(f, w);
}

double sigma_eps(double alpha, double eps) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw ValidationError("sigma_eps: alpha outside (0,2)");
    if (!(eps > 0.0)) throw ValidationError("sigma_eps: eps must be positive");
    if (alpha < 1.0) return std::pow(eps, -alpha);
    if (alpha > 1.0) return 1.0 / eps;
    const double l = std::abs(std::log(eps));
    if (l == 0.0) throw ValidationError("sigma_eps: eps = 1 with alpha = 1 (log vanishes)");
    return 1.0 / (eps * l);
}

double scaled_energy(const NonlocalField& f, const DoubleWell& w) {
    const double s = sigma_eps(f.kernel.alpha, f.eps);
    return s * (std::pow(f.eps, f.kernel.alpha) * gagliardo_term(f) + potential_term(f, w));
}

NonlocalMinimizeResult minimize_nonlocal(const NonlocalField& f, const DoubleWell& w,
                                         const MinimizeOptions& opts) {
    check_field(f);
    if (f.grid.dim != 1)
        throw ValidationError("minimize_nonlocal: descent is implemented for 1D fields");
    NonlocalMinimizeResult out;
    out.field = f;
    NonlocalField& fld = out.field;
    const Grid& g = fld.grid;
    const int m = g.counts[0];
    const double h = g.h;
    const double alpha = fld.kernel.alpha;
    const double gauge = sigma_eps(alpha, fld.eps);
    const double epsa = std::pow(fld.eps, alpha);

    std::vector<double> wsep(m, 0.0);
    for (int s = 1; s < m; ++s) wsep[s] = pair_weight_1d(s, h, alpha);
    const ExteriorQuadratic q = exterior_coefficients_1d(fld);
    const double ext_left = fld.exterior(fld.domain_lo() - 0.5 * h, 0.0);
    const double ext_right = fld.exterior(fld.domain_hi() + 0.5 * h, 0.0);
    const double scc = same_cell_coeff_1d(alpha) * std::pow(h, 3.0 - alpha);

    auto energy_of = [&](const std::vector<double>& u) {
        double sum = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) {
                const double d = u[i] - u[j];
                sum += 2.0 * d * d * wsep[j - i];
            }
        for (int i = 0; i < m; ++i) {
            const double um = i > 0 ? u[i - 1] : ext_left;
            const double up = i < m - 1 ? u[i + 1] : ext_right;
            const double s = limited_slope(um, u[i], up, h);
            sum += s * s * scc;
            sum += q.a[i] * u[i] * u[i] - 2.0 * q.b[i] * u[i] + q.c[i];
        }
        double pot = 0.0;
        for (int i = 0; i < m; ++i) pot += w.W(u[i]);
        return gauge * (epsa * sum + pot * h);
    };

    auto gradient_of = [&](const std::vector<double>& u, std::vector<double>& grad) {
        grad.assign(m, 0.0);
        for (int i = 0; i < m; ++i) {
            double acc = 0.0;
            for (int j = 0; j < m; ++j)
                if (j != i) acc += 4.0 * (u[i] - u[j]) * wsep[std::abs(i - j)];
            acc += 2.0 * q.a[i] * u[i] - 2.0 * q.b[i];
            grad[i] = epsa * acc;
        }
        // Same-cell term: differentiate the limited slope on its active branch.
        for (int i = 0; i < m; ++i) {
            const double um = i > 0 ? u[i - 1] : ext_left;
            const double up = i < m - 1 ? u[i + 1] : ext_right;
            const double a = (u[i] - um) / h, b = (up - u[i]) / h;
            if (a * b <= 0.0) continue;
            const double s = 2.0 * a * b / (a + b);
            const double dsda = 2.0 * b * b / ((a + b) * (a + b));
            const double dsdb = 2.0 * a * a / ((a + b) * (a + b));
            const double pre = 2.0 * s * scc * epsa;
            if (i > 0) grad[i - 1] += pre * dsda * (-1.0 / h);
            grad[i] += pre * (dsda - dsdb) / h;
            if (i < m - 1) grad[i + 1] += pre * dsdb / h;
        }
        for (int i = 0; i < m; ++i) grad[i] += h * w.dW(u[i]);
        for (int i = 0; i < m; ++i) grad[i] *= gauge;
    };

    double energy = energy_of(fld.values);
    std::vector<double> grad, trial(m);
    std::vector<double> prev_u, prev_g;
    // Rough curvature scale of the quadratic part for the first trial step.
    double diag = 0.0;
    for (int s = 1; s < m; ++s) diag += 4.0 * wsep[s];
    double step = 1.0 / (gauge * (epsa * (2.0 * diag + 2.0 * q.a[0]) + 3.0 * h));

    for (int it = 0; it < opts.max_iters; ++it) {
        gradient_of(fld.values, grad);
        double gmax = 0.0, gsq = 0.0;
        for (double v : grad) {
            gmax = std::max(gmax, std::abs(v));
            gsq += v * v;
        }
        out.grad_norm = gmax / h;
        if (out.grad_norm < opts.tol) {
            out.converged = true;
            out.iterations = it;
            out.energy = energy;
            return out;
        }
        if (!prev_u.empty()) {
            double uy = 0.0, yy = 0.0;
            for (int k = 0; k < m; ++k) {
                const double du = fld.values[k] - prev_u[k];
                const double dg = grad[k] - prev_g[k];
                uy += du * dg;
                yy += dg * dg;
            }
            if (uy > 0.0 && yy > 0.0) step = std::min(uy / yy, 1e6 * step);
        }
        prev_u = fld.values;
        prev_g = grad;
        bool accepted = false;
        bool first_try = true;
        for (int bt = 0; bt < 64; ++bt) {
            for (int i = 0; i < m; ++i) trial[i] = fld.values[i] - step * grad[i];
            const double e_new = energy_of(trial);
            if (e_new <= energy - opts.armijo * step * gsq) {
                fld.values.swap(trial);
                energy = e_new;
                accepted = true;
                break;
            }
            step *= 0.5;
            first_try = false;
        }
        if (!accepted)
            throw NumericError("minimize_nonlocal: line search failed to decrease energy");
        if (first_try) step *= 1.25;
    }
    gradient_of(fld.values, grad);
    double gmax = 0.0;
    for (double v : grad) gmax = std::max(gmax, std::abs(v));
    out.grad_norm = gmax / h;
    out.converged = out.grad_norm < opts.tol;
    out.iterations = opts.max_iters;
    out.energy = energy;
    return out;
}

std::string ScalingProbeReport::to_json() const {
    nlohmann::ordered_json j;
    j["alpha"] = alpha;
    j["eps"] = eps;
    j["J"] = J;
    j["fitted_exponent"] = fitted_exponent;
    j["r2"] = r2;
    return j.dump();
}

ScalingProbeReport scaling_probe(double alpha, const std::vector<double>& eps_list,
                                 const std::function<double(double)>& u_star) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw ValidationError("scaling_probe: alpha outside (0,2)");
    if (eps_list.size() < 3)
        throw ValidationError("scaling_probe: need at least 3 eps values");
    for (double e : eps_list)
        if (!(e > 0.0 && e < 1.0))
            throw ValidationError("scaling_probe: eps values must lie in (0,1)");
    for (double t : {0.15, 0.4, 0.8})
        if (std::abs(u_star(t) + u_star(-t)) > 1e-10)
            throw ValidationError("scaling_probe: u_star must be odd");
    if (std::abs(u_star(1.0) - 1.0) > 1e-12 || std::abs(u_star(1.7) - 1.0) > 1e-12)
        throw ValidationError("scaling_probe: u_star must equal 1 on [1, inf)");

    ScalingProbeReport rep;
    rep.alpha = alpha;
    rep.eps = eps_list;

    for (double eps : eps_list) {
        auto uu = [&u_star, eps](double x) { return u_star(x / eps); };
        const double inf = std::numeric_limits<double>::infinity();

        // Transition strip M = [-eps, eps]; u is constant on the rest of the
        // line, so everything away from M is a closed-form interval pair.
        auto layer_vs_interval = [&](double sgn_value, double c, double d) {
            // integral over M of (uu(x) - sgn_value)^2 * K-column against [c,d]
            return num::integrate(
                [&](double x) {
                    double col;
                    if (c >= eps) {  // interval to the right of M
                        col = (std::pow(c - x, -alpha) -
                               (std::isinf(d) ? 0.0 : std::pow(d - x, -alpha))) /
                              alpha;
                    } else {  // interval to the left of M
                        col = (std::pow(x - d, -alpha) -
                               (std::isinf(c) ? 0.0 : std::pow(x - c, -alpha))) /
                              alpha;
                    }
                    const double dv = uu(x) - sgn_value;
                    return dv * dv * col;
                },
                -eps, eps, 1e-10);
        };

        // M x M via the difference variable (symmetric, so twice z > 0).
        auto strip_self = [&]() {
            return 2.0 * num::integrate(
                             [&](double z) {
                                 if (z <= 0.0) return 0.0;
                                 const double inner = num::integrate(
                                     [&](double x) {
                                         const double d = uu(x) - uu(x + z);
                                         return d * d;
                                     },
                                     -eps, eps - z, 1e-12, 4000);
                                 return inner * std::pow(z, -1.0 - alpha);
                             },
                             0.0, 2.0 * eps, 1e-9);
        };

        double J = strip_self();
        // M against the constant flanks and the exterior (both orderings).
        J += 2.0 * layer_vs_interval(-1.0, -1.0, -eps);   // M x L
        J += 2.0 * layer_vs_interval(+1.0, eps, 1.0);     // M x R
        J += 2.0 * layer_vs_interval(+1.0, 1.0, inf);     // M x [1, inf)
        J += 2.0 * layer_vs_interval(-1.0, -inf, -1.0);   // M x (-inf, -1]
        // Constant-by-constant blocks: value difference is -1 - 1 = -2.
        J += 2.0 * 4.0 * num::interval_interaction(-1.0, -eps, eps, 1.0, alpha);   // L x R
        J += 2.0 * 4.0 * num::interval_interaction(-1.0, -eps, 1.0, inf, alpha);   // L x ext_r
        J += 2.0 * 4.0 * num::interval_interaction(-inf, -1.0, eps, 1.0, alpha);   // ext_l x R
        rep.J.push_back(J);
    }

    if (alpha != 1.0) {
        std::vector<double> lx, ly;
        for (std::size_t i = 0; i < eps_list.size(); ++i) {
            lx.push_back(std::log(eps_list[i]));
            ly.push_back(std::log(std::pow(eps_list[i], alpha) * rep.J[i]));
        }
        const num::LineFit fit = num::fit_line(lx, ly);
        rep.fitted_exponent = fit.slope;
        rep.r2 = fit.r2;
    } else {
        std::vector<double> lx;
        for (double e : eps_list) lx.push_back(std::abs(std::log(e)));
        const num::LineFit fit = num::fit_line(lx, rep.J);
        rep.fitted_exponent = fit.slope;
        rep.r2 = fit.r2;
    }
    return rep;
}

}  // namespace phaselab
