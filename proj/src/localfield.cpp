#include "phaselab/localfield.hpp"

#include <algorithm>
#include <cmath>

#include "phaselab/numerics.hpp"

namespace phaselab {

namespace {

double trapezoid_weight(const Grid& g, int i, int j) {
    double w = (i == 0 || i == g.counts[0] - 1) ? 0.5 : 1.0;
    if (g.dim == 2) w *= (j == 0 || j == g.counts[1] - 1) ? 0.5 : 1.0;
    return w;
}

double cell_volume(const Grid& g) { return g.dim == 1 ? g.h : g.h * g.h; }

// d(energy)/d(u_idx) at interior nodes; zero at boundary nodes.
void projected_gradient(const Field& f, const DoubleWell& w, std::vector<double>& g) {
    const Grid& gr = f.grid;
    const int nx = gr.counts[0], ny = gr.counts[1];
    const double vol = cell_volume(gr);
    const double edge = f.eps * (gr.dim == 1 ? 1.0 / gr.h : 1.0);
    g.assign(f.values.size(), 0.0);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            if (gr.is_boundary(i, j)) continue;
            const int idx = gr.index(i, j);
            double acc = 2.0 * gr.dim * f.values[idx];
            acc -= f.values[gr.index(i - 1, j)] + f.values[gr.index(i + 1, j)];
            if (gr.dim == 2)
                acc -= f.values[gr.index(i, j - 1)] + f.values[gr.index(i, j + 1)];
            g[idx] = edge * acc + vol * f.q_at(idx) * w.dW(f.values[idx]) / f.eps;
        }
    }
}

}  // namespace

double energy_local(const Field& f, const DoubleWell& w) {
    validate_field(f);
    const Grid& g = f.grid;
    const int nx = g.counts[0], ny = g.counts[1];
    const double vol = cell_volume(g);
    double grad_term = 0.0;
    for (int j = 0; j < ny; ++j) {
        const double tj = (g.dim == 2 && (j == 0 || j == ny - 1)) ? 0.5 : 1.0;
        for (int i = 0; i + 1 < nx; ++i) {
            const double d = (f.values[g.index(i + 1, j)] - f.values[g.index(i, j)]) / g.h;
            grad_term += tj * d * d;
        }
    }
    if (g.dim == 2) {
        for (int i = 0; i < nx; ++i) {
            const double ti = (i == 0 || i == nx - 1) ? 0.5 : 1.0;
            for (int j = 0; j + 1 < ny; ++j) {
                const double d = (f.values[g.index(i, j + 1)] - f.values[g.index(i, j)]) / g.h;
                grad_term += ti * d * d;
            }
        }
    }
    double well_term = 0.0;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int idx = g.index(i, j);
            well_term += trapezoid_weight(g, i, j) * f.q_at(idx) * w.W(f.values[idx]);
        }
    return 0.5 * f.eps * grad_term * vol + well_term * vol / f.eps;
}

double residual_allen_cahn(const Field& f, const DoubleWell& w) {
    validate_field(f);
    const Grid& g = f.grid;
    const int nx = g.counts[0], ny = g.counts[1];
    const double e2h2 = f.eps * f.eps / (g.h * g.h);
    double worst = 0.0;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            if (g.is_boundary(i, j)) continue;
            const int idx = g.index(i, j);
            double lap = -2.0 * g.dim * f.values[idx] + f.values[g.index(i - 1, j)] +
                         f.values[g.index(i + 1, j)];
            if (g.dim == 2)
                lap += f.values[g.index(i, j - 1)] + f.values[g.index(i, j + 1)];
            const double r = e2h2 * lap - f.q_at(idx) * w.dW(f.values[idx]);
            worst = std::max(worst, std::abs(r));
        }
    }
    return worst;
}

MinimizeResult minimize_local(const Field& f, const DoubleWell& w,
                              const MinimizeOptions& opts) {
    validate_field(f);
    if (!(opts.tol > 0.0)) throw ValidationError("minimize_local: tol must be positive");

    MinimizeResult out;
    out.field = f;
    Field& u = out.field;
    const Grid& g = u.grid;
    const double vol = cell_volume(g);
    const double res_scale = u.eps / vol;  // |gradient|*res_scale == AC residual

    // Curvature bound of the discrete energy, used for the first trial step.
    double d2_max = 0.0;
    for (int k = 0; k <= 60; ++k)
        d2_max = std::max(d2_max, std::abs(w.d2W(-1.5 + 3.0 * k / 60.0)));
    double step = opts.step0 > 0.0
                      ? opts.step0
                      : 1.0 / (4.0 * g.dim * u.eps * (g.dim == 1 ? 1.0 / g.h : 1.0) +
                               vol * d2_max / u.eps);

    std::vector<double> grad, trial(u.values.size());
    std::vector<double> prev_u, prev_g;
    double energy = energy_local(u, w);
    if (opts.record_trace) out.energy_trace.push_back(energy);

    for (int it = 0; it < opts.max_iters; ++it) {
        projected_gradient(u, w, grad);
        double gmax = 0.0, gsq = 0.0;
        for (double v : grad) {
            gmax = std::max(gmax, std::abs(v));
            gsq += v * v;
        }
        out.residual = gmax * res_scale;
        if (out.residual < opts.tol) {
            out.converged = true;
            out.iterations = it;
            out.energy = energy;
            return out;
        }
        // Barzilai-Borwein trial step; Armijo backtracking keeps the descent
        // monotone when the spectral guess overshoots.
        if (!prev_u.empty()) {
            double uy = 0.0, yy = 0.0;
            for (std::size_t k = 0; k < grad.size(); ++k) {
                const double du = u.values[k] - prev_u[k];
                const double dg = grad[k] - prev_g[k];
                uy += du * dg;
                yy += dg * dg;
            }
            if (uy > 0.0 && yy > 0.0) step = std::min(uy / yy, 1e6 * step);
        }
        prev_u = u.values;
        prev_g = grad;
        bool accepted = false;
        bool first_try = true;
        for (int bt = 0; bt < 64; ++bt) {
            for (std::size_t k = 0; k < trial.size(); ++k)
                trial[k] = u.values[k] - step * grad[k];
            std::swap(u.values, trial);
            const double e_new = energy_local(u, w);
            if (e_new <= energy - opts.armijo * step * gsq) {
                energy = e_new;
                accepted = true;
                break;
            }
            std::swap(u.values, trial);  // reject
            step *= 0.5;
            first_try = false;
        }
        if (!accepted)
            throw NumericError("minimize_local: line search failed to decrease energy");
        if (first_try) step *= 1.25;
        if (opts.record_trace) out.energy_trace.push_back(energy);
    }
    projected_gradient(u, w, grad);
    double gmax = 0.0;
    for (double v : grad) gmax = std::max(gmax, std::abs(v));
    out.residual = gmax * res_scale;
    out.iterations = opts.max_iters;
    out.energy = energy;
    out.converged = out.residual < opts.tol;
    return out;
}

LayerProfile layer_profile_1d(const DoubleWell& w, double half_width, double tol) {
    if (!(half_width >= 5.0)) throw ValidationError("layer_profile_1d: half_width must be >= 5");
    if (!(tol > 0.0)) throw ValidationError("layer_profile_1d: tol must be positive");

    // Central-difference residual of the reconstructed profile is O(h^2);
    // pick h so that it lands safely under tol.
    const double h_target = std::min(1.0 / 512.0, std::sqrt(tol / 3.0));
    const int half_n = static_cast<int>(std::ceil(half_width / h_target));
    if (half_n > 20000000)
        throw NumericError("layer_profile_1d: tolerance requires too fine a grid");
    const double h = half_width / half_n;

    auto speed = [&w](double u) {
        const double v = 2.0 * w.W(u);
        return v > 0.0 ? std::sqrt(v) : 0.0;
    };
    auto rk4 = [&speed](double u, double dx) {
        const double k1 = speed(u);
        const double k2 = speed(u + 0.5 * dx * k1);
        const double k3 = speed(u + 0.5 * dx * k2);
        const double k4 = speed(u + dx * k3);
        return u + dx / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };

    LayerProfile p;
    const int n = 2 * half_n + 1;
    p.x.resize(n);
    p.u.resize(n);
    p.x[half_n] = 0.0;
    p.u[half_n] = 0.0;
    for (int k = 1; k <= half_n; ++k) {
        p.x[half_n + k] = h * k;
        p.u[half_n + k] = std::min(1.0, rk4(p.u[half_n + k - 1], h));
        p.x[half_n - k] = -h * k;
        p.u[half_n - k] = std::max(-1.0, rk4(p.u[half_n - k + 1], -h));
    }

    double worst = 0.0;
    for (int k = 1; k + 1 < n; ++k) {
        const double second = (p.u[k + 1] - 2.0 * p.u[k] + p.u[k - 1]) / (h * h);
        worst = std::max(worst, std::abs(second - w.dW(p.u[k])));
    }
    if (worst >= tol)
        throw NumericError("layer_profile_1d: residual " + std::to_string(worst) +
                           " above tolerance");
    return p;
}

double stability_form(const Field& f, const DoubleWell& w,
                      const std::vector<double>& phi) {
    validate_field(f);
    const Grid& g = f.grid;
    if (phi.size() != f.values.size())
        throw ValidationError("stability_form: phi size mismatch");
    const int nx = g.counts[0], ny = g.counts[1];
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            if (g.is_boundary(i, j) && phi[g.index(i, j)] != 0.0)
                throw ValidationError("stability_form: phi must vanish on the boundary");

    const double vol = cell_volume(g);
    double grad_term = 0.0;
    for (int j = 0; j < ny; ++j) {
        const double tj = (g.dim == 2 && (j == 0 || j == ny - 1)) ? 0.5 : 1.0;
        for (int i = 0; i + 1 < nx; ++i) {
            const double d = (phi[g.index(i + 1, j)] - phi[g.index(i, j)]) / g.h;
            grad_term += tj * d * d;
        }
    }
    if (g.dim == 2) {
        for (int i = 0; i < nx; ++i) {
            const double ti = (i == 0 || i == nx - 1) ? 0.5 : 1.0;
            for (int j = 0; j + 1 < ny; ++j) {
                const double d = (phi[g.index(i, j + 1)] - phi[g.index(i, j)]) / g.h;
                grad_term += ti * d * d;
            }
        }
    }
    double well_term = 0.0;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int idx = g.index(i, j);
            well_term +=
                trapezoid_weight(g, i, j) * w.d2W(f.values[idx]) * phi[idx] * phi[idx];
        }
    return (grad_term + well_term) * vol;
}

GammaProbeResult gamma_probe_local(const std::vector<double>& eps_list,
                                   const DoubleWell& w) {
    if (eps_list.empty()) throw ValidationError("gamma_probe_local: empty eps list");
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] > 0.0))
            throw ValidationError("gamma_probe_local: eps must be positive");
        if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
            throw ValidationError("gamma_probe_local: eps list must be decreasing");
    }
    GammaProbeResult out;
    out.limit_constant = surface_tension_constant(w);
    for (double eps : eps_list) {
        // Refine with eps so the discretization bias keeps shrinking along
        // the list (nodes per eps grows like eps^{-1/2}).
        const int m = std::max<int>(16, llround(16.0 * std::sqrt(0.125 / eps)));
        const int n = static_cast<int>(llround(m / eps)) + 1;
        Grid g = Grid::line(-0.5, 0.5, n);
        Field f = sample_field(
            g, eps, [eps](double x, double) { return std::tanh(x / (eps * std::sqrt(2.0))); });
        f.values.front() = -1.0;
        f.values.back() = 1.0;
        MinimizeOptions opts;
        opts.tol = 1e-7;
        opts.max_iters = 200000;
        MinimizeResult res = minimize_local(f, w, opts);
        out.rows.push_back({eps, res.energy});
    }
    return out;
}

}  // namespace phaselab
