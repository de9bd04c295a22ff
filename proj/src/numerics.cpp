#include "phaselab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace phaselab {
namespace num {

namespace {

// 15-point Kronrod nodes/weights on [-1,1] with the embedded 7-point Gauss
// rule (positive half; symmetric).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkResult {
    double value;
    double error;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - hw * kXgk[i]);
        fv[14 - i] = f(c + hw * kXgk[i]);
    }
    fv[7] = f(c);
    double resk = 0.0, resg = 0.0;
    for (int i = 0; i < 7; ++i) resk += kWgk[i] * (fv[i] + fv[14 - i]);
    resk += kWgk[7] * fv[7];
    // Gauss points are the odd-indexed Kronrod points.
    for (int i = 0; i < 3; ++i) resg += kWg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    resg += kWg[3] * fv[7];
    return {resk * hw, std::abs((resk - resg) * hw)};
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_intervals) {
    if (!(abs_tol > 0.0)) throw ValidationError("integrate: tolerance must be positive");
    if (a == b) return 0.0;

    struct Piece {
        double a, b, value, error;
        bool operator<(const Piece& o) const { return error < o.error; }
    };
    std::priority_queue<Piece> heap;
    GkResult r0 = gk15(f, a, b);
    heap.push({a, b, r0.value, r0.error});
    double total_err = r0.error;
    int used = 1;
    while (total_err > abs_tol && used < max_intervals) {
        Piece p = heap.top();
        heap.pop();
        const double m = 0.5 * (p.a + p.b);
        if (m <= p.a || m >= p.b) {  // interval at machine resolution
            heap.push(p);
            break;
        }
        GkResult rl = gk15(f, p.a, m);
        GkResult rr = gk15(f, m, p.b);
        total_err += rl.error + rr.error - p.error;
        heap.push({p.a, m, rl.value, rl.error});
        heap.push({m, p.b, rr.value, rr.error});
        ++used;
    }
    if (total_err > abs_tol * 16.0 && used >= max_intervals)
        throw NumericError("integrate: quadrature failed to converge");
    double sum = 0.0;
    std::vector<Piece> pieces;
    while (!heap.empty()) {
        pieces.push_back(heap.top());
        heap.pop();
    }
    // Fixed-order accumulation keeps the result deterministic.
    std::sort(pieces.begin(), pieces.end(),
              [](const Piece& l, const Piece& r) { return l.a < r.a; });
    for (const Piece& p : pieces) sum += p.value;
    return sum;
}

double psi_power(double r, double alpha) {
    if (r < 0.0) throw ValidationError("psi_power: negative argument");
    if (alpha == 1.0) {
        if (r == 0.0) return std::numeric_limits<double>::infinity();
        return -std::log(r);
    }
    if (r == 0.0) {
        if (alpha < 1.0) return 0.0;
        return std::numeric_limits<double>::infinity();
    }
    return std::pow(r, 1.0 - alpha) / (alpha * (alpha - 1.0));
}

double interval_interaction(double a1, double a2, double b1, double b2,
                            double alpha) {
    if (!(a1 <= a2) || !(b1 <= b2))
        throw ValidationError("interval_interaction: malformed intervals");
    if (a2 > b1)
        throw ValidationError("interval_interaction: intervals must be ordered and disjoint");
    if (a2 == b1 && alpha >= 1.0)
        throw NumericError("interval_interaction: divergent (touching intervals, alpha >= 1)");

    const bool inf_lo = std::isinf(a1);
    const bool inf_hi = std::isinf(b2);
    if (inf_hi && inf_lo && alpha <= 1.0)
        throw NumericError("interval_interaction: divergent (both sides unbounded)");
    // psi'(r) -> 0 as r -> infinity for alpha > 0, so the terms involving an
    // infinite endpoint drop out pairwise.
    double v = 0.0;
    if (!inf_hi && !inf_lo) v += psi_power(b2 - a1, alpha);
    if (!inf_hi) v -= psi_power(b2 - a2, alpha);
    if (!inf_lo) v -= psi_power(b1 - a1, alpha);
    v += psi_power(b1 - a2, alpha);
    return v;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw ValidationError("fit_line: need at least two matched samples");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw ValidationError("fit_line: degenerate abscissae");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = (syy == 0.0) ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (counter + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
    return static_cast<double>(counter_hash(seed, counter) >> 11) * 0x1.0p-53;
}

double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * (3.0 - 2.0 * t);
}

double one_sided_derivative(const std::function<double(double)>& g, double x,
                            int side, double h) {
    if (side != 1 && side != -1) throw ValidationError("one_sided_derivative: side must be +-1");
    if (!(h > 0.0)) throw ValidationError("one_sided_derivative: step must be positive");
    const double s = static_cast<double>(side);
    const double g0 = g(x);
    const double d1 = (g(x + s * h) - g0) / (s * h);
    const double d2 = (g(x + s * 0.5 * h) - g0) / (s * 0.5 * h);
    return 2.0 * d2 - d1;  // cancels the O(h) term
}

}  // namespace num
}  // namespace phaselab
