#include "phaselab/interfaces.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "phaselab/numerics.hpp"

namespace phaselab {

namespace {

double cell_volume(const Grid& g) { return g.dim == 1 ? g.h : g.h * g.h; }

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

int nearest_node(const Grid& g, std::array<double, 2> p) {
    int i = static_cast<int>(std::lround((p[0] - g.lo[0]) / g.h));
    i = std::clamp(i, 0, g.counts[0] - 1);
    int j = 0;
    if (g.dim == 2) {
        j = static_cast<int>(std::lround((p[1] - g.lo[1]) / g.h));
        j = std::clamp(j, 0, g.counts[1] - 1);
    }
    return g.index(i, j);
}

void check_radii_inside(const Grid& g, std::array<double, 2> center,
                        const std::vector<double>& radii) {
    const auto hi = g.hi();
    for (double r : radii) {
        if (!(r > 0.0)) throw ValidationError("radius must be positive");
        bool ok = center[0] - r >= g.lo[0] - 0.5 * g.h &&
                  center[0] + r <= hi[0] + 0.5 * g.h;
        if (g.dim == 2)
            ok = ok && center[1] - r >= g.lo[1] - 0.5 * g.h &&
                 center[1] + r <= hi[1] + 0.5 * g.h;
        if (!ok) throw ValidationError("radius exceeds the grid");
    }
}

// 1D squared-distance transform (Felzenszwalb-Huttenlocher), used per row
// and per column for exact nearest-bad-cell distances.
void edt_1d(const std::vector<double>& f, std::vector<double>& d) {
    const int n = static_cast<int>(f.size());
    d.assign(n, 0.0);
    std::vector<int> v(n);
    std::vector<double> z(n + 1);
    int k = 0;
    v[0] = 0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    for (int q = 1; q < n; ++q) {
        double s;
        while (true) {
            s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
            if (s <= z[k]) {
                --k;
                continue;
            }
            break;
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = std::numeric_limits<double>::infinity();
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
}

// Squared distance (in cells) from every node to the nearest node where
// bad(idx) is true.
std::vector<double> distance_sq_to_bad(const Grid& g, const std::vector<char>& bad) {
    const int nx = g.counts[0], ny = g.counts[1];
    const double big = 1e18;
    std::vector<double> d(nx * ny);
    for (int idx = 0; idx < nx * ny; ++idx) d[idx] = bad[idx] ? 0.0 : big;
    std::vector<double> line, out;
    // columns
    if (ny > 1) {
        for (int i = 0; i < nx; ++i) {
            line.resize(ny);
            for (int j = 0; j < ny; ++j) line[j] = d[g.index(i, j)];
            edt_1d(line, out);
            for (int j = 0; j < ny; ++j) d[g.index(i, j)] = out[j];
        }
    }
    // rows
    for (int j = 0; j < ny; ++j) {
        line.resize(nx);
        for (int i = 0; i < nx; ++i) line[i] = d[g.index(i, j)];
        edt_1d(line, out);
        for (int i = 0; i < nx; ++i) d[g.index(i, j)] = out[i];
    }
    return d;
}

}  // namespace

LevelSetStats density_ratios(const Grid& g, const std::vector<double>& values,
                             double theta1, double theta2,
                             const std::vector<double>& radii,
                             std::array<double, 2> center) {
    if (static_cast<int>(values.size()) != g.size())
        throw ValidationError("density_ratios: value count mismatch");
    check_radii_inside(g, center, radii);
    LevelSetStats st;
    st.theta1 = theta1;
    st.theta2 = theta2;
    st.center = center;
    st.radii = radii;
    const double vol = cell_volume(g);
    for (double r : radii) {
        double above = 0.0, below = 0.0, band = 0.0, ball = 0.0;
        for (int idx = 0; idx < g.size(); ++idx) {
            const auto p = g.pos(idx);
            const double dx = p[0] - center[0];
            const double dy = g.dim == 2 ? p[1] - center[1] : 0.0;
            if (dx * dx + dy * dy > r * r) continue;
            ball += vol;
            const double u = values[idx];
            if (u > theta2)
                above += vol;
            else if (u < -theta2)
                below += vol;
            else
                band += vol;
        }
        st.above.push_back(above);
        st.below.push_back(below);
        st.band.push_back(band);
        st.ball_measure.push_back(ball);
        const double rn = g.dim == 1 ? r : r * r;
        st.above_ratio.push_back(above / rn);
        st.below_ratio.push_back(below / rn);
    }
    st.min_above_ratio = *std::min_element(st.above_ratio.begin(), st.above_ratio.end());
    st.min_below_ratio = *std::min_element(st.below_ratio.begin(), st.below_ratio.end());
    return st;
}

LevelSetStats density_ratios(const Field& f, double theta1, double theta2,
                             const std::vector<double>& radii,
                             std::array<double, 2> center) {
    return density_ratios(f.grid, f.values, theta1, theta2, radii, center);
}

LevelSetStats density_ratios(const NonlocalField& f, double theta1, double theta2,
                             const std::vector<double>& radii,
                             std::array<double, 2> center) {
    return density_ratios(f.grid, f.values, theta1, theta2, radii, center);
}

void LevelSetStats::write_csv(std::ostream& os) const {
    os << "r,above,below,band,ball,above_ratio,below_ratio\n";
    for (std::size_t k = 0; k < radii.size(); ++k)
        os << fmt(radii[k]) << ',' << fmt(above[k]) << ',' << fmt(below[k]) << ','
           << fmt(band[k]) << ',' << fmt(ball_measure[k]) << ','
           << fmt(above_ratio[k]) << ',' << fmt(below_ratio[k]) << '\n';
}

std::string LevelSetStats::to_json() const {
    nlohmann::ordered_json j;
    j["theta1"] = theta1;
    j["theta2"] = theta2;
    j["center"] = {center[0], center[1]};
    j["radii"] = radii;
    j["above"] = above;
    j["below"] = below;
    j["band"] = band;
    j["ball_measure"] = ball_measure;
    j["above_ratio"] = above_ratio;
    j["below_ratio"] = below_ratio;
    j["min_above_ratio"] = min_above_ratio;
    j["min_below_ratio"] = min_below_ratio;
    return j.dump();
}

BandReport band_measure(const Field& f, double theta, const std::vector<double>& radii,
                        std::array<double, 2> center) {
    if (!(theta > 0.0 && theta < 1.0))
        throw ValidationError("band_measure: theta must lie in (0,1)");
    check_radii_inside(f.grid, center, radii);
    const double uc = f.values[nearest_node(f.grid, center)];
    if (!(std::abs(uc) < theta))
        throw ValidationError("band_measure: center is not on the interface");

    BandReport rep;
    rep.theta = theta;
    rep.eps = f.eps;
    rep.center = center;
    const Grid& g = f.grid;
    const double vol = cell_volume(g);
    std::vector<double> ratios;
    for (double r : radii) {
        double measure = 0.0;
        for (int idx = 0; idx < g.size(); ++idx) {
            const auto p = g.pos(idx);
            const double dx = p[0] - center[0];
            const double dy = g.dim == 2 ? p[1] - center[1] : 0.0;
            if (dx * dx + dy * dy > r * r) continue;
            if (std::abs(f.values[idx]) < theta) measure += vol;
        }
        BandRow row;
        row.radius = r;
        row.measure = measure;
        rep.rows.push_back(row);
        const double rpow = g.dim == 1 ? 1.0 : r;
        ratios.push_back(measure / (f.eps * rpow));
    }
    rep.c_fit_lo = *std::min_element(ratios.begin(), ratios.end());
    rep.c_fit_hi = *std::max_element(ratios.begin(), ratios.end());
    for (std::size_t k = 0; k < rep.rows.size(); ++k) {
        const double rpow = g.dim == 1 ? 1.0 : rep.rows[k].radius;
        rep.rows[k].lower_bound = 0.5 * rep.c_fit_lo * f.eps * rpow;
        rep.rows[k].upper_bound = 2.0 * rep.c_fit_hi * f.eps * rpow;
        rep.rows[k].violation = rep.rows[k].measure < rep.rows[k].lower_bound ||
                                rep.rows[k].measure > rep.rows[k].upper_bound;
    }
    return rep;
}

double band_reference_constant(double theta, int dim) {
    if (!(theta > 0.0 && theta < 1.0))
        throw ValidationError("band_reference_constant: theta must lie in (0,1)");
    const double width = 2.0 * std::sqrt(2.0) * std::atanh(theta);
    if (dim == 1) return width;
    if (dim == 2) return 2.0 * width;  // flat section of B_r has length 2r
    throw ValidationError("band_reference_constant: dim must be 1 or 2");
}

void BandReport::write_csv(std::ostream& os) const {
    os << "r,measure,lower_bound,upper_bound,violation\n";
    for (const BandRow& row : rows)
        os << fmt(row.radius) << ',' << fmt(row.measure) << ',' << fmt(row.lower_bound)
           << ',' << fmt(row.upper_bound) << ',' << (row.violation ? 1 : 0) << '\n';
}

std::string BandReport::to_json() const {
    nlohmann::ordered_json j;
    j["theta"] = theta;
    j["eps"] = eps;
    j["center"] = {center[0], center[1]};
    j["c_fit_lo"] = c_fit_lo;
    j["c_fit_hi"] = c_fit_hi;
    nlohmann::ordered_json rows_json = nlohmann::ordered_json::array();
    for (const BandRow& row : rows) {
        nlohmann::ordered_json rj;
        rj["r"] = row.radius;
        rj["measure"] = row.measure;
        rj["lower_bound"] = row.lower_bound;
        rj["upper_bound"] = row.upper_bound;
        rj["violation"] = row.violation;
        rows_json.push_back(std::move(rj));
    }
    j["rows"] = std::move(rows_json);
    return j.dump();
}

CleanBallResult clean_ball_search(const Field& f, double theta, double r,
                                  std::array<double, 2> center,
                                  const std::vector<double>& kappa_grid) {
    if (!(theta > 0.0 && theta < 1.0))
        throw ValidationError("clean_ball_search: theta must lie in (0,1)");
    check_radii_inside(f.grid, center, {r});
    const double uc = f.values[nearest_node(f.grid, center)];
    if (!(std::abs(uc) < theta))
        throw ValidationError("clean_ball_search: center is not on the interface");

    const Grid& g = f.grid;
    std::vector<char> bad_plus(g.size()), bad_minus(g.size());
    for (int idx = 0; idx < g.size(); ++idx) {
        bad_plus[idx] = f.values[idx] > theta ? 0 : 1;
        bad_minus[idx] = f.values[idx] < -theta ? 0 : 1;
    }
    const std::vector<double> d_plus = distance_sq_to_bad(g, bad_plus);
    const std::vector<double> d_minus = distance_sq_to_bad(g, bad_minus);

    std::vector<double> kappas = kappa_grid;
    std::sort(kappas.begin(), kappas.end(), std::greater<double>());

    CleanBallResult res;
    for (double kappa : kappas) {
        if (!(kappa > 0.0 && kappa < 1.0)) continue;
        const double ball_r = kappa * r;
        const double need_center_dist = r - ball_r;
        int best_plus = -1, best_minus = -1;
        for (int idx = 0; idx < g.size(); ++idx) {
            const auto p = g.pos(idx);
            const double dx = p[0] - center[0];
            const double dy = g.dim == 2 ? p[1] - center[1] : 0.0;
            if (dx * dx + dy * dy > need_center_dist * need_center_dist) continue;
            const double clearance = ball_r / g.h;
            if (best_plus < 0 && d_plus[idx] > clearance * clearance) best_plus = idx;
            if (best_minus < 0 && d_minus[idx] > clearance * clearance) best_minus = idx;
            if (best_plus >= 0 && best_minus >= 0) break;
        }
        if (best_plus >= 0 && best_minus >= 0) {
            res.kappa_found = kappa;
            res.found = true;
            res.q_plus = g.pos(best_plus);
            res.q_minus = g.pos(best_minus);
            return res;
        }
    }
    return res;
}

TrappingReport trapped_flatness(const Grid& g, const std::vector<double>& values,
                                double theta, const std::vector<double>& radii) {
    if (!(theta > std::sqrt(3.0) / 3.0 && theta < 1.0))
        throw ValidationError("trapped_flatness: theta must lie in (sqrt(3)/3, 1)");
    if (static_cast<int>(values.size()) != g.size())
        throw ValidationError("trapped_flatness: value count mismatch");
    const auto center = g.center();

    TrappingReport rep;
    rep.theta = theta;
    const int n_dirs = g.dim == 2 ? 360 : 2;
    for (double r : radii) {
        if (!(r > 0.0)) throw ValidationError("trapped_flatness: radius must be positive");
        // Gather the cells of B_r once per radius.
        std::vector<std::array<double, 2>> pos;
        std::vector<double> val;
        for (int idx = 0; idx < g.size(); ++idx) {
            const auto p = g.pos(idx);
            const double dx = p[0] - center[0];
            const double dy = g.dim == 2 ? p[1] - center[1] : 0.0;
            if (dx * dx + dy * dy > r * r) continue;
            pos.push_back({dx, dy});
            val.push_back(values[idx]);
        }
        double best_gamma = r;
        double best_angle = 0.0;
        for (int k = 0; k < n_dirs; ++k) {
            const double angle = g.dim == 2 ? 2.0 * M_PI * k / n_dirs : M_PI * k;
            const double wx = std::cos(angle), wy = g.dim == 2 ? std::sin(angle) : 0.0;
            double g1 = 0.0, g2 = 0.0;
            for (std::size_t c = 0; c < pos.size(); ++c) {
                const double s = wx * pos[c][0] + wy * pos[c][1];
                if (val[c] > -theta) g1 = std::max(g1, -s);
                if (val[c] <= theta) g2 = std::max(g2, s);
            }
            const double gamma = std::max(g1, g2);
            if (gamma < best_gamma) {
                best_gamma = gamma;
                best_angle = angle;
            }
        }
        rep.rows.push_back({r, best_angle, best_gamma, best_gamma / r});
    }
    return rep;
}

TrappingReport trapped_flatness(const Field& f, double theta,
                                const std::vector<double>& radii) {
    return trapped_flatness(f.grid, f.values, theta, radii);
}

void TrappingReport::write_csv(std::ostream& os) const {
    os << "r,omega_angle,gamma,flatness\n";
    for (const TrappingRow& row : rows)
        os << fmt(row.radius) << ',' << fmt(row.omega_angle) << ',' << fmt(row.gamma)
           << ',' << fmt(row.flatness) << '\n';
}

std::string TrappingReport::to_json() const {
    nlohmann::ordered_json j;
    j["theta"] = theta;
    nlohmann::ordered_json rows_json = nlohmann::ordered_json::array();
    for (const TrappingRow& row : rows) {
        nlohmann::ordered_json rj;
        rj["r"] = row.radius;
        rj["omega_angle"] = row.omega_angle;
        rj["gamma"] = row.gamma;
        rj["flatness"] = row.flatness;
        rows_json.push_back(std::move(rj));
    }
    j["rows"] = std::move(rows_json);
    return j.dump();
}

UniformConvergenceReport uniform_convergence_check(const std::vector<Field>& fields,
                                                   const SetRegion& limit_set,
                                                   double theta, double r0, double delta) {
    if (fields.empty()) throw ValidationError("uniform_convergence_check: no fields");
    if (!(theta > 0.0 && theta < 1.0))
        throw ValidationError("uniform_convergence_check: theta must lie in (0,1)");
    UniformConvergenceReport rep;
    for (const Field& f : fields) {
        const Grid& g = f.grid;
        const auto center = g.center();
        bool ok = true;
        for (int idx = 0; idx < g.size() && ok; ++idx) {
            const auto p = g.pos(idx);
            const double dx = p[0] - center[0];
            const double dy = g.dim == 2 ? p[1] - center[1] : 0.0;
            if (dx * dx + dy * dy > r0 * r0) continue;
            if (std::abs(f.values[idx]) >= theta) continue;
            if (boundary_distance(limit_set, p) > delta) ok = false;
        }
        rep.eps.push_back(f.eps);
        rep.pass.push_back(ok);
    }
    for (std::size_t k = 0; k < rep.pass.size(); ++k)
        if (rep.pass[k]) {
            rep.first_pass_index = static_cast<int>(k);
            break;
        }
    if (rep.first_pass_index >= 0) {
        rep.monotone_persistence = true;
        for (std::size_t k = rep.first_pass_index; k < rep.pass.size(); ++k)
            if (!rep.pass[k]) rep.monotone_persistence = false;
    }
    return rep;
}

}  // namespace phaselab
