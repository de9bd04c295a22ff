#include "phaselab/grid.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>

#include "phaselab/numerics.hpp"

namespace phaselab {

namespace {

void check_axis(double a, double b, int n) {
    if (!(a < b)) throw ValidationError("grid: need a < b");
    if (n < 4) throw ValidationError("grid: need at least 4 nodes per axis");
}

// All dumps are written little-endian regardless of host order.
template <typename T>
void put_le(std::ostream& os, T v) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
#if defined(__BYTE_ORDER__) && __BYTE_ORDER__ == __ORDER_BIG_ENDIAN__
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i)
        std::swap(buf[i], buf[sizeof(T) - 1 - i]);
#endif
    os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T get_le(std::istream& is) {
    unsigned char buf[sizeof(T)];
    is.read(reinterpret_cast<char*>(buf), sizeof(T));
    if (!is) throw ValidationError("field: truncated binary dump");
#if defined(__BYTE_ORDER__) && __BYTE_ORDER__ == __ORDER_BIG_ENDIAN__
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i)
        std::swap(buf[i], buf[sizeof(T) - 1 - i]);
#endif
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

Grid Grid::line(double a, double b, int n) {
    check_axis(a, b, n);
    Grid g;
    g.dim = 1;
    g.lo = {a, 0.0};
    g.counts = {n, 1};
    g.h = (b - a) / (n - 1);
    return g;
}

Grid Grid::square(double a, double b, int n) {
    check_axis(a, b, n);
    Grid g;
    g.dim = 2;
    g.lo = {a, a};
    g.counts = {n, n};
    g.h = (b - a) / (n - 1);
    return g;
}

Field sample_field(const Grid& g, double eps,
                   const std::function<double(double, double)>& u0) {
    if (!(eps > 0.0)) throw ValidationError("field: eps must be positive");
    Field f;
    f.grid = g;
    f.eps = eps;
    f.values.resize(g.size());
    for (int idx = 0; idx < g.size(); ++idx) {
        const auto p = g.pos(idx);
        f.values[idx] = u0(p[0], p[1]);
    }
    return f;
}

void validate_field(const Field& f) {
    if (static_cast<int>(f.values.size()) != f.grid.size())
        throw ValidationError("field: value count does not match grid");
    if (!(f.eps > 0.0)) throw ValidationError("field: eps must be positive");
    for (double v : f.values)
        if (!std::isfinite(v)) throw ValidationError("field: non-finite value");
    if (f.Q) {
        for (int idx = 0; idx < f.grid.size(); ++idx) {
            const double q = f.q_at(idx);
            if (!(q > 0.0) || !std::isfinite(q))
                throw ValidationError("field: Q must be positive and finite");
        }
    }
}

void write_field_csv(std::ostream& os, const Field& f) {
    if (f.grid.dim == 1) {
        os << "x,u\n";
        for (int i = 0; i < f.grid.counts[0]; ++i)
            os << fmt(f.grid.x(i)) << ',' << fmt(f.values[i]) << '\n';
    } else {
        os << "x,y,u\n";
        for (int j = 0; j < f.grid.counts[1]; ++j)
            for (int i = 0; i < f.grid.counts[0]; ++i)
                os << fmt(f.grid.x(i)) << ',' << fmt(f.grid.y(j)) << ','
                   << fmt(f.values[f.grid.index(i, j)]) << '\n';
    }
}

void write_field_binary(std::ostream& os, const Field& f) {
    put_le<std::int32_t>(os, f.grid.dim);
    for (int a = 0; a < f.grid.dim; ++a) put_le<std::int32_t>(os, f.grid.counts[a]);
    put_le<double>(os, f.grid.h);
    for (double v : f.values) put_le<double>(os, v);
}

Field read_field_binary(std::istream& is) {
    Field f;
    const std::int32_t dim = get_le<std::int32_t>(is);
    if (dim != 1 && dim != 2) throw ValidationError("field: bad dimension in dump");
    f.grid.dim = dim;
    f.grid.counts = {0, 1};
    for (int a = 0; a < dim; ++a) f.grid.counts[a] = get_le<std::int32_t>(is);
    f.grid.h = get_le<double>(is);
    if (f.grid.counts[0] < 4 || (dim == 2 && f.grid.counts[1] < 4) || !(f.grid.h > 0.0))
        throw ValidationError("field: bad grid in dump");
    f.values.resize(f.grid.size());
    for (double& v : f.values) v = get_le<double>(is);
    return f;
}

}  // namespace phaselab
