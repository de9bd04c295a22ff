// grid.hpp
// Uniform 1D/2D node grids and sampled order-parameter fields with Dirichlet
// boundary data, an interface length scale eps and optional heterogeneity Q.

#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <vector>

namespace phaselab {

struct Grid {
    int dim = 1;
    std::array<double, 2> lo{0.0, 0.0};
    std::array<int, 2> counts{0, 1};  // nodes per axis; counts[1] == 1 in 1D
    double h = 0.0;

    static Grid line(double a, double b, int n);
    static Grid square(double a, double b, int n);  // same extent on both axes

    int size() const { return counts[0] * counts[1]; }
    int index(int i, int j = 0) const { return i + counts[0] * j; }
    double x(int i) const { return lo[0] + h * i; }
    double y(int j) const { return lo[1] + h * j; }
    std::array<double, 2> pos(int idx) const {
        const int i = idx % counts[0], j = idx / counts[0];
        return {x(i), y(j)};
    }
    bool is_boundary(int i, int j = 0) const {
        if (i == 0 || i == counts[0] - 1) return true;
        return dim == 2 && (j == 0 || j == counts[1] - 1);
    }
    std::array<double, 2> hi() const {
        return {lo[0] + h * (counts[0] - 1), lo[1] + h * (counts[1] - 1)};
    }
    std::array<double, 2> center() const {
        const auto top = hi();
        return {0.5 * (lo[0] + top[0]), dim == 2 ? 0.5 * (lo[1] + top[1]) : 0.0};
    }
};

// Order parameter sampled at grid nodes.  Boundary nodes carry the Dirichlet
// data; minimization never touches them.  Q scales the potential term and
// must range in [q_lo, q_hi] with 0 < q_lo when present.
struct Field {
    Grid grid;
    std::vector<double> values;
    double eps = 1.0;
    std::function<double(double, double)> Q;  // empty means Q == 1

    double q_at(int idx) const {
        if (!Q) return 1.0;
        const auto p = grid.pos(idx);
        return Q(p[0], p[1]);
    }
};

// Builds a field by sampling u0 at the nodes.
Field sample_field(const Grid& g, double eps,
                   const std::function<double(double, double)>& u0);

// Checks finiteness of values and (sampled) positivity bounds on Q.
void validate_field(const Field& f);

// CSV: one node per row, "x[,y],u".
void write_field_csv(std::ostream& os, const Field& f);

// Binary dump, little-endian: int32 dim, int32 counts[dim], float64 h,
// float64 values[size] in row-major node order.
void write_field_binary(std::ostream& os, const Field& f);
Field read_field_binary(std::istream& is);

}  // namespace phaselab
