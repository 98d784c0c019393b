#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "nlrd/errors.hpp"

namespace nlrd {

// Uniform mesh of (0,1) with J intervals: x_i = i*dx, i = 0..J, dx = 1/J.
struct Grid1D {
    int J = 0;
    double dx = 0.0;

    double node(int i) const { return i * dx; }
    int num_nodes() const { return J + 1; }
    int interior_size() const { return J - 1; }

    std::vector<double> nodes() const {
        std::vector<double> x(static_cast<std::size_t>(J) + 1);
        for (int i = 0; i <= J; ++i) x[static_cast<std::size_t>(i)] = node(i);
        return x;
    }
};

inline Grid1D build_grid(int intervals) {
    if (intervals < 2)
        throw InvalidGridError("grid needs at least 2 intervals, got " +
                               std::to_string(intervals));
    return Grid1D{intervals, 1.0 / intervals};
}

// Nodal values on a grid, boundary entries pinned to zero (homogeneous
// Dirichlet). Solvers operate on the interior slice of length J-1.
struct Field {
    Grid1D grid;
    std::vector<double> values;

    explicit Field(const Grid1D& g)
        : grid(g), values(static_cast<std::size_t>(g.J) + 1, 0.0) {}

    double& operator[](int i) { return values[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }

    double max_abs() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
};

// The linear form l(u) = integral of u over (0,1), realized as the scheme's
// rectangle sum dx * sum_{j=1..J} u_j (the j=J term vanishes by the boundary
// invariant).
inline double nonlocal_form(const Field& field) {
    double s = 0.0;
    for (int j = 1; j <= field.grid.J; ++j) s += field[j];
    return field.grid.dx * s;
}

// Samples profile(x_i) on the interior; boundary entries are forced to zero
// regardless of the profile.
inline Field sample_initial(const Grid1D& grid,
                            const std::function<double(double)>& profile) {
    Field f(grid);
    for (int i = 1; i < grid.J; ++i) {
        double v = profile(grid.node(i));
        if (!std::isfinite(v))
            throw SamplingError("initial profile is not finite at x=" +
                                std::to_string(grid.node(i)));
        f[i] = v;
    }
    return f;
}

}  // namespace nlrd
