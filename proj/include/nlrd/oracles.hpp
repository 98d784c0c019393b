#pragma once

#include <cfloat>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "nlrd/errors.hpp"
#include "nlrd/stepper.hpp"

namespace nlrd {

// Reference computations kept independent of the production solve path so the
// CLI can cross-check any configuration.

struct DenseSystem {
    std::size_t n = 0;
    std::vector<double> matrix;  // row-major, n*n
    std::vector<double> rhs;

    double& at(std::size_t i, std::size_t j) { return matrix[i * n + j]; }
    double at(std::size_t i, std::size_t j) const { return matrix[i * n + j]; }
};

// Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(const DenseSystem& system) {
    const std::size_t n = system.n;
    std::vector<double> a = system.matrix;
    std::vector<double> b = system.rhs;
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t best = col;
        double best_abs = std::abs(a[perm[col] * n + col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::abs(a[perm[r] * n + col]);
            if (v > best_abs) {
                best = r;
                best_abs = v;
            }
        }
        if (best_abs < DBL_MIN)
            throw SingularSystemError(col, "singular dense system at column " +
                                               std::to_string(col));
        std::swap(perm[col], perm[best]);
        const std::size_t p = perm[col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const std::size_t q = perm[r];
            const double factor = a[q * n + col] / a[p * n + col];
            if (factor == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) a[q * n + j] -= factor * a[p * n + j];
            b[q] -= factor * b[p];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        const std::size_t p = perm[i];
        double s = b[p];
        for (std::size_t j = i + 1; j < n; ++j) s -= a[p * n + j] * x[j];
        x[i] = s / a[p * n + i];
    }
    return x;
}

// Analytic first-mode solution of the constant-coefficient heat equation on
// (0,1) with zero boundary: delta * exp(-a pi^2 t) * sin(pi x).
inline double exact_heat_mode(double x, double t, double a, double delta) {
    const double pi = std::numbers::pi;
    return delta * std::exp(-a * pi * pi * t) * std::sin(pi * x);
}

namespace detail {

// Forward-Euler update with the same lagged nonlocal coefficients and lagged
// reaction as the implicit scheme. The stability bound is enforced against
// the coefficients actually in effect this step.
inline FieldPair explicit_step_with_dt(const FieldPair& state, const SchemeConfig& cfg,
                                       double dt) {
    const Grid1D& g = state.u.grid;
    const double dx = g.dx;
    const double a_u = diffusion_coefficient(nonlocal_form(state.u), cfg.diffusion);
    const double a_v = diffusion_coefficient(nonlocal_form(state.v), cfg.diffusion);
    const double a_max = std::max(a_u, a_v);
    if (!(dt <= dx * dx / (2.0 * a_max)))
        throw ConfigError("explicit Euler step violates the stability bound: dt = " +
                          std::to_string(dt) + " > dx^2/(2 a) = " +
                          std::to_string(dx * dx / (2.0 * a_max)));
    const double mu_u = a_u * dt / (dx * dx);
    const double mu_v = a_v * dt / (dx * dx);
    FieldPair next(g);
    for (int i = 1; i < g.J; ++i) {
        const double source = coupling_source(state.u[i] - state.v[i], cfg.reaction);
        next.u[i] = state.u[i] +
                    mu_u * (state.u[i + 1] - 2.0 * state.u[i] + state.u[i - 1]) -
                    dt * source;
        next.v[i] = state.v[i] +
                    mu_v * (state.v[i + 1] - 2.0 * state.v[i] + state.v[i - 1]) +
                    dt * source;
    }
    next.t = state.t + dt;
    return next;
}

}  // namespace detail

inline FieldPair explicit_euler_step(const FieldPair& state, const SchemeConfig& cfg) {
    return detail::explicit_step_with_dt(state, cfg, cfg.dt());
}

struct ExplicitRunResult {
    FieldPair state;
    long steps = 0;
};

// Advances the explicit scheme to cfg.T with base step dt_base, shrinking
// individual steps whenever the current coefficients demand it for stability.
inline ExplicitRunResult explicit_reference_run(const FieldPair& state0,
                                                const SchemeConfig& cfg,
                                                double dt_base) {
    if (!(dt_base > 0.0)) throw ConfigError("explicit reference needs dt_base > 0");
    const double dx = state0.u.grid.dx;
    ExplicitRunResult res{state0, 0};
    double t = 0.0;
    while (t < cfg.T) {
        const double a_u = diffusion_coefficient(nonlocal_form(res.state.u), cfg.diffusion);
        const double a_v = diffusion_coefficient(nonlocal_form(res.state.v), cfg.diffusion);
        double dt = std::min(dt_base, dx * dx / (2.0 * std::max(a_u, a_v)));
        if (t + dt >= cfg.T) dt = cfg.T - t;
        res.state = detail::explicit_step_with_dt(res.state, cfg, dt);
        t += dt;
        res.state.t = t;
        ++res.steps;
    }
    return res;
}

}  // namespace nlrd
