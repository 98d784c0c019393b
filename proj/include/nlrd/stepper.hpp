#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "nlrd/errors.hpp"
#include "nlrd/grid.hpp"
#include "nlrd/model.hpp"
#include "nlrd/tridiag.hpp"

namespace nlrd {

// The pair (u, v) at one time level. Both fields live on the same grid and
// carry zero boundary values.
struct FieldPair {
    Field u;
    Field v;
    double t = 0.0;

    explicit FieldPair(const Grid1D& g) : u(g), v(g) {}
    FieldPair(Field u_, Field v_, double t_ = 0.0)
        : u(std::move(u_)), v(std::move(v_)), t(t_) {
        if (u.grid.J != v.grid.J)
            throw ConfigError("field pair components live on different grids");
    }
};

struct SchemeConfig {
    double T = 0.0;
    int K = 0;  // step count; K = 0 means an empty schedule
    Grid1D grid;
    DiffusionSpec diffusion;
    ReactionSpec reaction;

    double dt() const { return K > 0 ? T / K : 0.0; }

    void validate() const {
        if (!(T > 0.0)) throw ConfigError("final time T must be > 0");
        if (K < 0) throw ConfigError("step count K must be >= 0");
        if (grid.J < 2) throw InvalidGridError("scheme grid has fewer than 2 intervals");
        diffusion.validate();
        reaction.validate();
    }
};

// Per-step record: the two lagged diffusion coefficients, the dominance
// margins of the assembled systems (analytically (1+2mu)-2mu = 1), and the
// solver residuals.
struct StepReport {
    double a_u = 0.0, a_v = 0.0;
    double margin_u = 0.0, margin_v = 0.0;
    double residual_u = 0.0, residual_v = 0.0;
};

enum class Component { u, v };

// One implicit step advances each field through a linear tridiagonal solve
// over the interior nodes y_1..y_{J-1}:
//
//   (1 + 2*mu) y_i - mu (y_{i+1} + y_{i-1}) = rhs_i,   mu = a(l(field^k)) dt/dx^2,
//
// with the nonlocal coefficient and the reaction both evaluated at time
// level k (fully lagged, so each step stays linear). The net lagged reaction
// on u is +r*w*(kappa-w) with w = u-v, the logistic growth of the population
// gap; v receives the negative. Both right-hand sides are built from the
// same level-k snapshot. Returns the diffusion coefficient used.
inline double assemble_into(const FieldPair& state, Component which,
                            const SchemeConfig& cfg, TridiagonalSystem& out) {
    const Field& field = (which == Component::u) ? state.u : state.v;
    const Field& u = state.u;
    const Field& v = state.v;
    const int n = cfg.grid.interior_size();
    const double dt = cfg.dt();
    const double dx = cfg.grid.dx;

    const double a = diffusion_coefficient(nonlocal_form(field), cfg.diffusion);
    const double mu = a * dt / (dx * dx);
    if (!std::isfinite(mu))
        throw BlowUpError(std::string("non-finite scheme coefficient mu for the ") +
                          (which == Component::u ? "u" : "v") +
                          " equation: a(l(.)) = " + std::to_string(a));

    out.sub.assign(static_cast<std::size_t>(n) - 1, -mu);
    out.sup.assign(static_cast<std::size_t>(n) - 1, -mu);
    out.diag.assign(static_cast<std::size_t>(n), 1.0 + 2.0 * mu);
    out.rhs.resize(static_cast<std::size_t>(n));
    for (int i = 1; i < cfg.grid.J; ++i) {
        const double source = coupling_source(u[i] - v[i], cfg.reaction);
        const double contrib = dt * source;
        out.rhs[static_cast<std::size_t>(i - 1)] =
            (which == Component::u) ? field[i] - contrib : field[i] + contrib;
    }
    return a;
}

inline TridiagonalSystem assemble(const FieldPair& state, Component which,
                                  const SchemeConfig& cfg) {
    TridiagonalSystem s;
    assemble_into(state, which, cfg, s);
    return s;
}

namespace detail {

struct StepScratch {
    TridiagonalSystem sys_u, sys_v;
    ThomasWorkspace ws;
    std::vector<double> sol_u, sol_v;
};

inline void step_into(const FieldPair& state, const SchemeConfig& cfg,
                      StepScratch& scratch, FieldPair& next, StepReport& report) {
    report.a_u = assemble_into(state, Component::u, cfg, scratch.sys_u);
    report.a_v = assemble_into(state, Component::v, cfg, scratch.sys_v);
    report.margin_u = dominance_margin(scratch.sys_u);
    report.margin_v = dominance_margin(scratch.sys_v);

    thomas_solve(scratch.sys_u, scratch.ws, scratch.sol_u);
    thomas_solve(scratch.sys_v, scratch.ws, scratch.sol_v);
    report.residual_u = tridiag_residual(scratch.sys_u, scratch.sol_u);
    report.residual_v = tridiag_residual(scratch.sys_v, scratch.sol_v);

    const int J = cfg.grid.J;
    next.u[0] = 0.0;
    next.v[0] = 0.0;
    next.u[J] = 0.0;
    next.v[J] = 0.0;
    for (int i = 1; i < J; ++i) {
        const double ui = scratch.sol_u[static_cast<std::size_t>(i - 1)];
        const double vi = scratch.sol_v[static_cast<std::size_t>(i - 1)];
        if (!std::isfinite(ui) || !std::isfinite(vi))
            throw BlowUpError("non-finite nodal value at x = " +
                              std::to_string(cfg.grid.node(i)));
        next.u[i] = ui;
        next.v[i] = vi;
    }
    next.t = state.t + cfg.dt();
}

}  // namespace detail

inline std::pair<FieldPair, StepReport> step(const FieldPair& state,
                                             const SchemeConfig& cfg) {
    FieldPair next(state.u.grid);
    StepReport report;
    detail::StepScratch scratch;
    detail::step_into(state, cfg, scratch, next, report);
    return {std::move(next), report};
}

// Observer invoked at step 0 (with a null report) and after every step whose
// 1-based index is a multiple of `every`; the final step is always sampled.
struct StepObserver {
    int every = 1;
    std::function<void(int k, const FieldPair&, const StepReport*)> fn;
};

// Runs K implicit steps. Deterministic: identical inputs produce bit-identical
// outputs. Aborts with step index and time on any solver failure.
inline FieldPair simulate(const FieldPair& state0, const SchemeConfig& cfg,
                          const std::vector<StepObserver>& observers = {}) {
    cfg.validate();
    if (state0.u.grid.J != cfg.grid.J)
        throw ConfigError("initial state grid does not match scheme grid");

    for (const auto& obs : observers)
        if (obs.fn) obs.fn(0, state0, nullptr);
    if (cfg.K == 0) return state0;

    FieldPair current = state0;
    FieldPair next(cfg.grid);
    StepReport report;
    detail::StepScratch scratch;
    for (int k = 1; k <= cfg.K; ++k) {
        try {
            detail::step_into(current, cfg, scratch, next, report);
        } catch (const Error& e) {
            throw SimulationError(k - 1, current.t, e.what());
        }
        std::swap(current, next);
        for (const auto& obs : observers)
            if (obs.fn && (obs.every > 0 && (k % obs.every == 0 || k == cfg.K)))
                obs.fn(k, current, &report);
    }
    return current;
}

}  // namespace nlrd
