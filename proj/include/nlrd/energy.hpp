#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "nlrd/errors.hpp"
#include "nlrd/stepper.hpp"

namespace nlrd {

// E(t) = 1/2 * integral of u^2 + v^2, with the same rectangle rule as
// nonlocal_form.
inline double energy(const FieldPair& state) {
    const int J = state.u.grid.J;
    double s = 0.0;
    for (int j = 1; j <= J; ++j)
        s += state.u[j] * state.u[j] + state.v[j] * state.v[j];
    return 0.5 * state.u.grid.dx * s;
}

// Time series (t_k, E_k) with the auxiliary per-sample diagnostics the energy
// analysis needs.
struct EnergyTrace {
    std::vector<double> times;
    std::vector<double> energies;
    std::vector<double> l_u, l_v;
    std::vector<double> max_abs_u, max_abs_v;

    std::size_t size() const { return times.size(); }

    void append(double t, const FieldPair& state) {
        if (!times.empty() && !(t > times.back()))
            throw ConfigError("energy trace times must be strictly increasing");
        times.push_back(t);
        energies.push_back(energy(state));
        l_u.push_back(nonlocal_form(state.u));
        l_v.push_back(nonlocal_form(state.v));
        max_abs_u.push_back(state.u.max_abs());
        max_abs_v.push_back(state.v.max_abs());
    }
};

inline StepObserver energy_recorder(EnergyTrace& trace) {
    return StepObserver{1, [&trace](int, const FieldPair& state, const StepReport*) {
                            trace.append(state.t, state);
                        }};
}

// Optimal constant in ||u||_{L^2}^2 <= c_p ||u'||_{L^2}^2 for zero-boundary
// functions on (0,1): the reciprocal of the first Dirichlet eigenvalue pi^2.
inline double poincare_constant() {
    return 1.0 / (std::numbers::pi * std::numbers::pi);
}

// Sufficient condition for exponential energy decay: m > 2 c_p (M1 + alpha),
// with the pure-dissipation case M1 + alpha = 0 admitted whenever m > 0.
inline bool decay_condition(double m, double M1, double alpha, double c_p) {
    if (!(c_p > 0.0)) throw ConfigError("decay_condition needs c_p > 0");
    const double s = M1 + alpha;
    if (s == 0.0) return m > 0.0;
    return s > 0.0 && m > 2.0 * c_p * s;
}

// Rate suggested by the energy estimate dE/dt <= -(2m/c_p) E + 4 (M1+alpha) E.
// Indicative only; the constant bookkeeping behind it is not airtight, so it
// is reported but never asserted.
inline double predicted_decay_rate(double m, double M1, double alpha, double c_p) {
    return 2.0 * m / c_p - 4.0 * (M1 + alpha);
}

struct DecayFit {
    double C = 0.0;    // prefactor in E(t) ~ C E(0) exp(-eta t)
    double eta = 0.0;  // decay rate (negative means growth)
    double rmse = 0.0; // fit residual on the log scale
};

// Least-squares line through (t_k, log E_k) over [begin, end); eta is the
// negated slope and C = exp(intercept)/E_0 with E_0 the first energy of the
// trace.
inline DecayFit fit_decay_rate(const EnergyTrace& trace, std::size_t begin,
                               std::size_t end) {
    if (end > trace.size() || begin + 2 > end)
        throw FitDomainError("decay fit window needs at least 2 samples");
    if (trace.energies.empty() || !(trace.energies.front() > 0.0))
        throw FitDomainError("decay fit needs a positive initial energy");
    const std::size_t n = end - begin;
    double st = 0.0, se = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
        if (!(trace.energies[k] > 0.0))
            throw FitDomainError("nonpositive energy at sample " + std::to_string(k) +
                                 "; shrink the fit window");
        st += trace.times[k];
        se += std::log(trace.energies[k]);
    }
    const double mt = st / n, me = se / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
        const double dt = trace.times[k] - mt;
        sxx += dt * dt;
        sxy += dt * (std::log(trace.energies[k]) - me);
    }
    if (!(sxx > 0.0)) throw FitDomainError("degenerate time window in decay fit");
    const double slope = sxy / sxx;
    const double intercept = me - slope * mt;
    double ss = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
        const double r = std::log(trace.energies[k]) - (intercept + slope * trace.times[k]);
        ss += r * r;
    }
    return DecayFit{std::exp(intercept) / trace.energies.front(), -slope,
                    std::sqrt(ss / n)};
}

// Default window: the last 50% of samples (skipping initial transients),
// shrunk from the left past any nonpositive energies. Returns an empty window
// when fewer than 2 usable samples remain.
inline std::pair<std::size_t, std::size_t> default_fit_window(const EnergyTrace& trace) {
    const std::size_t n = trace.size();
    std::size_t begin = n / 2;
    for (std::size_t k = n; k-- > begin;)
        if (!(trace.energies[k] > 0.0)) {
            begin = k + 1;
            break;
        }
    if (begin + 2 > n) return {n, n};
    return {begin, n};
}

}  // namespace nlrd
