#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "nlrd/errors.hpp"

namespace nlrd {

// Nonlocal diffusion coefficient a(xi).
//
// Default (clamped) form: a(xi) = 1/max(epsilon, |xi|) + m0, bounded above by
// 1/epsilon + m0 for every finite xi. The literal form max(epsilon, 1/|xi|) +
// m0 grows without bound as xi -> 0 (1/0 evaluates to +inf); it is kept
// selectable for comparison runs.
//
// m is the asserted lower bound a(xi) >= m > 0; every evaluation checks it
// and fails loudly on violation.
struct DiffusionSpec {
    double epsilon = 1e-6;
    double m0 = 1.0;
    bool literal_form = false;
    double m = 1.0;
    std::function<double(double)> custom;  // optional override of a(xi)

    void validate() const {
        if (!(epsilon > 0.0))
            throw ConfigError("diffusion epsilon must be > 0, got " +
                              std::to_string(epsilon));
        if (!(m0 >= 0.0))
            throw ConfigError("diffusion m0 must be >= 0, got " + std::to_string(m0));
        if (!(m > 0.0))
            throw ConfigError("diffusion lower bound m must be > 0, got " +
                              std::to_string(m));
    }

    // Upper bound of the clamped form over all finite xi; +inf when a custom
    // coefficient or the literal form makes no such bound available.
    double worst_case_bound() const {
        if (custom || literal_form) return std::numeric_limits<double>::infinity();
        return 1.0 / epsilon + m0;
    }
};

inline double diffusion_coefficient(double xi, const DiffusionSpec& spec) {
    if (std::isnan(xi) || std::isinf(xi))
        throw EvaluationError("diffusion coefficient evaluated at non-finite xi");
    double a;
    if (spec.custom) {
        a = spec.custom(xi);
        if (std::isnan(a))
            throw EvaluationError("custom diffusion coefficient returned NaN");
    } else if (spec.literal_form) {
        a = std::max(spec.epsilon, 1.0 / std::abs(xi)) + spec.m0;
    } else {
        a = 1.0 / std::max(spec.epsilon, std::abs(xi)) + spec.m0;
    }
    if (!(a >= spec.m))
        throw ModelError("diffusion coefficient a(" + std::to_string(xi) + ") = " +
                         std::to_string(a) + " violates the asserted lower bound m = " +
                         std::to_string(spec.m));
    return a;
}

// Reaction f(w) = r*w*(kappa - w) + alpha*w together with the coupling
// alpha*w, exposed only through their combination alpha*w - f(w) so the
// alpha-cancellation cannot be applied inconsistently between the two
// equations.
struct ReactionSpec {
    double r = 1.0;
    double kappa = 10.0;
    double alpha = 0.0;
    double M1 = std::numeric_limits<double>::quiet_NaN();  // asserted Lipschitz bound, optional
    std::function<double(double)> f_custom;  // optional override of f(w); must have f(0) = 0

    void validate() const {
        if (!(r >= 0.0))
            throw ConfigError("reaction rate r must be >= 0, got " + std::to_string(r));
        if (!(kappa > 0.0))
            throw ConfigError("carrying capacity kappa must be > 0, got " +
                              std::to_string(kappa));
        if (!(alpha >= 0.0))
            throw ConfigError("coupling alpha must be >= 0, got " +
                              std::to_string(alpha));
        if (!std::isnan(M1) && !(M1 >= 0.0))
            throw ConfigError("asserted Lipschitz bound M1 must be >= 0, got " +
                              std::to_string(M1));
        if (f_custom && f_custom(0.0) != 0.0)
            throw ConfigError("custom reaction must satisfy f(0) = 0");
    }

    double f(double w) const {
        if (f_custom) return f_custom(w);
        return r * (w * (kappa - w)) + alpha * w;
    }
};

// alpha*w - f(w); for the default logistic reaction this is -r*w*(kappa-w)
// exactly (the alpha terms cancel identically). The inner product is formed
// before scaling by r so that w <-> kappa-w symmetry is exact in floating
// point whenever kappa-w is.
inline double coupling_source(double w, const ReactionSpec& spec) {
    if (spec.f_custom) return spec.alpha * w - spec.f_custom(w);
    return -(spec.r * (w * (spec.kappa - w)));
}

// Max difference quotient over adjacent uniform samples of [lo, hi]; a lower
// bound on the Lipschitz constant of fn over the interval.
inline double lipschitz_estimate(const std::function<double(double)>& fn, double lo,
                                 double hi, int samples) {
    if (!(lo < hi))
        throw ConfigError("lipschitz_estimate needs lo < hi");
    if (samples < 2)
        throw ConfigError("lipschitz_estimate needs at least 2 samples");
    const double h = (hi - lo) / (samples - 1);
    double prev_x = lo;
    double prev_y = fn(lo);
    if (!std::isfinite(prev_y))
        throw EvaluationError("lipschitz_estimate: fn not finite at lo");
    double best = 0.0;
    for (int i = 1; i < samples; ++i) {
        const double x = (i == samples - 1) ? hi : lo + i * h;
        const double y = fn(x);
        if (!std::isfinite(y))
            throw EvaluationError("lipschitz_estimate: fn not finite at x = " +
                                  std::to_string(x));
        best = std::max(best, std::abs(y - prev_y) / (x - prev_x));
        prev_x = x;
        prev_y = y;
    }
    return best;
}

}  // namespace nlrd
