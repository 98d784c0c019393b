#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include "nlrd/model.hpp"

using namespace nlrd;

namespace {

DiffusionSpec make_diffusion(double m0, bool literal = false) {
    DiffusionSpec d;
    d.epsilon = 1e-6;
    d.m0 = m0;
    d.literal_form = literal;
    d.m = m0 > 0.0 ? m0 : 1e-3;
    return d;
}

}  // namespace

TEST_CASE("diffusion_coefficient direct evaluations", "[model]") {
    const DiffusionSpec clamped = make_diffusion(1.0);
    const DiffusionSpec literal = make_diffusion(1.0, true);

    REQUIRE(diffusion_coefficient(1.0, clamped) == Catch::Approx(2.0).margin(1e-14));
    REQUIRE(diffusion_coefficient(1.0, literal) == Catch::Approx(2.0).margin(1e-14));
    REQUIRE(diffusion_coefficient(2.0, clamped) == Catch::Approx(1.5).margin(1e-14));
    REQUIRE(diffusion_coefficient(2.0, literal) == Catch::Approx(1.5).margin(1e-14));

    // Clamped reading caps the coefficient at 1/epsilon + m0 as xi -> 0.
    REQUIRE(diffusion_coefficient(0.0, clamped) ==
            Catch::Approx(1e6 + 1.0).epsilon(1e-12));
    // The literal form has no cap: 1/|0| overflows to +inf.
    REQUIRE(std::isinf(diffusion_coefficient(0.0, literal)));
}

TEST_CASE("diffusion_coefficient rejects non-finite xi", "[model]") {
    const DiffusionSpec d = make_diffusion(1.0);
    REQUIRE_THROWS_AS(diffusion_coefficient(std::nan(""), d), EvaluationError);
    REQUIRE_THROWS_AS(
        diffusion_coefficient(std::numeric_limits<double>::infinity(), d),
        EvaluationError);
}

TEST_CASE("diffusion_coefficient enforces the asserted lower bound", "[model]") {
    DiffusionSpec d = make_diffusion(1.0);
    d.m = 5.0;  // a(1e12) = 1e-12 + 1, far below
    REQUIRE_THROWS_AS(diffusion_coefficient(1e12, d), ModelError);
}

TEST_CASE("diffusion_coefficient bounds over a log sweep", "[model]") {
    const DiffusionSpec d = make_diffusion(0.5);
    const double upper = 1.0 / d.epsilon + d.m0;
    auto check = [&](double xi) {
        const double a = diffusion_coefficient(xi, d);
        REQUIRE(a >= d.m0);
        REQUIRE(a <= upper * (1.0 + 1e-15));
    };
    check(0.0);
    for (double e = -12.0; e <= 12.0; e += 0.25) {
        check(std::pow(10.0, e));
        check(-std::pow(10.0, e));
    }
}

TEST_CASE("diffusion_coefficient is even in xi", "[model]") {
    const DiffusionSpec d = make_diffusion(1.0);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> mag(-12.0, 12.0);
    for (int i = 0; i < 200; ++i) {
        const double xi = std::pow(10.0, mag(rng));
        REQUIRE(diffusion_coefficient(xi, d) == diffusion_coefficient(-xi, d));
    }
}

TEST_CASE("custom diffusion hook", "[model]") {
    DiffusionSpec d;
    d.custom = [](double) { return 1.0; };
    d.m = 1.0;
    REQUIRE(diffusion_coefficient(123.4, d) == 1.0);
    REQUIRE(std::isinf(d.worst_case_bound()));
    REQUIRE(make_diffusion(1.0).worst_case_bound() ==
            Catch::Approx(1e6 + 1.0).epsilon(1e-12));
}

TEST_CASE("coupling_source roots and values", "[model]") {
    ReactionSpec rs;  // r = 1, kappa = 10
    REQUIRE(coupling_source(0.0, rs) == 0.0);
    REQUIRE(coupling_source(10.0, rs) == 0.0);
    REQUIRE(coupling_source(1.0, rs) == -9.0);
}

TEST_CASE("coupling_source symmetry about kappa/2", "[model]") {
    ReactionSpec rs;
    rs.r = 1.0;
    rs.kappa = 10.0;
    std::mt19937_64 rng(64);
    std::uniform_int_distribution<long> k(0, 1 << 20);
    for (int i = 0; i < 100; ++i) {
        // Dyadic multiples of kappa keep kappa - w exact, so the symmetry is
        // exact in floating point.
        const double w = rs.kappa * static_cast<double>(k(rng)) / (1 << 20);
        REQUIRE(coupling_source(rs.kappa - w, rs) == coupling_source(w, rs));
    }
    std::uniform_real_distribution<double> any(-10.0, 20.0);
    for (int i = 0; i < 100; ++i) {
        const double w = any(rng);
        const double lhs = coupling_source(rs.kappa - w, rs);
        const double rhs = coupling_source(w, rs);
        REQUIRE(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("custom reaction hook", "[model]") {
    ReactionSpec rs;
    rs.alpha = 0.0;
    rs.f_custom = [](double w) { return w * w * w; };
    rs.validate();
    REQUIRE(coupling_source(2.0, rs) == -8.0);
    REQUIRE(coupling_source(-2.0, rs) == 8.0);

    ReactionSpec bad;
    bad.f_custom = [](double) { return 1.0; };
    REQUIRE_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("spec validation rejects out-of-range parameters", "[model]") {
    DiffusionSpec d;
    d.epsilon = 0.0;
    REQUIRE_THROWS_AS(d.validate(), ConfigError);
    d = DiffusionSpec{};
    d.m0 = -0.1;
    REQUIRE_THROWS_AS(d.validate(), ConfigError);
    d = DiffusionSpec{};
    d.m = 0.0;
    REQUIRE_THROWS_AS(d.validate(), ConfigError);

    ReactionSpec r;
    r.r = -1.0;
    REQUIRE_THROWS_AS(r.validate(), ConfigError);
    r = ReactionSpec{};
    r.kappa = 0.0;
    REQUIRE_THROWS_AS(r.validate(), ConfigError);
    r = ReactionSpec{};
    r.alpha = -1e-9;
    REQUIRE_THROWS_AS(r.validate(), ConfigError);
}

TEST_CASE("lipschitz_estimate on reference functions", "[model]") {
    REQUIRE(lipschitz_estimate([](double w) { return w; }, -1.0, 1.0, 100) ==
            Catch::Approx(1.0).margin(1e-12));
    REQUIRE(lipschitz_estimate([](double) { return 3.5; }, -1.0, 1.0, 100) == 0.0);

    // Logistic f(w) = r w (kappa - w) + alpha w with r=1, kappa=10, alpha=0:
    // max slope over [-2,2] is |f'(-2)| = kappa - 2w = 14.
    ReactionSpec rs;
    const double est = lipschitz_estimate([&rs](double w) { return rs.f(w); }, -2.0,
                                          2.0, 1000);
    REQUIRE(est == Catch::Approx(14.0).margin(0.01));

    // The logistic is not globally Lipschitz: the estimate grows with range.
    const double wider = lipschitz_estimate([&rs](double w) { return rs.f(w); }, -10.0,
                                            10.0, 1000);
    REQUIRE(wider > est + 1.0);
}

TEST_CASE("lipschitz_estimate input validation", "[model]") {
    REQUIRE_THROWS_AS(lipschitz_estimate([](double w) { return w; }, 1.0, 1.0, 10),
                      ConfigError);
    REQUIRE_THROWS_AS(lipschitz_estimate([](double w) { return w; }, 0.0, 1.0, 1),
                      ConfigError);
    REQUIRE_THROWS_AS(
        lipschitz_estimate([](double w) { return 1.0 / w; }, -1.0, 1.0, 3),
        EvaluationError);
}
