#include "decoy/error.hpp"
#include "decoy/rates.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace decoy;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

} // namespace

TEST_CASE("binary entropy") {
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(0.5) == 1.0);
    CHECK(rel(binary_entropy(0.11), 0.49991595816452799564) < 1e-14);
    CHECK(binary_entropy(0.2) == doctest::Approx(binary_entropy(0.8)).epsilon(1e-15));
    CHECK_THROWS_AS(binary_entropy(-0.1), DomainError);
    CHECK_THROWS_AS(binary_entropy(1.1), DomainError);
}

TEST_CASE("controlled rates against the oracle") {
    const ChannelParams ideal_ec{0.1, 0.05, 1e-5, 1.0};
    const auto tiny = evaluate_rates(ideal_ec, 0.5, 1e-6);
    CHECK(rel(tiny.rate_improved, 0.0076538097927229900598) < 1e-10);
    CHECK(rel(tiny.rate_conventional, 0.0076538080840959504022) < 1e-10);

    const ChannelParams p{};
    const auto r = evaluate_rates(p, 0.5, 0.1);
    CHECK(rel(r.rate_improved, 0.0050365902444268826164) < 1e-12);
    CHECK(rel(r.rate_conventional, 0.0048598799796477727085) < 1e-12);
    CHECK(r.rate_improved == rate_improved(p, 0.5, 0.1));
    CHECK(r.rate_conventional == rate_conventional(p, 0.5, 0.1));
    CHECK_FALSE(r.sifting_note());
}

TEST_CASE("rate limit as the decoy vanishes") {
    const ChannelParams p{0.1, 0.05, 1e-5, 1.0};
    CHECK(rel(rate_limit_decoy_zero(p, 0.5), 0.0076538216843600512959) < 1e-13);
    CHECK(std::abs(rate_improved(p, 0.5, 1e-9) - rate_limit_decoy_zero(p, 0.5)) < 1e-10);
    CHECK(std::abs(rate_conventional(p, 0.5, 1e-9) - rate_limit_decoy_zero(p, 0.5)) < 1e-10);
}

TEST_CASE("improved rate dominates the conventional one") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> alpha(0.01, 1.0), s(0.0, 0.1), lp0(-7.0, -3.0);
    for (int k = 0; k < 20; ++k) {
        const ChannelParams p{alpha(rng), s(rng), std::pow(10.0, lp0(rng)), 1.1};
        for (double mu_s : {0.3, 0.6, 0.9})
            for (double mu_d = 1e-4; mu_d < mu_s; mu_d *= 1.9) {
                const auto r = evaluate_rates(p, mu_s, mu_d);
                if (r.phase_error_ratio < 0.5 && r.phase_error_ratio_conventional < 0.5)
                    CHECK(r.rate_improved >= r.rate_conventional - 1e-12);
            }
    }
}

TEST_CASE("single-photon key term clamps at a phase-error ratio of one half") {
    bool clamped = false;
    CHECK(single_photon_key(0.1, 0.05, clamped) == 0.0);
    CHECK(clamped);
    clamped = false;
    CHECK(single_photon_key(0.0, 0.0, clamped) == 0.0);
    CHECK(clamped);
    clamped = false;
    CHECK(single_photon_key(0.1, 0.01, clamped) ==
          doctest::Approx(0.1 * (1.0 - binary_entropy(0.1))));
    CHECK_FALSE(clamped);
}

TEST_CASE("noisy channel raises the sifting note") {
    const ChannelParams p{0.1, 0.45, 1e-3, 1.0};
    const auto r = evaluate_rates(p, 0.5, 0.1);
    CHECK(r.sifting_note());
    CHECK(r.rate_improved < 0.0);
}

TEST_CASE("dead channel gives undefined ratios") {
    const ChannelParams p{0.0, 0.05, 0.0, 1.0};
    const auto r = evaluate_rates(p, 0.5, 0.1);
    CHECK(std::isnan(r.phase_error_ratio));
    CHECK(r.rate_improved == 0.0);
}

TEST_CASE("gllp rate") {
    const ChannelParams p{};
    const auto e = estimate_controlled(p, 0.1, 0.5);
    const auto obs = observables(p, 0.5);
    const double v =
        gllp_rate(p.p0, e.a_hat, e.b_hat / e.a_hat, 0.5, obs.p_plus, obs.e_plus, p.eta_ec);
    CHECK(rel(v, 0.099627360479150303375) < 1e-12);
    const double per_sent = v * obs.p_plus;
    CHECK(per_sent == doctest::Approx(evaluate_rates(p, 0.5, 0.1).rate_conventional).epsilon(1e-12));
    CHECK_THROWS_AS(gllp_rate(p.p0, e.a_hat, 0.01, 0.5, 0.0, 0.01, 1.0), DomainError);
    CHECK_THROWS_AS(gllp_rate(p.p0, 10.0, 0.01, 0.5, obs.p_plus, 0.01, 1.0), DomainError);
}

TEST_CASE("mismatched-intensity point rates") {
    const ChannelParams p{0.1, 0.05, 1e-5, 1.0};
    const auto r = rate_e_point(p, 0.475, 0.105, 0.5, 0.1);
    CHECK(rel(r.rate_improved, 0.0038178601058164994749) < 1e-11);
    CHECK(rel(r.rate_conventional, 0.0035890831983940977702) < 1e-11);

    const auto matched = rate_e_point(p, 0.5, 0.1, 0.5, 0.1);
    const auto controlled = evaluate_rates(p, 0.5, 0.1);
    CHECK(matched.rate_improved == doctest::Approx(controlled.rate_improved).epsilon(1e-12));
}

TEST_CASE("worst case sits at the predicted corner") {
    const ChannelParams p{};
    for (double eps : {0.01, 0.03, 0.05}) {
        const IntensitySpec spec{0.5, 0.1, eps};
        const auto w = rate_e_worst_case(p, spec);
        CHECK(w.mu_s_improved == spec.mu_s_lo());
        CHECK(w.mu_d_improved == spec.mu_d_hi());
        CHECK(w.location_improved == Location::corner);
        const auto at_corner =
            rate_e_point(p, spec.mu_s_lo(), spec.mu_d_hi(), 0.5, 0.1).rate_improved;
        CHECK(w.rate_improved == at_corner);
    }
}

TEST_CASE("worst case without uncertainty is the point value") {
    const ChannelParams p{};
    const auto w = rate_e_worst_case(p, IntensitySpec{0.5, 0.1, 0.0});
    CHECK(w.rate_improved == doctest::Approx(evaluate_rates(p, 0.5, 0.1).rate_improved).epsilon(1e-12));
}

TEST_CASE("worst case rejects overlapping intervals") {
    CHECK_THROWS_AS(rate_e_worst_case(ChannelParams{}, IntensitySpec{0.5, 0.45, 0.1}), DomainError);
}

TEST_CASE("signal condition and closed-form limit") {
    const ChannelParams p{};
    CHECK(rel(limit_condition_rhs(p, 0.01), 0.99985844073333687688) < 1e-13);
    CHECK(limit_condition_holds(p, 0.5, 0.01));
    CHECK_FALSE(limit_condition_holds(p, 0.99, 0.02));
    CHECK(rel(rate_e_limit(p, 0.5, 0.01), 0.005932690306919318514) < 1e-12);

    const ChannelParams no_dark{0.0, 0.05, 0.0, 1.0};
    CHECK(limit_condition_rhs(no_dark, 0.1) == 1.0);

    const ChannelParams dead{0.0, 0.05, 1e-5, 1.0};
    CHECK(std::isinf(limit_condition_rhs(dead, 0.0)));
    try {
        rate_e_limit(dead, 0.5, 0.0);
        FAIL("expected PreconditionError");
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()).find("signal intensity condition violated") != std::string::npos);
    }
}

TEST_CASE("closed-form limit matches the worst case at a tiny decoy") {
    const ChannelParams p{};
    for (double eps : {0.01, 0.05}) {
        const IntensitySpec spec{0.5, 1e-7, eps};
        const auto w = rate_e_worst_case(p, spec);
        CHECK(std::abs(w.rate_improved - rate_e_limit(p, 0.5, eps)) < 1e-6);
    }
}
