#include "decoy/kernels.hpp"
#include "decoy/rates.hpp"
#include "decoy/verify.hpp"

#include <doctest.h>

#include <cmath>

using namespace decoy;
using namespace decoy::verify;

namespace {

const ChannelParams kParams{};

std::vector<double> decoy_grid() { return kernels::logspace(1e-6, 0.45, 60); }

} // namespace

TEST_CASE("decoy monotonicity holds and a bump is caught") {
    CHECK(check_theorem1(kParams, 0.5, decoy_grid()).passed);

    const auto honest = controlled_rates(kParams);
    const RatePairFn bumped = [&](double mu_s, double mu_d) {
        auto r = honest(mu_s, mu_d);
        if (mu_d > 0.1)
            r.first += 1e-3;
        return r;
    };
    const auto bad = check_theorem1(kParams, 0.5, decoy_grid(), bumped);
    CHECK_FALSE(bad.passed);
    CHECK(bad.worst_violation > 1e-4);
    CHECK_FALSE(bad.witness.empty());
}

TEST_CASE("key-term monotonicity holds and a perturbation is caught") {
    const auto grid = kernels::logspace(1e-4, 1.0, 25);
    CHECK(check_lemma1(kParams, grid).passed);

    const auto honest = controlled_estimates(kParams);
    const EstimateFn rising = [&](double mu1, double mu2) {
        auto e = honest(mu1, mu2);
        e.a_hat += 1e-3 * mu2;
        e.c_hat += 1e-3 * mu2;
        return e;
    };
    CHECK_FALSE(check_lemma1(kParams, grid, rising).passed);
}

TEST_CASE("vanishing-decoy limits hold and an offset is caught") {
    const auto good = check_lemma2(kParams);
    CHECK(good.passed);
    CHECK(good.worst_violation < 1e-6);

    const auto honest = controlled_estimates(kParams);
    const EstimateFn shifted = [&](double mu1, double mu2) {
        auto e = honest(mu1, mu2);
        e.b_hat += 1e-5;
        return e;
    };
    CHECK_FALSE(check_lemma2(kParams, 1e-8, 0.5, 1e-6, shifted).passed);
}

TEST_CASE("mismatched-intensity items hold and each fault is caught") {
    const auto s_grid = kernels::linspace(0.45, 0.55, 9);
    const auto d_grid = kernels::linspace(0.09, 0.11, 9);
    const auto results = check_lemma3(kParams, 0.5, 0.1, s_grid, d_grid);
    REQUIRE(results.size() == 7);
    for (const auto& r : results)
        CHECK_MESSAGE(r.passed, r.name);

    const auto honest = mismatched_estimates(kParams, 0.5, 0.1);
    const TrueEstimateFn wrong_way = [&](double mu_s, double mu_d) {
        auto e = honest(mu_s, mu_d);
        e.a_hat += mu_s;
        e.b_hat *= 0.1 / mu_d;
        return e;
    };
    const auto faulty = check_lemma3(kParams, 0.5, 0.1, s_grid, d_grid, wrong_way);
    CHECK_FALSE(all_passed(faulty));
    CHECK_FALSE(faulty[0].passed);
    CHECK_FALSE(faulty[1].passed);
}

TEST_CASE("mismatched-intensity items are skipped for an inverted hypothesis") {
    const auto results =
        check_lemma3(kParams, 0.1, 0.5, kernels::linspace(0.09, 0.11, 3), kernels::linspace(0.45, 0.55, 3));
    for (const auto& r : results) {
        CHECK(r.skipped);
        CHECK(r.passed);
    }
}

TEST_CASE("scaled-transmission estimators") {
    const auto results = check_lemma4(kParams, 0.05, 0.5, kernels::logspace(1e-8, 0.45, 80));
    REQUIRE(results.size() == 2);
    CHECK(results[0].passed);
    CHECK(results[1].passed);

    const auto coarse = check_lemma4(kParams, 0.05, 0.5, kernels::logspace(0.1, 0.45, 5));
    CHECK(coarse[0].passed);
    CHECK_FALSE(coarse[1].passed);
}

TEST_CASE("worst-case supremum matches the closed form and a bias is caught") {
    const auto good = check_theorem2(kParams, 0.5, 0.01);
    CHECK(good.passed);
    CHECK_FALSE(good.skipped);

    const WorstCaseFn biased = [&](double mu_d) {
        const auto w = rate_e_worst_case(kParams, IntensitySpec{0.5, mu_d, 0.01});
        return std::pair{w.rate_improved + 1e-4, w.rate_conventional};
    };
    CHECK_FALSE(check_theorem2(kParams, 0.5, 0.01, {}, biased).passed);
}

TEST_CASE("worst-case supremum is skipped when the signal condition fails") {
    const auto r = check_theorem2(kParams, 0.99, 0.05);
    CHECK(r.skipped);
    CHECK(r.passed);
    CHECK(r.note.find("precondition") != std::string::npos);
}

TEST_CASE("corner minimizer holds and a displaced minimum is caught") {
    const IntensitySpec spec{0.5, 0.1, 0.03};
    const auto good = check_corner_minimizer(kParams, spec, 60);
    REQUIRE(good.size() == 2);
    CHECK(good[0].passed);
    CHECK(good[1].passed);

    const auto honest = hypothesis_rates(kParams, spec);
    const RatePairFn dip = [&](double mu_s, double mu_d) {
        auto r = honest(mu_s, mu_d);
        if (std::abs(mu_s - 0.5) < 0.005 && std::abs(mu_d - 0.1) < 0.001) {
            r.first -= 1.0;
            r.second -= 1.0;
        }
        return r;
    };
    const auto bad = check_corner_minimizer(kParams, spec, 60, 1e-9, dip);
    CHECK_FALSE(bad[0].passed);
    CHECK_FALSE(bad[1].passed);
}

TEST_CASE("full run passes for default parameters") {
    for (double eps : {0.0, 0.02, 0.1}) {
        const auto results = run_all(kParams, IntensitySpec{0.5, 0.1, eps});
        for (const auto& r : results)
            CHECK_MESSAGE(r.passed, r.name << " eps=" << eps);
        CHECK(all_passed(results));
    }
}
