#pragma once

#include "decoy/estimators.hpp"
#include "decoy/model.hpp"
#include "decoy/optimize.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace decoy::verify {

/// Outcome of one numerical check. `passed` is worst_violation <= tolerance;
/// a skipped check (precondition not met) counts as passed with no violation.
struct CheckResult {
    std::string name;
    bool passed = true;
    bool skipped = false;
    double worst_violation = 0.0;
    std::string witness;
    double tolerance = 0.0;
    std::string note;
};

inline constexpr double kMonotoneTolerance = 1e-12;

/// (R, R~) as functions of (mu_s, mu_d).
using RatePairFn = std::function<std::pair<double, double>(double, double)>;
/// Controlled estimates for (mu1, mu2), mu1 < mu2.
using EstimateFn = std::function<Estimates(double, double)>;
/// Estimates for true intensities (mu_s_true, mu_d_true) at fixed hypotheses.
using TrueEstimateFn = std::function<Estimates(double, double)>;
/// Worst-case (R_e, R~_e) as a function of the nominal decoy intensity.
using WorstCaseFn = std::function<std::pair<double, double>(double)>;

RatePairFn controlled_rates(const ChannelParams& params);
EstimateFn controlled_estimates(const ChannelParams& params);
TrueEstimateFn mismatched_estimates(const ChannelParams& params, double mu_s_hyp, double mu_d_hyp);
RatePairFn hypothesis_rates(const ChannelParams& params, const IntensitySpec& spec);

/// R and R~ nonincreasing along an ascending decoy grid (points equal to
/// mu_s are skipped).
CheckResult check_theorem1(const ChannelParams& params, double mu_s,
                           const std::vector<double>& mu_d_grid, RatePairFn rates = {});

/// (c+b)(1-h(b/(c+b))) and a(1-h(b/a)) nonincreasing in mu1 and in mu2 over
/// all pairs mu1 < mu2 of the grid where the phase-error ratio is below 1/2.
CheckResult check_lemma1(const ChannelParams& params, const std::vector<double>& grid,
                         EstimateFn estimates = {});

/// Componentwise distance between the estimates at (mu1, mu2) and their
/// mu1 -> 0 limits.
CheckResult check_lemma2(const ChannelParams& params, double mu1 = 1e-8, double mu2 = 0.5,
                         double tolerance = 1e-6, EstimateFn estimates = {});

/// Items (i)-(vii) of the mismatched-intensity monotonicity lemma, one result
/// per item, with the hypothesis intensities fixed (mu_d_hyp < mu_s_hyp) and
/// the true intensities swept over the two ascending grids.
std::vector<CheckResult> check_lemma3(const ChannelParams& params, double mu_s_hyp,
                                      double mu_d_hyp, const std::vector<double>& true_s_grid,
                                      const std::vector<double>& true_d_grid,
                                      TrueEstimateFn estimates = {});

/// Estimators fed by a decoy with transmission scaled by 1/(1+epsilon). The
/// first result checks f_a and f_c nonincreasing and f_b nondecreasing in
/// mu_d, so the mu_d -> 0 limit is a sup for a, c and an inf for b. The second
/// compares the smallest grid point with the closed-form limits (1e-6).
std::vector<CheckResult> check_lemma4(const ChannelParams& params, double epsilon,
                                      double mu_s_nominal, const std::vector<double>& mu_d_grid);

/// Sup over the nominal decoy intensity of the worst-case rates against the
/// closed form, tolerance 1e-5. Skipped when the signal condition fails.
CheckResult check_theorem2(const ChannelParams& params, double mu_s_nominal, double epsilon,
                           const OptimizeConfig& cfg = {}, WorstCaseFn worst = {});

/// Dense-grid minimum of each rate over the hypothesis rectangle against the
/// value at the predicted corner. Returns results for R_e and R~_e.
std::vector<CheckResult> check_corner_minimizer(const ChannelParams& params,
                                                const IntensitySpec& spec, int points = 200,
                                                double tolerance = 1e-9, RatePairFn rates = {});

/// Every check with grids derived from `spec`.
std::vector<CheckResult> run_all(const ChannelParams& params, const IntensitySpec& spec);

bool all_passed(const std::vector<CheckResult>& results);

} // namespace decoy::verify
