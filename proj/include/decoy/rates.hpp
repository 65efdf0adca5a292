#pragma once

#include "decoy/estimators.hpp"
#include "decoy/model.hpp"
#include "decoy/optimize.hpp"

#include <vector>

namespace decoy {

/// Key rates per sent signal pulse together with the quantities behind them.
struct RateReport {
    double rate_improved = 0.0;     ///< R: uses c_hat + b_hat as the single-photon yield
    double rate_conventional = 0.0; ///< R~: uses a_hat
    Estimates estimates;
    double phase_error_ratio = 0.0;              ///< b_hat / (c_hat + b_hat)
    double phase_error_ratio_conventional = 0.0; ///< b_hat / a_hat
    bool clamped_improved = false;     ///< single-photon term of R was zeroed
    bool clamped_conventional = false; ///< single-photon term of R~ was zeroed

    bool sifting_note() const { return clamped_improved || clamped_conventional; }
};

/// Binary entropy in bits, with 0 log 0 = 0. Throws DomainError outside [0, 1].
double binary_entropy(double x);

/// Secure fraction per received signal pulse in the matched basis,
///   (p0 + a mu_s (1 - h(e_x))) e^{-mu_s} / p_s - eta h(e_s).
/// Throws DomainError when p_s <= 0 or the implied multi-photon fraction is
/// negative.
double gllp_rate(double p0, double a, double e_x, double mu_s, double p_s_plus,
                 double e_s_plus, double eta);

/// Privacy-amplification term yield (1 - h(phase_errors / yield)); zero when
/// the ratio reaches 1/2 or the yield vanishes. `clamped` reports that case.
double single_photon_key(double yield, double phase_errors, bool& clamped);

/// Controlled-intensity rates R and R~ at true intensities (mu_s, mu_d).
RateReport evaluate_rates(const ChannelParams& params, double mu_s, double mu_d,
                          const SeriesConfig& cfg = {});
double rate_improved(const ChannelParams& params, double mu_s, double mu_d,
                     const SeriesConfig& cfg = {});
double rate_conventional(const ChannelParams& params, double mu_s, double mu_d,
                         const SeriesConfig& cfg = {});

/// Common value of R and R~ as the decoy intensity goes to zero.
double rate_limit_decoy_zero(const ChannelParams& params, double mu_s);

/// Rates when the source emits (mu_s_true, mu_d_true) but the estimators
/// assume (mu_s_hyp, mu_d_hyp). The e^{-mu_s} prefactors use the hypothesis
/// signal intensity; the error-correction term uses the true observables.
RateReport rate_e_point(const ChannelParams& params, double mu_s_hyp, double mu_d_hyp,
                        double mu_s_true, double mu_d_true);

/// Worst case of rate_e_point over the hypothesis rectangle of `spec`, with
/// the observables generated at the nominal intensities.
struct WorstCase {
    double rate_improved = 0.0;
    double rate_conventional = 0.0;
    double mu_s_improved = 0.0; ///< hypothesis minimizing R_e
    double mu_d_improved = 0.0;
    double mu_s_conventional = 0.0; ///< hypothesis minimizing R~_e
    double mu_d_conventional = 0.0;
    Location location_improved = Location::corner;
    Location location_conventional = Location::corner;
};

WorstCase rate_e_worst_case(const ChannelParams& params, const IntensitySpec& spec,
                            const OptimizeConfig& cfg = {});

/// Right-hand side of the signal-intensity condition under which the
/// vanishing-decoy worst case has a closed form:
///   1 - p0 / ((alpha' + p0)(1 - h((s alpha' + p0/2)/(alpha' + p0)))),
/// with alpha' = alpha/(1+epsilon). Returns 1 when p0 == 0 and -inf when the
/// single-photon key term vanishes while p0 > 0.
double limit_condition_rhs(const ChannelParams& params, double epsilon);

/// True iff mu_s_nominal (1 + epsilon) <= limit_condition_rhs(params, epsilon).
bool limit_condition_holds(const ChannelParams& params, double mu_s_nominal, double epsilon);

/// Closed-form sup over the decoy intensity of the worst-case improved rate.
/// Throws PreconditionError when limit_condition_holds is false.
double rate_e_limit(const ChannelParams& params, double mu_s_nominal, double epsilon);

} // namespace decoy
