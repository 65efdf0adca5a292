#pragma once

#include "decoy/model.hpp"

namespace decoy {

/// Decoy-method bounds on the single-photon rates.
struct Estimates {
    double a_hat = 0.0; ///< detection rate of single-photon pulses
    double b_hat = 0.0; ///< single-photon detections with a phase error
    double c_hat = 0.0; ///< single-photon detections without a phase error
};

/// Controls how the model estimators are evaluated close to mu1 = 0 and
/// close to the diagonal mu1 = mu2, where the closed forms cancel.
struct SeriesConfig {
    int truncation_order = 40;
    double switch_threshold = 1e-2;

    void validate() const;
};

/// Largest tail bound a truncated series may carry before it is rejected.
inline constexpr double kSeriesTailTolerance = 1e-15;

inline double pos_part(double x) { return x > 0.0 ? x : 0.0; }

// Generic estimators on measured rates. All require 0 < mu1 < mu2 (f_b only
// mu1 > 0) and clamp the final value at zero.

/// Single-photon yield bound from the detection rates p1, p2 at mu1 < mu2.
double f_a(double p1, double p2, double mu1, double mu2, double p0);
/// Single-photon phase-error bound from the error product s1 at mu1.
double f_b(double s1, double mu1, double p0);
/// Error-free single-photon bound from the correct-count products p1, p2.
double f_c(double p1, double p2, double mu1, double mu2, double p0);

/// Estimates computed from measured phase-basis observables, with hypothesis
/// intensities mu_d and mu_s. The smaller intensity takes the first slot of
/// f_a and f_c and feeds f_b.
Estimates estimate_from_observables(const PulseObservables& obs_d,
                                    const PulseObservables& obs_s,
                                    double mu_d, double mu_s, double p0);

/// Estimates for the no-eavesdropper model with true intensities mu1 < mu2.
///
/// The closed forms are used when mu1 >= cfg.switch_threshold and the pair is
/// not close to the diagonal; otherwise the nonnegative-coefficient series are
/// used, provided their tail bound is below kSeriesTailTolerance.
Estimates estimate_controlled(const ChannelParams& params, double mu1, double mu2,
                              const SeriesConfig& cfg = {});

/// Model closed forms, evaluated directly (no series, no clamp).
double a_hat_direct(const ChannelParams& params, double mu1, double mu2);
double b_hat_direct(const ChannelParams& params, double mu1);
double c_hat_direct(const ChannelParams& params, double mu1, double mu2);

/// Truncated power series of the model estimators, valid for 0 <= mu1 < mu2
/// (mu1 == mu2 is also accepted). Throws AccuracyError carrying the tail bound
/// when the omitted terms may exceed kSeriesTailTolerance.
double a_hat_series(const ChannelParams& params, double mu1, double mu2,
                    const SeriesConfig& cfg = {});
double b_hat_series(const ChannelParams& params, double mu1, const SeriesConfig& cfg = {});
double c_hat_series(const ChannelParams& params, double mu1, double mu2,
                    const SeriesConfig& cfg = {});

/// Upper bounds on the magnitude of the omitted series terms.
double a_c_series_tail_bound(const ChannelParams& params, double mu1, double mu2, int order);
double b_series_tail_bound(const ChannelParams& params, double mu1, int order);

/// mu1 -> 0 limits: (alpha + p0, s alpha + p0/2, (1 - s) alpha + p0/2).
Estimates limits_mu1_zero(const ChannelParams& params);

} // namespace decoy
