#pragma once

namespace decoy {

/// Physical channel description plus the error-correction overhead.
struct ChannelParams {
    double alpha = 0.1;  ///< total transmission, detector efficiency included
    double s = 0.05;     ///< intrinsic optical error fraction
    double p0 = 1e-5;    ///< background (dark) detection rate per pulse
    double eta_ec = 1.1; ///< error-correction efficiency, 1 is the Shannon limit

    /// Throws DomainError naming the first violated bound.
    void validate() const;
};

/// Detection and error statistics of one pulse intensity, in both bases.
struct PulseObservables {
    double p_plus = 0.0;
    double p_times = 0.0;
    double e_plus = 0.5;
    double e_times = 0.5;

    double error_product_plus() const { return e_plus * p_plus; }
    double error_product_times() const { return e_times * p_times; }
    double correct_product_times() const { return (1.0 - e_times) * p_times; }
};

/// Nominal source intensities and their common relative uncertainty.
struct IntensitySpec {
    double mu_s_nominal = 0.5;
    double mu_d_nominal = 0.1;
    double epsilon = 0.0;

    /// Throws DomainError when an intensity is non-positive, epsilon is out of
    /// [0, 1), or the two uncertainty intervals overlap.
    void validate() const;

    /// True when the signal and decoy intervals are disjoint.
    bool identifiable() const;

    double mu_s_lo() const { return (1.0 - epsilon) * mu_s_nominal; }
    double mu_s_hi() const { return (1.0 + epsilon) * mu_s_nominal; }
    double mu_d_lo() const { return (1.0 - epsilon) * mu_d_nominal; }
    double mu_d_hi() const { return (1.0 + epsilon) * mu_d_nominal; }
};

/// 1 - exp(-alpha*mu), the probability that a coherent pulse of mean photon
/// number mu yields a signal click. Accurate for tiny alpha*mu.
double click_probability(const ChannelParams& params, double mu);

/// No-eavesdropper observables for a pulse whose physical intensity is `mu`:
///   p = 1 - exp(-alpha mu) + p0,  e p = s (1 - exp(-alpha mu)) + p0/2
/// in both bases. When p == 0 the error fraction is reported as 1/2.
PulseObservables observables(const ChannelParams& params, double mu);

} // namespace decoy
