#include "decoy/estimators.hpp"

#include "decoy/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace decoy {

namespace {

void require_ordered(double mu1, double mu2) {
    if (!(mu1 > 0.0) || !(mu2 > mu1) || !std::isfinite(mu2)) {
        std::ostringstream msg;
        msg << "estimator requires 0 < mu1 < mu2, got mu1=" << mu1 << " mu2=" << mu2;
        throw DomainError(msg.str());
    }
}

void require_series_domain(double mu1, double mu2) {
    if (!(mu1 >= 0.0) || !(mu2 >= mu1) || !(mu2 > 0.0) || !std::isfinite(mu2)) {
        std::ostringstream msg;
        msg << "series requires 0 <= mu1 <= mu2, mu2 > 0, got mu1=" << mu1 << " mu2=" << mu2;
        throw DomainError(msg.str());
    }
}

// 1 - (1 - alpha)^n without cancellation for small alpha.
double survival_complement(double alpha, int n) {
    if (alpha >= 1.0)
        return 1.0;
    return -std::expm1(n * std::log1p(-alpha));
}

// Two-slot estimator kernel shared by f_a and f_c. `vacuum` is the vacuum
// contribution per unit e^{-mu}: p0 for f_a, p0/2 for f_c.
double two_slot(double p1, double p2, double mu1, double mu2, double vacuum) {
    require_ordered(mu1, mu2);
    const double num = mu2 * mu2 * std::exp(mu1) * (p1 - vacuum * std::exp(-mu1))
                     - mu1 * mu1 * std::exp(mu2) * (p2 - vacuum * std::exp(-mu2));
    return pos_part(num / (mu1 * mu2 * (mu2 - mu1)));
}

// Sum over n = 3..N of coef(n)/n! * sum_{m=0}^{n-3} mu1^{m+1} mu2^{n-2-m}.
template <class Coef>
double two_slot_series_tail(double mu1, double mu2, int order, Coef coef) {
    double inv_fact = 1.0 / 6.0;      // 1/3!
    double cross = mu1 * mu2;         // n = 3 cross sum
    double mu1_pow = mu1 * mu1;       // mu1^{n-1}
    double sum = 0.0;
    for (int n = 3; n <= order; ++n) {
        sum += coef(n) * inv_fact * cross;
        cross = mu2 * cross + mu1_pow * mu2;
        mu1_pow *= mu1;
        inv_fact /= (n + 1);
    }
    return sum;
}

// Geometric bound on sum_{n > order} K (n - 2) M^{n-1} / n!.
double factorial_tail(double scale, double m, int order, bool cross_sum) {
    const int n = order + 1;
    double term = scale * (cross_sum ? (n - 2) : 1);
    for (int k = 1; k <= n; ++k)
        term *= (k < n ? m : 1.0) / k;
    // Successive term ratio is at most (n-1)/(n-2) * M/(n+1) or M/(n+1).
    const double ratio = (cross_sum ? double(n - 1) / double(n - 2) : 1.0) * m / (n + 1);
    if (ratio >= 1.0)
        return std::numeric_limits<double>::infinity();
    return term / (1.0 - ratio);
}

void check_tail(double bound, const char* which, int order) {
    if (!(bound <= kSeriesTailTolerance)) {
        std::ostringstream msg;
        msg << which << " series truncated at order " << order
            << " has tail bound " << bound << " above " << kSeriesTailTolerance;
        throw AccuracyError(msg.str(), bound);
    }
}

bool prefer_series(const ChannelParams& params, double mu1, double mu2, const SeriesConfig& cfg) {
    const bool small = mu1 < cfg.switch_threshold;
    const bool near_diagonal = (mu2 - mu1) < cfg.switch_threshold * mu2;
    if (!small && !near_diagonal)
        return false;
    return a_c_series_tail_bound(params, mu1, mu2, cfg.truncation_order) <= kSeriesTailTolerance;
}

} // namespace

void SeriesConfig::validate() const {
    if (truncation_order < 5)
        throw DomainError("series truncation order must be >= 5");
    if (!(switch_threshold > 0.0))
        throw DomainError("series switch threshold must be positive");
}

double f_a(double p1, double p2, double mu1, double mu2, double p0) {
    return two_slot(p1, p2, mu1, mu2, p0);
}

double f_b(double s1, double mu1, double p0) {
    if (!(mu1 > 0.0) || !std::isfinite(mu1))
        throw DomainError("f_b requires mu1 > 0");
    return pos_part((s1 * std::exp(mu1) - p0 / 2.0) / mu1);
}

double f_c(double p1, double p2, double mu1, double mu2, double p0) {
    return two_slot(p1, p2, mu1, mu2, p0 / 2.0);
}

Estimates estimate_from_observables(const PulseObservables& obs_d, const PulseObservables& obs_s,
                                    double mu_d, double mu_s, double p0) {
    if (!(mu_d > 0.0) || !(mu_s > 0.0))
        throw DomainError("intensities must be positive");
    if (mu_d == mu_s)
        throw DomainError("equal signal and decoy intensities: the decoy method does not work");

    const bool decoy_first = mu_d < mu_s;
    const PulseObservables& lo = decoy_first ? obs_d : obs_s;
    const PulseObservables& hi = decoy_first ? obs_s : obs_d;
    const double mu1 = std::min(mu_d, mu_s);
    const double mu2 = std::max(mu_d, mu_s);

    return Estimates{
        f_a(lo.p_times, hi.p_times, mu1, mu2, p0),
        f_b(lo.error_product_times(), mu1, p0),
        f_c(lo.correct_product_times(), hi.correct_product_times(), mu1, mu2, p0),
    };
}

double a_hat_direct(const ChannelParams& params, double mu1, double mu2) {
    require_ordered(mu1, mu2);
    const auto term = [&](double mu) {
        return click_probability(params, mu) - params.p0 * std::expm1(-mu);
    };
    return (mu2 * mu2 * std::exp(mu1) * term(mu1) - mu1 * mu1 * std::exp(mu2) * term(mu2))
         / (mu1 * mu2 * (mu2 - mu1));
}

double b_hat_direct(const ChannelParams& params, double mu1) {
    if (!(mu1 > 0.0))
        throw DomainError("b_hat requires mu1 > 0");
    return (params.s * click_probability(params, mu1) * std::exp(mu1)
            + params.p0 / 2.0 * std::expm1(mu1)) / mu1;
}

double c_hat_direct(const ChannelParams& params, double mu1, double mu2) {
    require_ordered(mu1, mu2);
    const auto term = [&](double mu) {
        return (1.0 - params.s) * click_probability(params, mu) - params.p0 / 2.0 * std::expm1(-mu);
    };
    return (mu2 * mu2 * std::exp(mu1) * term(mu1) - mu1 * mu1 * std::exp(mu2) * term(mu2))
         / (mu1 * mu2 * (mu2 - mu1));
}

double a_c_series_tail_bound(const ChannelParams& params, double mu1, double mu2, int order) {
    return factorial_tail(1.0 + params.p0, std::max({mu1, mu2, 0.0}), order, true);
}

double b_series_tail_bound(const ChannelParams& params, double mu1, int order) {
    return factorial_tail(params.s + params.p0 / 2.0, mu1, order, false);
}

double a_hat_series(const ChannelParams& params, double mu1, double mu2, const SeriesConfig& cfg) {
    cfg.validate();
    require_series_domain(mu1, mu2);
    check_tail(a_c_series_tail_bound(params, mu1, mu2, cfg.truncation_order), "a_hat",
               cfg.truncation_order);
    const double tail = two_slot_series_tail(mu1, mu2, cfg.truncation_order, [&](int n) {
        return survival_complement(params.alpha, n) + params.p0;
    });
    return params.alpha + params.p0 - tail;
}

double b_hat_series(const ChannelParams& params, double mu1, const SeriesConfig& cfg) {
    cfg.validate();
    if (!(mu1 >= 0.0) || !std::isfinite(mu1))
        throw DomainError("b_hat series requires mu1 >= 0");
    check_tail(b_series_tail_bound(params, mu1, cfg.truncation_order), "b_hat",
               cfg.truncation_order);
    double sum = params.s * params.alpha + params.p0 / 2.0;
    double power_over_fact = mu1 / 2.0; // mu1^{n-1}/n! at n = 2
    for (int n = 2; n <= cfg.truncation_order; ++n) {
        sum += (params.s * survival_complement(params.alpha, n) + params.p0 / 2.0) * power_over_fact;
        power_over_fact *= mu1 / (n + 1);
    }
    return sum;
}

double c_hat_series(const ChannelParams& params, double mu1, double mu2, const SeriesConfig& cfg) {
    cfg.validate();
    require_series_domain(mu1, mu2);
    check_tail(a_c_series_tail_bound(params, mu1, mu2, cfg.truncation_order), "c_hat",
               cfg.truncation_order);
    const double tail = two_slot_series_tail(mu1, mu2, cfg.truncation_order, [&](int n) {
        return (1.0 - params.s) * survival_complement(params.alpha, n) + params.p0 / 2.0;
    });
    return (1.0 - params.s) * params.alpha + params.p0 / 2.0 - tail;
}

Estimates estimate_controlled(const ChannelParams& params, double mu1, double mu2,
                              const SeriesConfig& cfg) {
    require_ordered(mu1, mu2);
    cfg.validate();
    if (prefer_series(params, mu1, mu2, cfg)) {
        return Estimates{
            pos_part(a_hat_series(params, mu1, mu2, cfg)),
            pos_part(b_hat_series(params, mu1, cfg)),
            pos_part(c_hat_series(params, mu1, mu2, cfg)),
        };
    }
    return Estimates{
        pos_part(a_hat_direct(params, mu1, mu2)),
        pos_part(b_hat_direct(params, mu1)),
        pos_part(c_hat_direct(params, mu1, mu2)),
    };
}

Estimates limits_mu1_zero(const ChannelParams& params) {
    return Estimates{
        params.alpha + params.p0,
        params.s * params.alpha + params.p0 / 2.0,
        (1.0 - params.s) * params.alpha + params.p0 / 2.0,
    };
}

} // namespace decoy
