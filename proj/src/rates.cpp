#include "decoy/rates.hpp"

#include "decoy/error.hpp"
#include "decoy/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace decoy {

namespace {

double safe_ratio(double num, double den) {
    return den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
}

// p_s eta h(e_s): the error-correction leakage per sent signal pulse.
double leakage(const ChannelParams& params, const PulseObservables& signal) {
    if (signal.p_plus <= 0.0)
        return 0.0;
    return signal.p_plus * params.eta_ec * binary_entropy(signal.e_plus);
}

RateReport assemble(const ChannelParams& params, const Estimates& est, double mu_s_prefactor,
                    const PulseObservables& signal) {
    RateReport report;
    report.estimates = est;
    report.phase_error_ratio = safe_ratio(est.b_hat, est.c_hat + est.b_hat);
    report.phase_error_ratio_conventional = safe_ratio(est.b_hat, est.a_hat);

    const double vacuum_weight = std::exp(-mu_s_prefactor);
    const double single_weight = mu_s_prefactor * vacuum_weight;
    const double tail = vacuum_weight * params.p0 - leakage(params, signal);

    report.rate_improved =
        single_weight * single_photon_key(est.c_hat + est.b_hat, est.b_hat, report.clamped_improved)
        + tail;
    report.rate_conventional =
        single_weight * single_photon_key(est.a_hat, est.b_hat, report.clamped_conventional) + tail;
    return report;
}

void require_distinct(double mu_s, double mu_d) {
    if (!(mu_s > 0.0) || !(mu_d > 0.0) || !std::isfinite(mu_s) || !std::isfinite(mu_d))
        throw DomainError("intensities must be positive and finite");
    if (mu_s == mu_d)
        throw DomainError("equal signal and decoy intensities: the decoy method does not work");
}

} // namespace

double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw DomainError("binary entropy argument outside [0, 1]");
    if (x == 0.0 || x == 1.0)
        return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double gllp_rate(double p0, double a, double e_x, double mu_s, double p_s_plus,
                 double e_s_plus, double eta) {
    if (!(p_s_plus > 0.0))
        throw DomainError("gllp_rate requires a positive signal detection rate");
    const double explained = (p0 + a * mu_s) * std::exp(-mu_s) / p_s_plus;
    const double multi_photon = 1.0 - explained;
    if (multi_photon < -1e-12) {
        std::ostringstream msg;
        msg << "multi-photon fraction r = " << multi_photon << " < 0";
        throw DomainError(msg.str());
    }
    return (p0 + a * mu_s * (1.0 - binary_entropy(e_x))) * std::exp(-mu_s) / p_s_plus
         - eta * binary_entropy(e_s_plus);
}

double single_photon_key(double yield, double phase_errors, bool& clamped) {
    if (!(yield > 0.0)) {
        clamped = true;
        return 0.0;
    }
    const double ratio = phase_errors / yield;
    if (!(ratio < 0.5)) {
        clamped = true;
        return 0.0;
    }
    clamped = false;
    return yield * (1.0 - binary_entropy(ratio));
}

RateReport evaluate_rates(const ChannelParams& params, double mu_s, double mu_d,
                          const SeriesConfig& cfg) {
    params.validate();
    require_distinct(mu_s, mu_d);
    const Estimates est =
        estimate_controlled(params, std::min(mu_s, mu_d), std::max(mu_s, mu_d), cfg);
    return assemble(params, est, mu_s, observables(params, mu_s));
}

double rate_improved(const ChannelParams& params, double mu_s, double mu_d,
                     const SeriesConfig& cfg) {
    return evaluate_rates(params, mu_s, mu_d, cfg).rate_improved;
}

double rate_conventional(const ChannelParams& params, double mu_s, double mu_d,
                         const SeriesConfig& cfg) {
    return evaluate_rates(params, mu_s, mu_d, cfg).rate_conventional;
}

double rate_limit_decoy_zero(const ChannelParams& params, double mu_s) {
    params.validate();
    const Estimates lim = limits_mu1_zero(params);
    bool clamped = false;
    const double key = single_photon_key(lim.a_hat, lim.b_hat, clamped);
    return mu_s * std::exp(-mu_s) * key + std::exp(-mu_s) * params.p0
         - leakage(params, observables(params, mu_s));
}

RateReport rate_e_point(const ChannelParams& params, double mu_s_hyp, double mu_d_hyp,
                        double mu_s_true, double mu_d_true) {
    params.validate();
    require_distinct(mu_s_hyp, mu_d_hyp);
    const PulseObservables signal = observables(params, mu_s_true);
    const PulseObservables decoy = observables(params, mu_d_true);
    const Estimates est = estimate_from_observables(decoy, signal, mu_d_hyp, mu_s_hyp, params.p0);
    return assemble(params, est, mu_s_hyp, signal);
}

WorstCase rate_e_worst_case(const ChannelParams& params, const IntensitySpec& spec,
                            const OptimizeConfig& cfg) {
    params.validate();
    spec.validate();
    const double true_s = spec.mu_s_nominal;
    const double true_d = spec.mu_d_nominal;

    WorstCase out;
    if (spec.epsilon == 0.0) {
        const RateReport r = rate_e_point(params, true_s, true_d, true_s, true_d);
        out.rate_improved = r.rate_improved;
        out.rate_conventional = r.rate_conventional;
        out.mu_s_improved = out.mu_s_conventional = true_s;
        out.mu_d_improved = out.mu_d_conventional = true_d;
        return out;
    }

    const Rectangle rect{spec.mu_s_lo(), spec.mu_s_hi(), spec.mu_d_lo(), spec.mu_d_hi()};
    const Optimum improved = minimize_rectangle(
        [&](double mu_s, double mu_d) {
            return rate_e_point(params, mu_s, mu_d, true_s, true_d).rate_improved;
        },
        rect, cfg);
    const Optimum conventional = minimize_rectangle(
        [&](double mu_s, double mu_d) {
            return rate_e_point(params, mu_s, mu_d, true_s, true_d).rate_conventional;
        },
        rect, cfg);

    out.rate_improved = improved.value;
    out.mu_s_improved = improved.argument[0];
    out.mu_d_improved = improved.argument[1];
    out.location_improved = improved.location;
    out.rate_conventional = conventional.value;
    out.mu_s_conventional = conventional.argument[0];
    out.mu_d_conventional = conventional.argument[1];
    out.location_conventional = conventional.location;
    return out;
}

double limit_condition_rhs(const ChannelParams& params, double epsilon) {
    if (params.p0 == 0.0)
        return 1.0;
    const double a_eff = params.alpha / (1.0 + epsilon);
    bool clamped = false;
    const double key = single_photon_key(a_eff + params.p0,
                                         params.s * a_eff + params.p0 / 2.0, clamped);
    if (!(key > 0.0))
        return -std::numeric_limits<double>::infinity();
    return 1.0 - params.p0 / key;
}

bool limit_condition_holds(const ChannelParams& params, double mu_s_nominal, double epsilon) {
    return mu_s_nominal * (1.0 + epsilon) <= limit_condition_rhs(params, epsilon);
}

double rate_e_limit(const ChannelParams& params, double mu_s_nominal, double epsilon) {
    params.validate();
    if (!(mu_s_nominal > 0.0))
        throw DomainError("signal intensity must be positive");
    if (!(epsilon >= 0.0 && epsilon < 1.0))
        throw DomainError("epsilon must lie in [0, 1)");
    const double rhs = limit_condition_rhs(params, epsilon);
    if (!(mu_s_nominal * (1.0 + epsilon) <= rhs)) {
        std::ostringstream msg;
        msg << "signal intensity condition violated: mu_s (1 + eps) = "
            << mu_s_nominal * (1.0 + epsilon) << " exceeds the bound " << rhs;
        throw PreconditionError(msg.str(), rhs);
    }

    const double a_eff = params.alpha / (1.0 + epsilon);
    bool clamped = false;
    const double key = single_photon_key(a_eff + params.p0,
                                         params.s * a_eff + params.p0 / 2.0, clamped);
    const double mu = (1.0 - epsilon) * mu_s_nominal;
    return mu * std::exp(-mu) * key + std::exp(-mu) * params.p0
         - leakage(params, observables(params, mu_s_nominal));
}

} // namespace decoy
