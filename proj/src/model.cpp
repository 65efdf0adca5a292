#include "decoy/model.hpp"

#include "decoy/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace decoy {

void ChannelParams::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw DomainError("alpha must lie in [0, 1], got " + std::to_string(alpha));
    if (!(s >= 0.0 && s < 0.5))
        throw DomainError("s must lie in [0, 1/2), got " + std::to_string(s));
    if (!(p0 >= 0.0 && p0 < 1.0))
        throw DomainError("p0 must lie in [0, 1), got " + std::to_string(p0));
    if (!(eta_ec >= 1.0) || !std::isfinite(eta_ec))
        throw DomainError("eta_ec must be >= 1, got " + std::to_string(eta_ec));
}

bool IntensitySpec::identifiable() const {
    const double lo = std::min(mu_s_nominal, mu_d_nominal);
    const double hi = std::max(mu_s_nominal, mu_d_nominal);
    return (1.0 + epsilon) * lo < (1.0 - epsilon) * hi;
}

void IntensitySpec::validate() const {
    if (!(mu_s_nominal > 0.0) || !std::isfinite(mu_s_nominal))
        throw DomainError("signal intensity must be positive");
    if (!(mu_d_nominal > 0.0) || !std::isfinite(mu_d_nominal))
        throw DomainError("decoy intensity must be positive");
    if (!(epsilon >= 0.0 && epsilon < 1.0))
        throw DomainError("epsilon must lie in [0, 1)");
    if (!identifiable())
        throw DomainError("signal and decoy intensity intervals overlap: "
                          "the decoy method does not work");
}

double click_probability(const ChannelParams& params, double mu) {
    return -std::expm1(-params.alpha * mu);
}

PulseObservables observables(const ChannelParams& params, double mu) {
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw DomainError("pulse intensity must be positive, got " + std::to_string(mu));

    const double click = click_probability(params, mu);
    const double p = click + params.p0;
    const double err = params.s * click + params.p0 / 2.0;
    const double e = p > 0.0 ? err / p : 0.5;
    return PulseObservables{p, p, e, e};
}

} // namespace decoy
