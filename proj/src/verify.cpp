#include "decoy/verify.hpp"

#include "decoy/error.hpp"
#include "decoy/kernels.hpp"
#include "decoy/rates.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <sstream>

namespace decoy::verify {

namespace {

std::string describe(std::initializer_list<std::pair<const char*, double>> fields) {
    std::ostringstream out;
    out.precision(10);
    bool first = true;
    for (const auto& [key, value] : fields) {
        out << (first ? "" : ", ") << key << "=" << value;
        first = false;
    }
    return out.str();
}

// Accumulates the largest violation of a family of inequalities.
class Tracker {
public:
    Tracker(std::string name, double tolerance) {
        result_.name = std::move(name);
        result_.tolerance = tolerance;
    }

    template <class Witness>
    void record(double violation, Witness&& witness) {
        if (std::isnan(violation))
            violation = std::numeric_limits<double>::infinity();
        if (violation > result_.worst_violation) {
            result_.worst_violation = violation;
            result_.witness = witness();
        }
    }

    /// Expects next >= prev when increasing, next <= prev otherwise.
    template <class Witness>
    void step(double prev, double next, bool increasing, Witness&& witness) {
        record(increasing ? prev - next : next - prev, std::forward<Witness>(witness));
    }

    CheckResult finish(std::string note = {}) {
        result_.passed = result_.worst_violation <= result_.tolerance;
        result_.note = std::move(note);
        return result_;
    }

private:
    CheckResult result_;
};

CheckResult skipped(std::string name, double tolerance, std::string note) {
    CheckResult r;
    r.name = std::move(name);
    r.tolerance = tolerance;
    r.skipped = true;
    r.note = std::move(note);
    return r;
}

double key_or_zero(double yield, double phase_errors) {
    bool clamped = false;
    return single_photon_key(yield, phase_errors, clamped);
}

double one_minus_exp(double x) { return -std::expm1(-x); }

} // namespace

RatePairFn controlled_rates(const ChannelParams& params) {
    return [params](double mu_s, double mu_d) {
        const RateReport r = evaluate_rates(params, mu_s, mu_d);
        return std::pair{r.rate_improved, r.rate_conventional};
    };
}

EstimateFn controlled_estimates(const ChannelParams& params) {
    return [params](double mu1, double mu2) { return estimate_controlled(params, mu1, mu2); };
}

TrueEstimateFn mismatched_estimates(const ChannelParams& params, double mu_s_hyp, double mu_d_hyp) {
    return [=](double mu_s_true, double mu_d_true) {
        return estimate_from_observables(observables(params, mu_d_true),
                                         observables(params, mu_s_true), mu_d_hyp, mu_s_hyp,
                                         params.p0);
    };
}

RatePairFn hypothesis_rates(const ChannelParams& params, const IntensitySpec& spec) {
    return [params, spec](double mu_s, double mu_d) {
        const RateReport r =
            rate_e_point(params, mu_s, mu_d, spec.mu_s_nominal, spec.mu_d_nominal);
        return std::pair{r.rate_improved, r.rate_conventional};
    };
}

CheckResult check_theorem1(const ChannelParams& params, double mu_s,
                           const std::vector<double>& mu_d_grid, RatePairFn rates) {
    if (!rates)
        rates = controlled_rates(params);
    if (!std::is_sorted(mu_d_grid.begin(), mu_d_grid.end()))
        throw DomainError("decoy grid must be ascending");

    Tracker t("theorem1_decoy_monotonicity", kMonotoneTolerance);
    bool have_prev = false;
    double prev_mu = 0.0;
    std::pair<double, double> prev{};
    for (double mu_d : mu_d_grid) {
        if (mu_d == mu_s)
            continue;
        const auto cur = rates(mu_s, mu_d);
        if (have_prev) {
            const auto where = [&] { return describe({{"mu_s", mu_s}, {"mu_d_prev", prev_mu}, {"mu_d", mu_d}}); };
            t.step(prev.first, cur.first, false, where);
            t.step(prev.second, cur.second, false, where);
        }
        prev = cur;
        prev_mu = mu_d;
        have_prev = true;
    }
    return t.finish("R and R~ nonincreasing in the decoy intensity");
}

CheckResult check_lemma1(const ChannelParams& params, const std::vector<double>& grid,
                         EstimateFn estimates) {
    if (!estimates)
        estimates = controlled_estimates(params);
    if (!std::is_sorted(grid.begin(), grid.end()))
        throw DomainError("grid must be ascending");

    const std::size_t n = grid.size();
    // Key terms on the upper triangle i < j; NaN marks ratio >= 1/2.
    std::vector<double> improved(n * n, std::nan(""));
    std::vector<double> conventional(n * n, std::nan(""));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Estimates e = estimates(grid[i], grid[j]);
            const double yield = e.c_hat + e.b_hat;
            if (yield > 0.0 && e.b_hat / yield < 0.5)
                improved[i * n + j] = yield * (1.0 - binary_entropy(e.b_hat / yield));
            if (e.a_hat > 0.0 && e.b_hat / e.a_hat < 0.5)
                conventional[i * n + j] = e.a_hat * (1.0 - binary_entropy(e.b_hat / e.a_hat));
        }
    }

    Tracker t("lemma1_key_term_monotonicity", kMonotoneTolerance);
    const auto compare = [&](std::size_t from, std::size_t to, std::size_t i, std::size_t j) {
        for (const auto* table : {&improved, &conventional}) {
            const double a = (*table)[from];
            const double b = (*table)[to];
            if (std::isnan(a) || std::isnan(b))
                continue;
            t.step(a, b, false, [&] { return describe({{"mu1", grid[i]}, {"mu2", grid[j]}}); });
        }
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j + 1 < n)
                compare(i * n + j, i * n + j + 1, i, j + 1); // along mu2
            if (i + 1 < j)
                compare(i * n + j, (i + 1) * n + j, i + 1, j); // along mu1
        }
    }
    return t.finish("key terms nonincreasing in mu1 and mu2 where b/(c+b), b/a < 1/2");
}

CheckResult check_lemma2(const ChannelParams& params, double mu1, double mu2, double tolerance,
                         EstimateFn estimates) {
    if (!estimates)
        estimates = controlled_estimates(params);
    const Estimates got = estimates(mu1, mu2);
    const Estimates lim = limits_mu1_zero(params);
    Tracker t("lemma2_vanishing_decoy_limits", tolerance);
    const auto where = [&] { return describe({{"mu1", mu1}, {"mu2", mu2}}); };
    t.record(std::abs(got.a_hat - lim.a_hat), where);
    t.record(std::abs(got.b_hat - lim.b_hat), where);
    t.record(std::abs(got.c_hat - lim.c_hat), where);
    return t.finish("estimates at small mu1 against their mu1 -> 0 limits");
}

std::vector<CheckResult> check_lemma3(const ChannelParams& params, double mu_s_hyp,
                                      double mu_d_hyp, const std::vector<double>& true_s_grid,
                                      const std::vector<double>& true_d_grid,
                                      TrueEstimateFn estimates) {
    static const char* const names[7] = {
        "lemma3_i_a_hat",        "lemma3_ii_b_hat",         "lemma3_iii_c_hat",
        "lemma3_iv_ratio_b_a",   "lemma3_v_ratio_b_cb",     "lemma3_vi_conventional_key",
        "lemma3_vii_improved_key",
    };
    if (!(mu_d_hyp < mu_s_hyp)) {
        std::vector<CheckResult> out;
        for (const char* name : names)
            out.push_back(skipped(name, kMonotoneTolerance, "requires mu_d < mu_s"));
        return out;
    }
    if (!estimates)
        estimates = mismatched_estimates(params, mu_s_hyp, mu_d_hyp);

    const std::size_t ns = true_s_grid.size();
    const std::size_t nd = true_d_grid.size();
    const auto table = kernels::map_parallel(ns * nd, [&](std::size_t k) {
        return estimates(true_s_grid[k / nd], true_d_grid[k % nd]);
    });

    const auto nan = std::nan("");
    // Per item: quantity, whether it must increase in mu_d, and whether it has
    // a (decreasing) mu_s claim.
    struct Item {
        std::function<double(const Estimates&)> value;
        bool increasing_in_d;
        bool decreasing_in_s;
    };
    const Item items[7] = {
        {[](const Estimates& e) { return e.a_hat; }, true, true},
        {[](const Estimates& e) { return e.b_hat; }, true, false},
        {[](const Estimates& e) { return e.c_hat; }, true, true},
        {[nan](const Estimates& e) { return e.a_hat > 0.0 ? e.b_hat / e.a_hat : nan; }, false, false},
        {[nan](const Estimates& e) {
             const double y = e.c_hat + e.b_hat;
             return y > 0.0 ? e.b_hat / y : nan;
         },
         false, false},
        {[](const Estimates& e) { return key_or_zero(e.a_hat, e.b_hat); }, true, true},
        {[](const Estimates& e) { return key_or_zero(e.c_hat + e.b_hat, e.b_hat); }, true, true},
    };

    std::vector<CheckResult> out;
    for (int item = 0; item < 7; ++item) {
        Tracker t(names[item], kMonotoneTolerance);
        const Item& spec = items[item];
        for (std::size_t i = 0; i < ns; ++i) {
            for (std::size_t j = 0; j < nd; ++j) {
                const double v = spec.value(table[i * nd + j]);
                if (std::isnan(v))
                    continue;
                if (j + 1 < nd) {
                    const double w = spec.value(table[i * nd + j + 1]);
                    if (!std::isnan(w))
                        t.step(v, w, spec.increasing_in_d, [&] {
                            return describe({{"true_s", true_s_grid[i]}, {"true_d", true_d_grid[j + 1]}});
                        });
                }
                if (spec.decreasing_in_s && i + 1 < ns) {
                    const double w = spec.value(table[(i + 1) * nd + j]);
                    if (!std::isnan(w))
                        t.step(v, w, false, [&] {
                            return describe({{"true_s", true_s_grid[i + 1]}, {"true_d", true_d_grid[j]}});
                        });
                }
            }
        }
        out.push_back(t.finish());
    }
    return out;
}

std::vector<CheckResult> check_lemma4(const ChannelParams& params, double epsilon,
                                      double mu_s_nominal, const std::vector<double>& mu_d_grid) {
    const double a_eff = params.alpha / (1.0 + epsilon);
    const double p0 = params.p0;
    const double s = params.s;
    const double mu_s = (1.0 - epsilon) * mu_s_nominal;
    const double signal_click = one_minus_exp(params.alpha * mu_s_nominal);

    const auto values = [&](double mu_d) {
        const double decoy_click = one_minus_exp(a_eff * mu_d);
        return std::array<double, 3>{
            f_a(decoy_click + p0, signal_click + p0, mu_d, mu_s, p0),
            f_b(s * decoy_click + p0 / 2.0, mu_d, p0),
            f_c((1.0 - s) * decoy_click + p0 / 2.0, (1.0 - s) * signal_click + p0 / 2.0, mu_d,
                mu_s, p0),
        };
    };
    const std::array<double, 3> limits{a_eff + p0, s * a_eff + p0 / 2.0,
                                       (1.0 - s) * a_eff + p0 / 2.0};

    Tracker mono("lemma4_scaled_estimators_monotone", kMonotoneTolerance);
    Tracker lim("lemma4_scaled_estimators_limit", 1e-6);
    std::array<double, 3> prev{};
    bool have_prev = false;
    for (double mu_d : mu_d_grid) {
        if (!(mu_d < mu_s))
            continue;
        const auto cur = values(mu_d);
        const auto where = [&] { return describe({{"mu_d", mu_d}, {"mu_s", mu_s}}); };
        for (int k = 0; k < 3; ++k) {
            const bool increasing = k == 1;
            mono.record(increasing ? limits[k] - cur[k] : cur[k] - limits[k], where);
            if (have_prev)
                mono.step(prev[k], cur[k], increasing, where);
            else
                lim.record(std::abs(cur[k] - limits[k]), where);
        }
        prev = cur;
        have_prev = true;
    }
    return {mono.finish("a, c nonincreasing and b nondecreasing in mu_d, each bounded by its limit"),
            lim.finish("smallest grid point against the closed-form limit")};
}

CheckResult check_theorem2(const ChannelParams& params, double mu_s_nominal, double epsilon,
                           const OptimizeConfig& cfg, WorstCaseFn worst) {
    const double tolerance = 1e-5;
    if (!limit_condition_holds(params, mu_s_nominal, epsilon)) {
        std::ostringstream note;
        note << "precondition not met: mu_s (1 + eps) = " << mu_s_nominal * (1.0 + epsilon)
             << " > " << limit_condition_rhs(params, epsilon);
        return skipped("theorem2_worst_case_sup", tolerance, note.str());
    }
    if (!worst) {
        worst = [&](double mu_d_nominal) {
            const WorstCase w =
                rate_e_worst_case(params, IntensitySpec{mu_s_nominal, mu_d_nominal, epsilon}, cfg);
            return std::pair{w.rate_improved, w.rate_conventional};
        };
    }

    const double limit = rate_e_limit(params, mu_s_nominal, epsilon);
    const double lo = 1e-7;
    const double hi = 0.9 * (1.0 - epsilon) / (1.0 + epsilon) * mu_s_nominal;
    const Optimum sup_r =
        maximize_scalar([&](double d) { return worst(d).first; }, lo, hi, cfg, Spacing::logarithmic);
    const Optimum sup_rt =
        maximize_scalar([&](double d) { return worst(d).second; }, lo, hi, cfg, Spacing::logarithmic);

    Tracker t("theorem2_worst_case_sup", tolerance);
    t.record(std::abs(sup_r.value - limit), [&] {
        return describe({{"mu_d_nominal", sup_r.argument[0]}, {"sup_R_e", sup_r.value}, {"limit", limit}});
    });
    t.record(std::abs(sup_rt.value - limit), [&] {
        return describe({{"mu_d_nominal", sup_rt.argument[0]}, {"sup_R~_e", sup_rt.value}, {"limit", limit}});
    });
    return t.finish("sup over the nominal decoy intensity equals the closed-form limit");
}

std::vector<CheckResult> check_corner_minimizer(const ChannelParams& params,
                                                const IntensitySpec& spec, int points,
                                                double tolerance, RatePairFn rates) {
    spec.validate();
    if (!rates)
        rates = hypothesis_rates(params, spec);

    const bool decoy_below = spec.mu_d_nominal < spec.mu_s_nominal;
    const double corner_s = decoy_below ? spec.mu_s_lo() : spec.mu_s_hi();
    const double corner_d = decoy_below ? spec.mu_d_hi() : spec.mu_d_lo();
    const auto corner = rates(corner_s, corner_d);

    const auto n = static_cast<std::size_t>(std::max(points, 1));
    const auto xs = kernels::linspace(spec.mu_s_lo(), spec.mu_s_hi(), spec.epsilon > 0.0 ? n : 1);
    const auto ys = kernels::linspace(spec.mu_d_lo(), spec.mu_d_hi(), spec.epsilon > 0.0 ? n : 1);
    const auto grid = kernels::map_parallel(xs.size() * ys.size(), [&](std::size_t k) {
        return rates(xs[k / ys.size()], ys[k % ys.size()]);
    });

    Tracker improved("corner_minimizer_R_e", tolerance);
    Tracker conventional("corner_minimizer_R~_e", tolerance);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto where = [&] {
            return describe({{"mu_s", xs[k / ys.size()]}, {"mu_d", ys[k % ys.size()]}});
        };
        improved.record(corner.first - grid[k].first, where);
        conventional.record(corner.second - grid[k].second, where);
    }
    const std::string note = "dense grid against corner " +
                             describe({{"mu_s", corner_s}, {"mu_d", corner_d}});
    return {improved.finish(note), conventional.finish(note)};
}

std::vector<CheckResult> run_all(const ChannelParams& params, const IntensitySpec& spec) {
    params.validate();
    spec.validate();
    const double mu_s = spec.mu_s_nominal;
    const double mu_d = spec.mu_d_nominal;
    std::vector<CheckResult> out;

    auto decoy_grid = kernels::logspace(1e-4, 0.9 * mu_s, 80);
    const auto above = kernels::logspace(1.1 * mu_s, 2.0 * mu_s, 20);
    decoy_grid.insert(decoy_grid.end(), above.begin(), above.end());
    out.push_back(check_theorem1(params, mu_s, decoy_grid));

    out.push_back(check_lemma1(params, kernels::logspace(1e-3, 1.0, 30)));
    out.push_back(check_lemma2(params));

    const auto lemma3 = check_lemma3(params, mu_s, mu_d, kernels::linspace(0.8 * mu_s, 1.2 * mu_s, 21),
                                     kernels::linspace(0.5 * mu_d, 1.5 * mu_d, 21));
    out.insert(out.end(), lemma3.begin(), lemma3.end());

    auto lemma4_grid = kernels::logspace(1e-6, 0.9 * (1.0 - spec.epsilon) * mu_s, 60);
    lemma4_grid.insert(lemma4_grid.begin(), 1e-8);
    const auto lemma4 = check_lemma4(params, spec.epsilon, mu_s, lemma4_grid);
    out.insert(out.end(), lemma4.begin(), lemma4.end());

    out.push_back(check_theorem2(params, mu_s, spec.epsilon));

    const auto corner = check_corner_minimizer(params, spec);
    out.insert(out.end(), corner.begin(), corner.end());
    return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const CheckResult& r) { return r.passed; });
}

} // namespace decoy::verify
