#include "decoy/cli.hpp"

#include "decoy/error.hpp"
#include "decoy/kernels.hpp"
#include "decoy/optimize.hpp"
#include "decoy/rates.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace decoy::cli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// JSON has no NaN; undefined ratios are written as null.
ordered_json number(double v) {
    if (std::isfinite(v))
        return v;
    return nullptr;
}

ordered_json params_json(const RunConfig& cfg) {
    return ordered_json{{"alpha", cfg.channel.alpha},
                        {"s", cfg.channel.s},
                        {"p0", cfg.channel.p0},
                        {"eta_ec", cfg.channel.eta_ec}};
}

std::string dump(const ordered_json& doc) { return doc.dump(2) + "\n"; }

std::vector<double> sweep_axis(const SweepSpec& sweep) {
    const auto n = static_cast<std::size_t>(sweep.points);
    return sweep.log ? kernels::logspace(sweep.lo, sweep.hi, n)
                     : kernels::linspace(sweep.lo, sweep.hi, n);
}

SweepRow sweep_row(const RunConfig& cfg, double value) {
    SweepRow row;
    row.mu_s = cfg.intensities.mu_s_nominal;
    row.mu_d = cfg.intensities.mu_d_nominal;
    row.epsilon = cfg.intensities.epsilon;
    if (cfg.sweep.axis == "mu_s")
        row.mu_s = value;
    else if (cfg.sweep.axis == "mu_d")
        row.mu_d = value;
    else
        row.epsilon = value;

    RateReport report;
    if (row.epsilon == 0.0) {
        report = evaluate_rates(cfg.channel, row.mu_s, row.mu_d);
        row.rate = report.rate_improved;
        row.rate_tilde = report.rate_conventional;
    } else {
        const WorstCase worst =
            rate_e_worst_case(cfg.channel, IntensitySpec{row.mu_s, row.mu_d, row.epsilon});
        report = rate_e_point(cfg.channel, worst.mu_s_improved, worst.mu_d_improved, row.mu_s,
                              row.mu_d);
        row.rate = worst.rate_improved;
        row.rate_tilde = worst.rate_conventional;
    }
    row.estimates = report.estimates;
    row.ratio_improved = report.phase_error_ratio;
    row.ratio_conventional = report.phase_error_ratio_conventional;
    row.clamped = report.sifting_note();
    return row;
}

template <class T>
void read_key(const json& doc, const char* key, T& target) {
    if (auto it = doc.find(key); it != doc.end()) {
        try {
            target = it->get<T>();
        } catch (const json::exception&) {
            throw ConfigError(std::string("config key '") + key + "' has the wrong type");
        }
    }
}

OptimizeConfig optimize_config(const RunConfig& cfg) {
    OptimizeConfig opt;
    opt.bracket_lo = cfg.bracket_lo;
    opt.bracket_hi = cfg.bracket_hi;
    return opt;
}

std::string verify_text(const std::vector<verify::CheckResult>& results) {
    std::ostringstream out;
    out.imbue(std::locale::classic());
    for (const auto& r : results) {
        out << (r.skipped ? "[SKIP] " : r.passed ? "[PASS] " : "[FAIL] ") << r.name
            << "  worst=" << format_number(r.worst_violation)
            << "  tol=" << format_number(r.tolerance);
        if (!r.witness.empty())
            out << "  at " << r.witness;
        if (!r.note.empty())
            out << "  (" << r.note << ")";
        out << "\n";
    }
    out << (verify::all_passed(results) ? "all checks passed\n" : "some checks FAILED\n");
    return out.str();
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.out.empty()) {
        out << text;
        return;
    }
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file)
        throw ConfigError("cannot open output file " + cfg.out);
    file << text;
}

} // namespace

void RunConfig::validate() const {
    try {
        channel.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (!(intensities.mu_s_nominal > 0.0) || !(intensities.mu_d_nominal > 0.0))
        throw ConfigError("intensities must be positive");
    if (!(intensities.epsilon >= 0.0 && intensities.epsilon < 1.0))
        throw ConfigError("epsilon must lie in [0, 1)");
    if (sweep.axis != "mu_s" && sweep.axis != "mu_d" && sweep.axis != "epsilon")
        throw ConfigError("sweep axis must be one of mu_s, mu_d, epsilon");
    if (sweep.points < 1)
        throw ConfigError("sweep needs at least one point");
    if (!std::isfinite(sweep.lo) || !std::isfinite(sweep.hi) || sweep.lo > sweep.hi)
        throw ConfigError("sweep bounds must satisfy lo <= hi");
    if (sweep.points > 1 && sweep.lo == sweep.hi)
        throw ConfigError("sweep with several points needs lo < hi");
    if (sweep.log && !(sweep.lo > 0.0))
        throw ConfigError("logarithmic sweep needs lo > 0");
    if (sweep.axis == "epsilon" && !(sweep.lo >= 0.0 && sweep.hi < 1.0))
        throw ConfigError("epsilon sweep must stay inside [0, 1)");
    if (sweep.axis != "epsilon" && !(sweep.lo > 0.0))
        throw ConfigError("intensity sweep must stay positive");
    for (double eps : epsilons)
        if (!(eps >= 0.0 && eps < 1.0))
            throw ConfigError("epsilons must lie in [0, 1)");
    if (!(bracket_lo > 0.0) || !(bracket_hi > bracket_lo))
        throw ConfigError("bracket must satisfy 0 < bracket_lo < bracket_hi");
    if (!format.empty() && format != "csv" && format != "json" && format != "text")
        throw ConfigError("format must be csv, json or text");
}

ordered_json config_to_json(const RunConfig& cfg) {
    return ordered_json{
        {"alpha", cfg.channel.alpha},
        {"s", cfg.channel.s},
        {"p0", cfg.channel.p0},
        {"eta_ec", cfg.channel.eta_ec},
        {"mu_s", cfg.intensities.mu_s_nominal},
        {"mu_d", cfg.intensities.mu_d_nominal},
        {"epsilon", cfg.intensities.epsilon},
        {"axis", cfg.sweep.axis},
        {"lo", cfg.sweep.lo},
        {"hi", cfg.sweep.hi},
        {"points", cfg.sweep.points},
        {"log", cfg.sweep.log},
        {"epsilons", cfg.epsilons},
        {"bracket_lo", cfg.bracket_lo},
        {"bracket_hi", cfg.bracket_hi},
        {"format", cfg.format},
        {"out", cfg.out},
    };
}

RunConfig config_from_json(const json& doc, RunConfig base) {
    if (!doc.is_object())
        throw ConfigError("config must be a JSON object");
    static const std::vector<std::string> known = {
        "alpha", "s",      "p0",  "eta_ec",   "mu_s",       "mu_d",       "epsilon", "axis", "lo",
        "hi",    "points", "log", "epsilons", "bracket_lo", "bracket_hi", "format",  "out"};
    for (const auto& item : doc.items())
        if (std::find(known.begin(), known.end(), item.key()) == known.end())
            throw ConfigError("unknown config key '" + item.key() + "'");

    read_key(doc, "alpha", base.channel.alpha);
    read_key(doc, "s", base.channel.s);
    read_key(doc, "p0", base.channel.p0);
    read_key(doc, "eta_ec", base.channel.eta_ec);
    read_key(doc, "mu_s", base.intensities.mu_s_nominal);
    read_key(doc, "mu_d", base.intensities.mu_d_nominal);
    read_key(doc, "epsilon", base.intensities.epsilon);
    read_key(doc, "axis", base.sweep.axis);
    read_key(doc, "lo", base.sweep.lo);
    read_key(doc, "hi", base.sweep.hi);
    read_key(doc, "points", base.sweep.points);
    read_key(doc, "log", base.sweep.log);
    read_key(doc, "epsilons", base.epsilons);
    read_key(doc, "bracket_lo", base.bracket_lo);
    read_key(doc, "bracket_hi", base.bracket_hi);
    read_key(doc, "format", base.format);
    read_key(doc, "out", base.out);
    return base;
}

std::string format_number(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::vector<SweepRow> sweep_rows_serial(const RunConfig& cfg) {
    const auto axis = sweep_axis(cfg.sweep);
    return kernels::map_serial(axis.size(), [&](std::size_t i) { return sweep_row(cfg, axis[i]); });
}

std::vector<SweepRow> sweep_rows_parallel(const RunConfig& cfg) {
    const auto axis = sweep_axis(cfg.sweep);
    return kernels::map_parallel(axis.size(), [&](std::size_t i) { return sweep_row(cfg, axis[i]); });
}

std::string cmd_rate(const RunConfig& cfg) {
    cfg.validate();
    const double mu_s = cfg.intensities.mu_s_nominal;
    const double mu_d = cfg.intensities.mu_d_nominal;
    const RateReport r = evaluate_rates(cfg.channel, mu_s, mu_d);
    const PulseObservables signal = observables(cfg.channel, mu_s);
    ordered_json doc{
        {"command", "rate"},
        {"params", params_json(cfg)},
        {"mu_s", mu_s},
        {"mu_d", mu_d},
        {"R", r.rate_improved},
        {"R_tilde", r.rate_conventional},
        {"a_hat", r.estimates.a_hat},
        {"b_hat", r.estimates.b_hat},
        {"c_hat", r.estimates.c_hat},
        {"ratio_improved", number(r.phase_error_ratio)},
        {"ratio_conventional", number(r.phase_error_ratio_conventional)},
        {"clamped_improved", r.clamped_improved},
        {"clamped_conventional", r.clamped_conventional},
        {"p_s", signal.p_plus},
        {"e_s", signal.e_plus},
    };
    return dump(doc);
}

std::string cmd_sweep(const RunConfig& cfg) {
    cfg.validate();
    const auto rows = sweep_rows_parallel(cfg);
    if (cfg.format == "json") {
        ordered_json list = ordered_json::array();
        for (const auto& row : rows) {
            list.push_back(ordered_json{
                {"mu_s", row.mu_s},
                {"mu_d", row.mu_d},
                {"epsilon", row.epsilon},
                {"R", row.rate},
                {"R_tilde", row.rate_tilde},
                {"a_hat", row.estimates.a_hat},
                {"b_hat", row.estimates.b_hat},
                {"c_hat", row.estimates.c_hat},
                {"ratio_improved", number(row.ratio_improved)},
                {"ratio_conventional", number(row.ratio_conventional)},
                {"clamped", row.clamped},
            });
        }
        return dump(ordered_json{{"command", "sweep"}, {"params", params_json(cfg)}, {"rows", list}});
    }

    std::string csv = std::string(kSweepHeader) + "\n";
    for (const auto& row : rows) {
        for (double v : {row.mu_s, row.mu_d, row.epsilon, row.rate, row.rate_tilde,
                         row.estimates.a_hat, row.estimates.b_hat, row.estimates.c_hat,
                         row.ratio_improved, row.ratio_conventional})
            csv += format_number(v) + ",";
        csv += row.clamped ? "1\n" : "0\n";
    }
    return csv;
}

std::string cmd_worstcase(const RunConfig& cfg) {
    cfg.validate();
    const IntensitySpec& spec = cfg.intensities;
    const WorstCase w = rate_e_worst_case(cfg.channel, spec);
    const bool decoy_below = spec.mu_d_nominal < spec.mu_s_nominal;
    const auto minimizer = [](double mu_s, double mu_d, Location where) {
        return ordered_json{{"mu_s", mu_s}, {"mu_d", mu_d}, {"location", to_string(where)}};
    };
    ordered_json doc{
        {"command", "worstcase"},
        {"params", params_json(cfg)},
        {"mu_s_nominal", spec.mu_s_nominal},
        {"mu_d_nominal", spec.mu_d_nominal},
        {"epsilon", spec.epsilon},
        {"R_e", w.rate_improved},
        {"R_tilde_e", w.rate_conventional},
        {"minimizer_improved", minimizer(w.mu_s_improved, w.mu_d_improved, w.location_improved)},
        {"minimizer_conventional",
         minimizer(w.mu_s_conventional, w.mu_d_conventional, w.location_conventional)},
        {"predicted_corner",
         ordered_json{{"mu_s", decoy_below ? spec.mu_s_lo() : spec.mu_s_hi()},
                      {"mu_d", decoy_below ? spec.mu_d_hi() : spec.mu_d_lo()}}},
    };
    return dump(doc);
}

std::string cmd_optimize(const RunConfig& cfg) {
    cfg.validate();
    const OptimizeConfig opt = optimize_config(cfg);
    ordered_json rows = ordered_json::array();
    for (double eps : cfg.epsilons) {
        const Optimum best = optimal_signal_intensity(cfg.channel, eps, opt);
        ordered_json row{
            {"epsilon", eps},
            {"mu_s_opt", best.argument[0]},
            {"R_e_opt", best.value},
            {"location", to_string(best.location)},
            {"clamped", best.clamped},
        };
        if (best.clamped)
            row["note"] = "no positive rate in the bracket; reported as zero";
        rows.push_back(std::move(row));
    }
    return dump(ordered_json{{"command", "optimize"}, {"params", params_json(cfg)}, {"rows", rows}});
}

VerifyOutcome cmd_verify(const RunConfig& cfg) {
    cfg.validate();
    try {
        cfg.intensities.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    VerifyOutcome outcome;
    outcome.results = verify::run_all(cfg.channel, cfg.intensities);
    outcome.passed = verify::all_passed(outcome.results);
    if (cfg.format == "json") {
        ordered_json checks = ordered_json::array();
        for (const auto& r : outcome.results) {
            checks.push_back(ordered_json{
                {"name", r.name},
                {"passed", r.passed},
                {"skipped", r.skipped},
                {"worst_violation", number(r.worst_violation)},
                {"tolerance", r.tolerance},
                {"witness", r.witness},
                {"note", r.note},
            });
        }
        outcome.rendered = dump(ordered_json{{"command", "verify"},
                                             {"params", params_json(cfg)},
                                             {"passed", outcome.passed},
                                             {"checks", checks}});
    } else {
        outcome.rendered = verify_text(outcome.results);
    }
    return outcome;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Asymptotic key rates for one-decoy-plus-vacuum BB84"};
    app.require_subcommand(0, 1);

    std::string config_path;
    double alpha = 0, s = 0, p0 = 0, eta = 0, mu_s = 0, mu_d = 0, epsilon = 0, lo = 0, hi = 0;
    int points = 0;
    std::string axis, format, out_path;
    bool log_scale = false;
    bool dump_config = false;

    app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    auto* o_alpha = app.add_option("--alpha", alpha, "total transmission");
    auto* o_s = app.add_option("--s", s, "intrinsic error fraction");
    auto* o_p0 = app.add_option("--p0", p0, "dark count rate");
    auto* o_eta = app.add_option("--eta", eta, "error-correction efficiency");
    auto* o_mu_s = app.add_option("--mu-s", mu_s, "signal intensity");
    auto* o_mu_d = app.add_option("--mu-d", mu_d, "decoy intensity");
    auto* o_eps = app.add_option("--epsilon", epsilon, "relative intensity uncertainty");
    auto* o_axis = app.add_option("--axis", axis, "sweep axis: mu_s, mu_d or epsilon");
    auto* o_lo = app.add_option("--lo", lo, "sweep lower bound");
    auto* o_hi = app.add_option("--hi", hi, "sweep upper bound");
    auto* o_points = app.add_option("--points", points, "sweep point count");
    auto* o_log = app.add_flag("--log", log_scale, "logarithmic sweep spacing");
    auto* o_out = app.add_option("--out", out_path, "output file");
    auto* o_format = app.add_option("--format", format, "csv, json or text");
    app.add_flag("--dump-config", dump_config, "print the effective config as JSON and exit");

    auto* c_rate = app.add_subcommand("rate", "R and R~ at one intensity pair");
    auto* c_sweep = app.add_subcommand("sweep", "CSV of rates along one axis");
    auto* c_worst = app.add_subcommand("worstcase", "worst case over uncertain intensities");
    auto* c_opt = app.add_subcommand("optimize", "optimal signal intensity per epsilon");
    auto* c_verify = app.add_subcommand("verify", "numerical checks of the monotonicity results");
    for (auto* sub : {c_rate, c_sweep, c_worst, c_opt, c_verify})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            json doc;
            try {
                doc = json::parse(in);
            } catch (const json::exception& e) {
                throw ConfigError("cannot parse " + config_path + ": " + e.what());
            }
            cfg = config_from_json(doc, cfg);
        }
        if (o_alpha->count()) cfg.channel.alpha = alpha;
        if (o_s->count()) cfg.channel.s = s;
        if (o_p0->count()) cfg.channel.p0 = p0;
        if (o_eta->count()) cfg.channel.eta_ec = eta;
        if (o_mu_s->count()) cfg.intensities.mu_s_nominal = mu_s;
        if (o_mu_d->count()) cfg.intensities.mu_d_nominal = mu_d;
        if (o_eps->count()) cfg.intensities.epsilon = epsilon;
        if (o_axis->count()) cfg.sweep.axis = axis;
        if (o_lo->count()) cfg.sweep.lo = lo;
        if (o_hi->count()) cfg.sweep.hi = hi;
        if (o_points->count()) cfg.sweep.points = points;
        if (o_log->count()) cfg.sweep.log = log_scale;
        if (o_out->count()) cfg.out = out_path;
        if (o_format->count()) cfg.format = format;

        cfg.validate();
        if (dump_config) {
            RunConfig printable = cfg;
            printable.out.clear();
            const std::string text = dump(config_to_json(cfg));
            emit(printable, text, out);
            return kExitOk;
        }

        if (c_rate->parsed()) {
            emit(cfg, cmd_rate(cfg), out);
        } else if (c_sweep->parsed()) {
            emit(cfg, cmd_sweep(cfg), out);
        } else if (c_worst->parsed()) {
            emit(cfg, cmd_worstcase(cfg), out);
        } else if (c_opt->parsed()) {
            emit(cfg, cmd_optimize(cfg), out);
        } else if (c_verify->parsed()) {
            const VerifyOutcome outcome = cmd_verify(cfg);
            emit(cfg, outcome.rendered, out);
            return outcome.passed ? kExitOk : kExitVerifyFailed;
        } else {
            err << app.help();
            return kExitConfigError;
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
    } catch (const AccuracyError& e) {
        err << "error: " << e.what() << "\n";
    }
    return kExitConfigError;
}

} // namespace decoy::cli
