#pragma once

#include "decoy/model.hpp"
#include "decoy/verify.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace decoy::cli {

/// Invalid configuration; reported with exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SweepSpec {
    std::string axis = "mu_d"; ///< mu_s, mu_d or epsilon
    double lo = 1e-3;
    double hi = 0.4;
    int points = 10;
    bool log = false;
};

/// Everything a subcommand needs. The channel defaults are an arbitrary
/// illustrative set, not measured values.
struct RunConfig {
    ChannelParams channel{};
    IntensitySpec intensities{};
    SweepSpec sweep{};
    std::vector<double> epsilons{0.0, 0.01, 0.03, 0.05, 0.10};
    double bracket_lo = 1e-3;
    double bracket_hi = 1.0;
    std::string format; ///< csv, json, text; empty picks the command default
    std::string out;    ///< output path; empty writes to stdout

    /// Throws ConfigError describing the first invalid field.
    void validate() const;
};

nlohmann::ordered_json config_to_json(const RunConfig& cfg);
/// Overlays the keys of `doc` onto `base`. Unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& doc, RunConfig base = {});

/// 17 significant digits, "." decimal separator, independent of the locale.
std::string format_number(double value);

struct SweepRow {
    double mu_s = 0.0;
    double mu_d = 0.0;
    double epsilon = 0.0;
    double rate = 0.0;
    double rate_tilde = 0.0;
    Estimates estimates;
    double ratio_improved = 0.0;
    double ratio_conventional = 0.0;
    bool clamped = false;
};

/// One row per sweep point, in axis order. With epsilon > 0 the rates are the
/// worst case over the hypothesis rectangle and the estimates are those at the
/// minimizer of R_e.
std::vector<SweepRow> sweep_rows_serial(const RunConfig& cfg);
std::vector<SweepRow> sweep_rows_parallel(const RunConfig& cfg);

inline constexpr const char* kSweepHeader =
    "mu_s,mu_d,epsilon,R,R_tilde,a_hat,b_hat,c_hat,ratio_improved,ratio_conventional,clamped";

std::string cmd_rate(const RunConfig& cfg);
std::string cmd_sweep(const RunConfig& cfg);
std::string cmd_worstcase(const RunConfig& cfg);
std::string cmd_optimize(const RunConfig& cfg);

struct VerifyOutcome {
    std::vector<verify::CheckResult> results;
    bool passed = true;
    std::string rendered;
};
VerifyOutcome cmd_verify(const RunConfig& cfg);

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitVerifyFailed = 2;

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace decoy::cli
