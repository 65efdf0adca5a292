#pragma once

#include "decoy/model.hpp"

#include <functional>
#include <string>
#include <vector>

namespace decoy {

struct OptimizeConfig {
    int grid_points_per_axis = 16;
    double refine_tolerance = 1e-10;
    double bracket_lo = 1e-3;
    double bracket_hi = 1.0;
    bool use_corner_heuristic = true;

    void validate() const;
};

/// Where the optimum was found relative to the search domain.
enum class Location { interior, boundary, corner };

std::string to_string(Location where);

struct Optimum {
    std::vector<double> argument;
    double value = 0.0;
    Location location = Location::interior;
    /// Set by optimal_signal_intensity when the best rate was not positive
    /// and the reported value was clamped to zero.
    bool clamped = false;
};

/// Axis-aligned box [x_lo, x_hi] x [y_lo, y_hi]. Zero-width sides are allowed.
struct Rectangle {
    double x_lo = 0.0;
    double x_hi = 0.0;
    double y_lo = 0.0;
    double y_hi = 0.0;

    bool crosses_diagonal() const;
};

enum class Spacing { linear, logarithmic };

/// Values closer than this are ties; ties go to the smaller argument.
inline constexpr double kTieTolerance = 1e-12;

/// Minimum of objective(x, y) over the rectangle: a coarse grid scan, then
/// alternating golden-section refinement around the best grid point, plus the
/// four corners when cfg.use_corner_heuristic is set. Throws DomainError if the
/// rectangle is inverted or touches the line x == y.
Optimum minimize_rectangle(const std::function<double(double, double)>& objective,
                           const Rectangle& rect, const OptimizeConfig& cfg = {});

/// Maximum of objective(x) on [lo, hi]: coarse scan with 4 * grid points,
/// golden-section refinement between the neighbours of the best scan point.
Optimum maximize_scalar(const std::function<double(double)>& objective, double lo, double hi,
                        const OptimizeConfig& cfg = {}, Spacing spacing = Spacing::linear);

/// Signal intensity maximizing the vanishing-decoy worst-case rate for the
/// given epsilon. The upper bracket is shrunk so the closed form stays valid;
/// throws PreconditionError if nothing of the bracket remains. The objective is
/// max(rate, 0), and `clamped` is set when the best raw rate is not positive.
Optimum optimal_signal_intensity(const ChannelParams& params, double epsilon,
                                 const OptimizeConfig& cfg = {});

} // namespace decoy
