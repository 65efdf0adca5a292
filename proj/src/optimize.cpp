#include "decoy/optimize.hpp"

#include "decoy/error.hpp"
#include "decoy/kernels.hpp"
#include "decoy/rates.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace decoy {

namespace {

struct Sample {
    double x = 0.0;
    double y = 0.0;
    double value = 0.0;
};

// Strict improvement, or a tie won by the smaller intensity.
bool better(const Sample& a, const Sample& b) {
    if (a.value < b.value - kTieTolerance)
        return true;
    if (a.value > b.value + kTieTolerance)
        return false;
    return a.x < b.x || (a.x == b.x && a.y < b.y);
}

constexpr double kInvPhi = 0.6180339887498948482;

// Golden-section minimization of f on [a, b]. Returns the best point seen,
// endpoints included, as Sample{x, 0, f(x)}.
template <class F>
Sample golden_min(F&& f, double a, double b, double tol) {
    Sample best{a, 0.0, f(a)};
    const auto consider = [&best](double x, double v) {
        const Sample s{x, 0.0, v};
        if (better(s, best))
            best = s;
    };
    if (b <= a)
        return best;
    consider(b, f(b));

    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c);
    double fd = f(d);
    consider(c, fc);
    consider(d, fd);
    for (int iter = 0; iter < 200 && (b - a) > tol; ++iter) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
            consider(c, fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
            consider(d, fd);
        }
    }
    return best;
}

std::size_t axis_points(double lo, double hi, int n) {
    return lo == hi ? 1 : static_cast<std::size_t>(n);
}

} // namespace

void OptimizeConfig::validate() const {
    if (grid_points_per_axis < 8)
        throw DomainError("grid_points_per_axis must be >= 8");
    if (!(refine_tolerance > 0.0))
        throw DomainError("refine_tolerance must be positive");
    if (!(bracket_lo > 0.0) || !(bracket_hi > bracket_lo))
        throw DomainError("bracket must satisfy 0 < lo < hi");
}

std::string to_string(Location where) {
    switch (where) {
    case Location::interior:
        return "interior";
    case Location::boundary:
        return "boundary";
    case Location::corner:
        return "corner";
    }
    return "unknown";
}

bool Rectangle::crosses_diagonal() const {
    // [x_lo, x_hi] x [y_lo, y_hi] meets x == y iff the two intervals overlap.
    return std::max(x_lo, y_lo) <= std::min(x_hi, y_hi);
}

Optimum minimize_rectangle(const std::function<double(double, double)>& objective,
                           const Rectangle& rect, const OptimizeConfig& cfg) {
    cfg.validate();
    if (!(rect.x_lo <= rect.x_hi) || !(rect.y_lo <= rect.y_hi))
        throw DomainError("rectangle bounds are inverted");
    if (rect.crosses_diagonal())
        throw DomainError("rectangle intersects the diagonal mu_s == mu_d");

    const auto xs = kernels::linspace(rect.x_lo, rect.x_hi,
                                      axis_points(rect.x_lo, rect.x_hi, cfg.grid_points_per_axis));
    const auto ys = kernels::linspace(rect.y_lo, rect.y_hi,
                                      axis_points(rect.y_lo, rect.y_hi, cfg.grid_points_per_axis));
    const auto values = kernels::evaluate_grid_parallel(objective, xs, ys);

    const std::size_t k = kernels::argmin(values, kTieTolerance);
    Sample best{xs[k / ys.size()], ys[k % ys.size()], values[k]};
    const auto consider = [&best](const Sample& s) {
        if (better(s, best))
            best = s;
    };

    if (cfg.use_corner_heuristic) {
        for (double x : {rect.x_lo, rect.x_hi})
            for (double y : {rect.y_lo, rect.y_hi})
                consider(Sample{x, y, objective(x, y)});
    }

    const double step_x = xs.size() > 1 ? xs[1] - xs[0] : 0.0;
    const double step_y = ys.size() > 1 ? ys[1] - ys[0] : 0.0;
    for (int pass = 0; pass < 50; ++pass) {
        const Sample start = best;

        if (step_x > 0.0) {
            const double y = best.y;
            const Sample s = golden_min([&](double x) { return objective(x, y); },
                                        std::max(rect.x_lo, best.x - step_x),
                                        std::min(rect.x_hi, best.x + step_x), cfg.refine_tolerance);
            consider(Sample{s.x, y, s.value});
        }
        if (step_y > 0.0) {
            const double x = best.x;
            const Sample s = golden_min([&](double y) { return objective(x, y); },
                                        std::max(rect.y_lo, best.y - step_y),
                                        std::min(rect.y_hi, best.y + step_y), cfg.refine_tolerance);
            consider(Sample{x, s.x, s.value});
        }

        if (std::abs(best.x - start.x) <= cfg.refine_tolerance
            && std::abs(best.y - start.y) <= cfg.refine_tolerance)
            break;
    }

    const bool on_x_edge = best.x == rect.x_lo || best.x == rect.x_hi;
    const bool on_y_edge = best.y == rect.y_lo || best.y == rect.y_hi;
    Optimum out;
    out.argument = {best.x, best.y};
    out.value = best.value;
    out.location = on_x_edge && on_y_edge ? Location::corner
                 : (on_x_edge || on_y_edge) ? Location::boundary
                                            : Location::interior;
    return out;
}

Optimum maximize_scalar(const std::function<double(double)>& objective, double lo, double hi,
                        const OptimizeConfig& cfg, Spacing spacing) {
    cfg.validate();
    if (!(lo < hi))
        throw DomainError("maximize_scalar requires lo < hi");

    const auto n = static_cast<std::size_t>(4 * cfg.grid_points_per_axis);
    const auto xs = spacing == Spacing::logarithmic ? kernels::logspace(lo, hi, n)
                                                    : kernels::linspace(lo, hi, n);
    auto negated = kernels::map_parallel(xs.size(), [&](std::size_t i) { return -objective(xs[i]); });

    const std::size_t k = kernels::argmin(negated, kTieTolerance);
    Sample best{xs[k], 0.0, negated[k]};

    const double a = xs[k == 0 ? 0 : k - 1];
    const double b = xs[std::min(k + 1, xs.size() - 1)];
    const Sample refined =
        golden_min([&](double x) { return -objective(x); }, a, b, cfg.refine_tolerance);
    if (better(refined, best))
        best = refined;

    Optimum out;
    out.argument = {best.x};
    out.value = -best.value;
    out.location = (best.x == lo || best.x == hi) ? Location::boundary : Location::interior;
    return out;
}

Optimum optimal_signal_intensity(const ChannelParams& params, double epsilon,
                                 const OptimizeConfig& cfg) {
    params.validate();
    cfg.validate();
    if (!(epsilon >= 0.0 && epsilon < 1.0))
        throw DomainError("epsilon must lie in [0, 1)");

    const double rhs = limit_condition_rhs(params, epsilon);
    double hi = std::min(cfg.bracket_hi, rhs / (1.0 + epsilon));
    while (hi > cfg.bracket_lo && !limit_condition_holds(params, hi, epsilon))
        hi = std::nextafter(hi, 0.0);
    if (!(hi > cfg.bracket_lo) || !limit_condition_holds(params, cfg.bracket_lo, epsilon)) {
        std::ostringstream msg;
        msg << "signal intensity condition cannot be met: no intensity in ["
            << cfg.bracket_lo << ", " << cfg.bracket_hi
            << "] satisfies mu_s (1 + eps) <= " << rhs;
        throw PreconditionError(msg.str(), rhs);
    }

    Optimum best = maximize_scalar(
        [&](double mu_s) { return std::max(rate_e_limit(params, mu_s, epsilon), 0.0); },
        cfg.bracket_lo, hi, cfg);
    best.clamped = !(rate_e_limit(params, best.argument[0], epsilon) > 0.0);
    return best;
}

} // namespace decoy
