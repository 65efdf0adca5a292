#include "decoy/kernels.hpp"

#include "decoy/error.hpp"

#include <cmath>

namespace decoy::kernels {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n == 0)
        return {};
    if (n == 1)
        return {lo};
    std::vector<double> out(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = lo + step * static_cast<double>(i);
    out.back() = hi;
    return out;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi > 0.0))
        throw DomainError("logarithmic grid needs positive bounds");
    auto out = linspace(std::log(lo), std::log(hi), n);
    for (double& x : out)
        x = std::exp(x);
    if (!out.empty()) {
        out.front() = lo;
        out.back() = hi;
    }
    return out;
}

std::vector<double> evaluate_grid_serial(const GridFunction& f, std::span<const double> xs,
                                         std::span<const double> ys) {
    const std::size_t ny = ys.size();
    return map_serial(xs.size() * ny, [&](std::size_t k) { return f(xs[k / ny], ys[k % ny]); });
}

std::vector<double> evaluate_grid_parallel(const GridFunction& f, std::span<const double> xs,
                                           std::span<const double> ys) {
    const std::size_t ny = ys.size();
    return map_parallel(xs.size() * ny, [&](std::size_t k) { return f(xs[k / ny], ys[k % ny]); });
}

std::size_t argmin(std::span<const double> values, double tie) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] < values[best] - tie)
            best = i;
    return best;
}

} // namespace decoy::kernels
