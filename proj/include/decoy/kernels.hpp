#pragma once

// Grid-evaluation kernels. Each parallel kernel has a serial twin computing
// the same values in the same order; tests compare them element by element.

#include <cstddef>
#include <exception>
#include <functional>
#include <span>
#include <type_traits>
#include <vector>

namespace decoy::kernels {

/// n points from lo to hi inclusive; a single point returns {lo}.
std::vector<double> linspace(double lo, double hi, std::size_t n);
/// n logarithmically spaced points from lo to hi inclusive (lo, hi > 0).
std::vector<double> logspace(double lo, double hi, std::size_t n);

template <class F>
using map_result_t = std::invoke_result_t<F&, std::size_t>;

/// out[i] = f(i) for i in [0, n).
template <class F>
std::vector<map_result_t<F>> map_serial(std::size_t n, F f) {
    std::vector<map_result_t<F>> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = f(i);
    return out;
}

/// OpenMP version of map_serial. `f` must be safe to call concurrently. The
/// first exception thrown by any iteration is rethrown after the loop.
template <class F>
std::vector<map_result_t<F>> map_parallel(std::size_t n, F f) {
    std::vector<map_result_t<F>> out(n);
    std::exception_ptr failure;
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 8)
    for (long long i = 0; i < count; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(decoy_kernel_failure)
            if (!failure)
                failure = std::current_exception();
        }
    }
    if (failure)
        std::rethrow_exception(failure);
    return out;
}

using GridFunction = std::function<double(double, double)>;

/// Row-major values f(xs[i], ys[j]) at index i * ys.size() + j.
std::vector<double> evaluate_grid_serial(const GridFunction& f, std::span<const double> xs,
                                         std::span<const double> ys);
std::vector<double> evaluate_grid_parallel(const GridFunction& f, std::span<const double> xs,
                                           std::span<const double> ys);

/// Index of the smallest value; ties within `tie` go to the lowest index.
std::size_t argmin(std::span<const double> values, double tie = 0.0);

} // namespace decoy::kernels
