#include "decoy/cli.hpp"
#include "decoy/kernels.hpp"
#include "decoy/rates.hpp"

#include <chrono>
#include <cstdio>
#include <functional>

using namespace decoy;

namespace {

template <class F>
double seconds(F&& f) {
    const auto start = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void report(const char* name, double serial, double parallel, bool same) {
    std::printf("%-22s serial %8.4f s  parallel %8.4f s  speedup %5.2fx  %s\n", name, serial,
                parallel, serial / parallel, same ? "identical" : "MISMATCH");
}

} // namespace

int main() {
    const ChannelParams params;
    const IntensitySpec spec{0.5, 0.1, 0.05};

    const auto xs = kernels::linspace(spec.mu_s_lo(), spec.mu_s_hi(), 200);
    const auto ys = kernels::linspace(spec.mu_d_lo(), spec.mu_d_hi(), 200);
    const kernels::GridFunction objective = [&](double mu_s, double mu_d) {
        return rate_e_point(params, mu_s, mu_d, spec.mu_s_nominal, spec.mu_d_nominal).rate_improved;
    };
    std::vector<double> a, b;
    const double g1 = seconds([&] { a = kernels::evaluate_grid_serial(objective, xs, ys); });
    const double g2 = seconds([&] { b = kernels::evaluate_grid_parallel(objective, xs, ys); });
    report("rectangle 200x200", g1, g2, a == b);

    cli::RunConfig cfg;
    cfg.intensities.epsilon = 0.03;
    cfg.sweep = {"mu_s", 0.15, 0.9, 64, false};
    std::vector<cli::SweepRow> r1, r2;
    const double s1 = seconds([&] { r1 = cli::sweep_rows_serial(cfg); });
    const double s2 = seconds([&] { r2 = cli::sweep_rows_parallel(cfg); });
    bool same = r1.size() == r2.size();
    for (std::size_t i = 0; same && i < r1.size(); ++i)
        same = r1[i].rate == r2[i].rate && r1[i].rate_tilde == r2[i].rate_tilde;
    report("worst-case sweep x64", s1, s2, same);

    const auto grid = kernels::logspace(1e-4, 1.0, 120);
    const auto rate_pair = [&](std::size_t k) {
        const std::size_t i = k / grid.size(), j = k % grid.size();
        if (j <= i)
            return 0.0;
        return rate_improved(params, grid[j], grid[i]) - rate_conventional(params, grid[j], grid[i]);
    };
    const std::size_t cells = grid.size() * grid.size();
    std::vector<double> t1, t2;
    const double l1 = seconds([&] { t1 = kernels::map_serial(cells, rate_pair); });
    const double l2 = seconds([&] { t2 = kernels::map_parallel(cells, rate_pair); });
    report("rate table 120x120", l1, l2, t1 == t2);
    return 0;
}
