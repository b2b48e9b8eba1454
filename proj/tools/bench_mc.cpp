// Compares the serial reference path of the Monte Carlo engine against the
// OpenMP chunk-parallel path on the sum-tail workload and checks that both
// produce bit-identical estimates.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "tailasym/montecarlo.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace tailasym;

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch())
        .count();
}

}  // namespace

int main(int argc, char** argv) {
    std::uint64_t n = 1u << 21;
    int reps = 3;
    if (argc > 1) n = std::strtoull(argv[1], nullptr, 10);
    if (argc > 2) reps = std::atoi(argv[2]);

    ModelSpec ms(FgmPair(0.6, Marginal::pareto(2.01, 1.0),
                         Marginal::pareto(2.01, 1.0)),
                 WeightModel::iid_uniform(1.0, 2.0, 1.0, 2.0, 2, 2));
    const std::vector<double> zs{10, 20, 30, 40, 50, 60, 70, 80};
    McSettings settings{n, reps, 4242, 1u << 16};

#ifdef _OPENMP
    const int threads = omp_get_max_threads();
#else
    const int threads = 1;
#endif
    std::printf("sum-tail Monte Carlo, N = %llu, reps = %d, %d threads\n",
                static_cast<unsigned long long>(n), reps, threads);

    double t0 = now_seconds();
    const auto serial = simulate_sum_tail(ms, zs, settings, {.parallel = false});
    const double t_serial = now_seconds() - t0;

    t0 = now_seconds();
    const auto parallel = simulate_sum_tail(ms, zs, settings, {.parallel = true});
    const double t_parallel = now_seconds() - t0;

    bool identical = true;
    for (std::size_t p = 0; p < zs.size(); ++p) {
        if (serial[p].mean != parallel[p].mean ||
            serial[p].stderr_ != parallel[p].stderr_)
            identical = false;
    }

    std::printf("%-10s %12s %12s\n", "path", "seconds", "samples/s");
    std::printf("%-10s %12.3f %12.3e\n", "serial", t_serial,
                n * static_cast<double>(reps) / t_serial);
    std::printf("%-10s %12.3f %12.3e\n", "parallel", t_parallel,
                n * static_cast<double>(reps) / t_parallel);
    std::printf("speedup: %.2fx, results bit-identical: %s\n",
                t_serial / t_parallel, identical ? "yes" : "NO");

    std::printf("\n%8s %14s %14s\n", "z", "mean", "stderr");
    for (std::size_t p = 0; p < zs.size(); ++p)
        std::printf("%8.0f %14.6e %14.6e\n", zs[p], parallel[p].mean,
                    parallel[p].stderr_);
    return identical ? 0 : 1;
}
