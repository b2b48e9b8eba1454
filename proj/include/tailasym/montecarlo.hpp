#ifndef TAILASYM_MONTECARLO_HPP
#define TAILASYM_MONTECARLO_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "tailasym/asymptotics.hpp"
#include "tailasym/parallel.hpp"

namespace tailasym {

struct McSettings {
    std::uint64_t n_samples = 10'000'000;
    int n_reps = 10;
    std::uint64_t seed = 1;
    std::uint32_t chunk_size = 1u << 16;
};

/// Across-replicate Monte Carlo estimate.  The mean is the average of the
/// per-replicate values; stderr is their sample standard deviation divided
/// by sqrt(reps) (0 when there is a single replicate).
struct McEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::vector<double> per_rep;
};

/// Crude Monte Carlo estimate of P(S_n > x, T_m > y) at every grid point,
/// sharing one sample set per replicate across the grid.  Deterministic in
/// (model, settings); the execution policy changes wall time only.
std::vector<McEstimate> simulate_joint_tail(
    const ModelSpec& ms, std::span<const std::pair<double, double>> points,
    const McSettings& settings, const ExecPolicy& exec = {});
McEstimate simulate_joint_tail(const ModelSpec& ms, double x, double y,
                               const McSettings& settings,
                               const ExecPolicy& exec = {});

/// Crude Monte Carlo estimate of P(S_n + T_m > z) on a threshold grid.
std::vector<McEstimate> simulate_sum_tail(const ModelSpec& ms,
                                          std::span<const double> zs,
                                          const McSettings& settings,
                                          const ExecPolicy& exec = {});
McEstimate simulate_sum_tail(const ModelSpec& ms, double z,
                             const McSettings& settings,
                             const ExecPolicy& exec = {});

struct IndicatorAsyEstimate {
    McEstimate asy1;
    McEstimate asy2;
};

/// Indicator-sum estimators of the first- and second-order joint expansions
/// in the n = m = 2, i.i.d.-uniform-weight configuration, with the diagonal
/// coefficient adjustment (mu_{U2} - 2 mu_U) of the estimator form.  These
/// estimate expansion values, not probabilities; near z = 0 they exceed 1.
std::vector<IndicatorAsyEstimate> estimate_asy_indicator_joint(
    const ModelSpec& ms, std::span<const std::pair<double, double>> points,
    const McSettings& settings, const ExecPolicy& exec = {});

std::vector<IndicatorAsyEstimate> estimate_asy_indicator_sum(
    const ModelSpec& ms, std::span<const double> zs,
    const McSettings& settings, const ExecPolicy& exec = {});

}  // namespace tailasym

#endif
