#ifndef TAILASYM_WEIGHTS_HPP
#define TAILASYM_WEIGHTS_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "tailasym/parallel.hpp"
#include "tailasym/philox.hpp"

namespace tailasym {

enum class WeightVariant { IidUniform, Comonotone, DiscountProduct };

/// Per-index box bounds of a weight vector pair.
struct WeightBox {
    std::vector<double> theta_lo, theta_hi;
    std::vector<double> big_lo, big_hi;
};

struct WeightSample {
    std::vector<double> theta;      // multiplies the X side
    std::vector<double> big_theta;  // multiplies the Y side
};

/// Bounded positive random weight vectors (theta_1..theta_n,
/// Theta_1..Theta_m), independent of the primary pairs.  Three concrete laws:
///  - IidUniform: every coordinate independent uniform on its interval;
///  - Comonotone: one uniform drives all coordinates (maximal dependence);
///  - DiscountProduct: theta_i and Theta_j are running products of i.i.d.
///    uniform per-period factors, as in multi-period discounting.
class WeightModel {
  public:
    static WeightModel iid_uniform(double a1, double b1, double a2, double b2,
                                   int n, int m);
    static WeightModel comonotone(double a1, double b1, double a2, double b2,
                                  int n, int m);
    /// Per-period factors R_k, R~_k i.i.d. uniform on [a, b], a > 0; the two
    /// factor sequences are independent of each other.
    static WeightModel discount_product(double a, double b, int n, int m);

    WeightVariant variant() const { return variant_; }
    int n() const { return n_; }
    int m() const { return m_; }
    double a1() const { return a1_; }
    double b1() const { return b1_; }
    double a2() const { return a2_; }
    double b2() const { return b2_; }

    WeightBox box() const;

    /// Number of uniforms one draw consumes (fixed, for stream layout).
    int draws_per_sample() const;

    void sample_into(PhiloxStream& stream, WeightSample& out) const;
    WeightSample sample(PhiloxStream& stream) const;

  private:
    WeightModel() = default;
    WeightVariant variant_ = WeightVariant::IidUniform;
    double a1_ = 1, b1_ = 1, a2_ = 1, b2_ = 1;
    int n_ = 1, m_ = 1;
};

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
};

/// Fixed-seed plain Monte Carlo average of `fn` over weight draws, chunked
/// with counter-derived per-sample streams: the result is a function of
/// (model, n_mc, seed) only, independent of thread count.
MeanStderr weight_expectation(const WeightModel& wm,
                              const std::function<double(const WeightSample&)>& fn,
                              std::uint64_t n_mc, std::uint64_t seed,
                              const ExecPolicy& exec = {});

/// Which coordinates of a WeightSample an integrand reads.
struct ActiveCoord {
    enum class Kind { Theta, BigTheta };
    Kind kind;
    int index;  // 0-based
};

/// Deterministic tensor Gauss-Legendre alternative for IidUniform weights:
/// integrates over only the listed coordinates (at most 3); the remaining
/// coordinates are pinned to their interval midpoints and must not influence
/// `fn`.
double weight_expectation_quadrature(
    const WeightModel& wm, std::span<const ActiveCoord> active,
    const std::function<double(const WeightSample&)>& fn, int points = 32);

}  // namespace tailasym

#endif
