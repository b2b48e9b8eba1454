#ifndef TAILASYM_ASYMPTOTICS_HPP
#define TAILASYM_ASYMPTOTICS_HPP

#include <cstdint>

#include "tailasym/estimate.hpp"
#include "tailasym/fgm.hpp"
#include "tailasym/weights.hpp"

namespace tailasym {

/// The full model: FGM-coupled primary pairs, a weight law, and fixed
/// horizon counts n (X side) and m (Y side).
struct ModelSpec {
    FgmPair pair;
    WeightModel weights;

    ModelSpec(FgmPair p, WeightModel w);
    int n() const { return weights.n(); }
    int m() const { return weights.m(); }
};

/// How expectations over the weight law are evaluated.
struct ExpectOptions {
    enum class Path { Auto, Quadrature, MonteCarlo };
    Path path = Path::Auto;       // Auto: quadrature for IidUniform, MC else
    std::uint64_t n_mc = 1'000'000;
    std::uint64_t seed = 0x7a11a573ull;
    ExecPolicy exec{};
};

/// First-order joint expansion: sum over (i, j) of
/// P(theta_i X_i > x, Theta_j Y_j > y), with the FGM coupling on i == j.
AsymptoticEstimate joint_asy1(const ModelSpec& ms, double x, double y,
                              const ExpectOptions& opt = {});

/// Second-order joint expansion: joint_asy1 plus the cross-index strip
/// groups and the r-weighted dependence group.
AsymptoticEstimate joint_asy2(const ModelSpec& ms, double x, double y,
                              const ExpectOptions& opt = {});

/// First-order sum expansion: sum of weighted marginal tails at z.
AsymptoticEstimate sum_asy1(const ModelSpec& ms, double z,
                            const ExpectOptions& opt = {});

/// Second-order sum expansion: sum_asy1 plus within-family, cross-family and
/// diagonal dependence corrections.  Warns (not errors) when the two
/// marginal local masses at z differ by more than a factor of 10, which
/// strains the comparability hypothesis behind the expansion.
AsymptoticEstimate sum_asy2(const ModelSpec& ms, double z,
                            const ExpectOptions& opt = {});

/// Density-based second-order joint expansion for Pareto margins with tail
/// indices > 2 (regularly varying densities).
AsymptoticEstimate joint_asy2_rv(const ModelSpec& ms, double x, double y,
                                 const ExpectOptions& opt = {});

/// Density-based second-order sum expansion; requires both margins Pareto
/// with the same tail index > 2.
AsymptoticEstimate sum_asy2_rv(const ModelSpec& ms, double z,
                               const ExpectOptions& opt = {});

/// Discrete-time risk-model wrappers: discount-factor-product weights over
/// an n-period horizon.  The joint form evaluates at (x, y); the sum form
/// evaluates at z = x + y.
AsymptoticEstimate risk_joint_asy2(const FgmPair& pair, double factor_lo,
                                   double factor_hi, int horizon, double x,
                                   double y, const ExpectOptions& opt = {});
AsymptoticEstimate risk_sum_asy2(const FgmPair& pair, double factor_lo,
                                 double factor_hi, int horizon, double x,
                                 double y, const ExpectOptions& opt = {});

}  // namespace tailasym

#endif
