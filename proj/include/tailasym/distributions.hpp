#ifndef TAILASYM_DISTRIBUTIONS_HPP
#define TAILASYM_DISTRIBUTIONS_HPP

#include <functional>
#include <string>

namespace tailasym {

enum class Family { Pareto, Weibull, Lognormal };

struct ParetoParams {
    double alpha;  // shape, > 1 for a finite mean
    double k;      // scale, > 0
};

struct WeibullParams {
    double beta;  // shape in (0, 1), unit scale
};

struct LognormalParams {
    double mu;
    double sigma;  // > 0
};

/// Heavy-tailed marginal on [0, inf) with the tail functionals used by the
/// tail-probability expansions: survival tail(x), local mass F(x, x+t],
/// the mean, and the mean of the distribution with cdf F^2 (the maximum of
/// two independent copies).
///
/// Immutable after construction; safe for concurrent reads.
class Marginal {
  public:
    static Marginal pareto(double alpha, double k);
    static Marginal weibull(double beta);
    static Marginal lognormal(double mu, double sigma);

    Family family() const { return family_; }
    std::string family_name() const;
    const ParetoParams& pareto_params() const;
    const WeibullParams& weibull_params() const;
    const LognormalParams& lognormal_params() const;

    /// Survival function 1 - cdf(x); strictly positive for all x >= 0.
    double tail(double x) const;
    double cdf(double x) const;
    double density(double x) const;

    /// Inverse cdf on (0, 1).
    double quantile(double p) const;

    /// cdf(x+t) - cdf(x), evaluated as a difference of tails so the deep-tail
    /// result keeps its relative accuracy.
    double local_mass(double x, double t) const;

    double mean() const { return mean_; }
    double mean_of_square_dist() const { return mean_sq_; }

    /// Density of the regularly varying family (Pareto only).
    double rv_density(double x) const;

    /// Tail of the distribution of the sum of two independent copies,
    /// by adaptive integration against the density split at x/2.
    double convolution_tail(double x) const;

    /// Ratio (conv_tail(x) - 2 tail(x)) / (2 mean local_mass(x,1)).
    /// Approaches 1 as x grows for second-order subexponential families.
    double s2_diagnostic(double x) const;

    // Quadrature fallbacks for the cached moments (used as cross-checks and
    // for the lognormal mean_of_square_dist, which has no closed form).
    double mean_by_quadrature() const;
    double mean_of_square_dist_by_quadrature() const;

    /// Integral of g against the density over [lo, hi] with a family-specific
    /// change of variable that removes the endpoint singularity (Weibull) or
    /// maps to the normal scale (Lognormal).
    double integrate_against_density(const std::function<double(double)>& g,
                                     double lo, double hi,
                                     double rel_tol = 1e-8) const;

  private:
    Marginal() = default;
    void cache_moments();

    Family family_ = Family::Pareto;
    ParetoParams pareto_{};
    WeibullParams weibull_{};
    LognormalParams lognormal_{};
    double mean_ = 0.0;
    double mean_sq_ = 0.0;
};

/// Inverse of the standard normal cdf, accurate to ~1e-15.
double inverse_standard_normal_cdf(double p);

}  // namespace tailasym

#endif
