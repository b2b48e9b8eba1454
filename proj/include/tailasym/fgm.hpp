#ifndef TAILASYM_FGM_HPP
#define TAILASYM_FGM_HPP

#include <utility>

#include "tailasym/distributions.hpp"
#include "tailasym/estimate.hpp"

namespace tailasym {

/// Bivariate pair (X, Y) with marginals F, G coupled through
///   Pi(x,y) = F(x) G(y) (1 + r (1-F(x)) (1-G(y))),  |r| <= 1.
/// Immutable; sampling is a pure function of two uniforms.
class FgmPair {
  public:
    FgmPair(double r, Marginal f, Marginal g);

    double r() const { return r_; }
    const Marginal& margin_x() const { return f_; }
    const Marginal& margin_y() const { return g_; }

    double joint_cdf(double x, double y) const;

    /// P(X > x, Y > y) = tail_F(x) tail_G(y) (1 + r F(x) G(y)).
    double joint_tail(double x, double y) const;

    /// P(X > x, Y in (y1, y2]).
    double joint_rect_y(double x, double y1, double y2) const;
    /// P(X in (x1, x2], Y > y).
    double joint_rect_x(double x1, double x2, double y) const;

    /// Exact draw by conditional inversion: X = F^{-1}(u) and Y = G^{-1}(v)
    /// where v solves (1+A) v - A v^2 = w with A = r (1 - 2u).
    std::pair<double, double> sample(double u, double w) const;

    /// The conditional copula inverse v(u, w) itself (unit scale).
    double conditional_v(double u, double w) const;

    /// Two-term tail expansion of P(cX + dY > x):
    ///   tail_F(x/c) + tail_G(x/d)
    ///   + d (r mu_{G2} + (1-r) mu_G) F(x/c, (x+1)/c]
    ///   + c (r mu_{F2} + (1-r) mu_F) G(x/d, (x+1)/d]
    AsymptoticEstimate pair_sum_tail_expansion(double c, double d,
                                               double x) const;

  private:
    double r_;
    Marginal f_;
    Marginal g_;
};

}  // namespace tailasym

#endif
