#include "tailasym/fgm.hpp"

#include <cmath>
#include <stdexcept>

namespace tailasym {

FgmPair::FgmPair(double r, Marginal f, Marginal g)
    : r_(r), f_(std::move(f)), g_(std::move(g)) {
    if (!(std::fabs(r) <= 1.0))
        throw std::invalid_argument("FgmPair: |r| must be <= 1, got " +
                                    std::to_string(r));
}

double FgmPair::joint_cdf(double x, double y) const {
    const double F = f_.cdf(x), G = g_.cdf(y);
    return F * G * (1.0 + r_ * (1.0 - F) * (1.0 - G));
}

double FgmPair::joint_tail(double x, double y) const {
    const double tf = f_.tail(x), tg = g_.tail(y);
    return tf * tg * (1.0 + r_ * (1.0 - tf) * (1.0 - tg));
}

double FgmPair::joint_rect_y(double x, double y1, double y2) const {
    if (!(y1 < y2))
        throw std::invalid_argument("joint_rect_y: need y1 < y2");
    return joint_tail(x, y1) - joint_tail(x, y2);
}

double FgmPair::joint_rect_x(double x1, double x2, double y) const {
    if (!(x1 < x2))
        throw std::invalid_argument("joint_rect_x: need x1 < x2");
    return joint_tail(x1, y) - joint_tail(x2, y);
}

double FgmPair::conditional_v(double u, double w) const {
    if (!(u > 0.0 && u < 1.0 && w > 0.0 && w < 1.0))
        throw std::domain_error("FgmPair::sample: uniforms must lie in (0,1)");
    const double A = r_ * (1.0 - 2.0 * u);
    if (std::fabs(A) < 1e-14) return w;
    // minus root of A v^2 - (1+A) v + w = 0 in the cancellation-free form;
    // the discriminant is >= (1-|A|)^2 >= 0 for |r| <= 1
    const double disc = (1.0 + A) * (1.0 + A) - 4.0 * A * w;
    return 2.0 * w / ((1.0 + A) + std::sqrt(disc));
}

std::pair<double, double> FgmPair::sample(double u, double w) const {
    const double v = conditional_v(u, w);
    return {f_.quantile(u), g_.quantile(v)};
}

AsymptoticEstimate FgmPair::pair_sum_tail_expansion(double c, double d,
                                                    double x) const {
    if (!(c > 0.0 && d > 0.0))
        throw std::domain_error("pair_sum_tail_expansion: c, d must be > 0");
    if (!(x > 0.0))
        throw std::domain_error("pair_sum_tail_expansion: x must be > 0");
    const double tail_x = f_.tail(x / c);
    const double tail_y = g_.tail(x / d);
    const double mass_x = f_.local_mass(x / c, 1.0 / c);
    const double mass_y = g_.local_mass(x / d, 1.0 / d);
    const double coef_x =
        d * (r_ * g_.mean_of_square_dist() + (1.0 - r_) * g_.mean());
    const double coef_y =
        c * (r_ * f_.mean_of_square_dist() + (1.0 - r_) * f_.mean());

    AsymptoticEstimate est;
    est.order = Order::Second;
    est.first_order = tail_x + tail_y;
    est.second_order_correction = coef_x * mass_x + coef_y * mass_y;
    est.terms = {{"tail_x", tail_x},
                 {"tail_y", tail_y},
                 {"mass_x_correction", coef_x * mass_x},
                 {"mass_y_correction", coef_y * mass_y}};
    return est;
}

}  // namespace tailasym
