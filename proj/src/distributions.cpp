#include "tailasym/distributions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "tailasym/quadrature.hpp"

namespace tailasym {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double std_normal_tail(double z) { return 0.5 * std::erfc(z / kSqrt2); }
double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }
double std_normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

void check_x(double x) {
    if (!(x >= 0.0))
        throw std::domain_error("Marginal: argument must be >= 0, got " +
                                std::to_string(x));
}

}  // namespace

double inverse_standard_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("inverse_standard_normal_cdf: p outside (0,1)");
    // Acklam's rational approximation, then one Halley step.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;
    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = std_normal_cdf(x) - p;
    const double u = e / std_normal_pdf(x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

Marginal Marginal::pareto(double alpha, double k) {
    if (!(alpha > 1.0))
        throw std::invalid_argument(
            "Pareto: alpha must be > 1 for a finite mean");
    if (!(k > 0.0)) throw std::invalid_argument("Pareto: k must be > 0");
    Marginal m;
    m.family_ = Family::Pareto;
    m.pareto_ = {alpha, k};
    m.cache_moments();
    return m;
}

Marginal Marginal::weibull(double beta) {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("Weibull: beta must lie in (0, 1)");
    Marginal m;
    m.family_ = Family::Weibull;
    m.weibull_ = {beta};
    m.cache_moments();
    return m;
}

Marginal Marginal::lognormal(double mu, double sigma) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("Lognormal: sigma must be > 0");
    Marginal m;
    m.family_ = Family::Lognormal;
    m.lognormal_ = {mu, sigma};
    m.cache_moments();
    return m;
}

std::string Marginal::family_name() const {
    switch (family_) {
        case Family::Pareto: return "pareto";
        case Family::Weibull: return "weibull";
        case Family::Lognormal: return "lognormal";
    }
    return "?";
}

const ParetoParams& Marginal::pareto_params() const {
    if (family_ != Family::Pareto)
        throw std::logic_error("not a Pareto marginal");
    return pareto_;
}
const WeibullParams& Marginal::weibull_params() const {
    if (family_ != Family::Weibull)
        throw std::logic_error("not a Weibull marginal");
    return weibull_;
}
const LognormalParams& Marginal::lognormal_params() const {
    if (family_ != Family::Lognormal)
        throw std::logic_error("not a Lognormal marginal");
    return lognormal_;
}

double Marginal::tail(double x) const {
    check_x(x);
    switch (family_) {
        case Family::Pareto:
            return std::exp(-pareto_.alpha * std::log1p(x / pareto_.k));
        case Family::Weibull:
            return std::exp(-std::pow(x, weibull_.beta));
        case Family::Lognormal:
            if (x == 0.0) return 1.0;
            return std_normal_tail((std::log(x) - lognormal_.mu) /
                                   lognormal_.sigma);
    }
    return 0.0;
}

double Marginal::cdf(double x) const { return 1.0 - tail(x); }

double Marginal::density(double x) const {
    check_x(x);
    switch (family_) {
        case Family::Pareto:
            return pareto_.alpha / pareto_.k *
                   std::exp(-(pareto_.alpha + 1.0) * std::log1p(x / pareto_.k));
        case Family::Weibull: {
            if (x == 0.0) return std::numeric_limits<double>::infinity();
            const double b = weibull_.beta;
            return b * std::pow(x, b - 1.0) * std::exp(-std::pow(x, b));
        }
        case Family::Lognormal: {
            if (x == 0.0) return 0.0;
            const double z = (std::log(x) - lognormal_.mu) / lognormal_.sigma;
            return std_normal_pdf(z) / (x * lognormal_.sigma);
        }
    }
    return 0.0;
}

double Marginal::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("Marginal::quantile: p outside (0,1)");
    switch (family_) {
        case Family::Pareto:
            // tail = (k/(x+k))^alpha  =>  x = k*((1-p)^(-1/alpha) - 1)
            return pareto_.k *
                   std::expm1(-std::log1p(-p) / pareto_.alpha);
        case Family::Weibull:
            return std::pow(-std::log1p(-p), 1.0 / weibull_.beta);
        case Family::Lognormal:
            return std::exp(lognormal_.mu +
                            lognormal_.sigma * inverse_standard_normal_cdf(p));
    }
    return 0.0;
}

double Marginal::local_mass(double x, double t) const {
    check_x(x);
    if (!(t > 0.0))
        throw std::domain_error("Marginal::local_mass: t must be > 0");
    switch (family_) {
        case Family::Pareto:
            // tail(x) * (1 - (1 + t/(x+k))^-alpha), no cancellation
            return tail(x) *
                   -std::expm1(-pareto_.alpha * std::log1p(t / (x + pareto_.k)));
        case Family::Weibull: {
            const double b = weibull_.beta;
            const double inc =
                x > 0.0 ? std::pow(x, b) * std::expm1(b * std::log1p(t / x))
                        : std::pow(t, b);
            return tail(x) * -std::expm1(-inc);
        }
        case Family::Lognormal:
            return tail(x) - tail(x + t);
    }
    return 0.0;
}

void Marginal::cache_moments() {
    switch (family_) {
        case Family::Pareto: {
            const double a = pareto_.alpha, k = pareto_.k;
            mean_ = k / (a - 1.0);
            mean_sq_ = 2.0 * k / (a - 1.0) - k / (2.0 * a - 1.0);
            break;
        }
        case Family::Weibull: {
            const double inv_b = 1.0 / weibull_.beta;
            const double g = std::tgamma(1.0 + inv_b);
            mean_ = g;
            mean_sq_ = (2.0 - std::pow(2.0, -inv_b)) * g;
            break;
        }
        case Family::Lognormal: {
            mean_ = std::exp(lognormal_.mu +
                             0.5 * lognormal_.sigma * lognormal_.sigma);
            mean_sq_ = mean_of_square_dist_by_quadrature();
            break;
        }
    }
}

double Marginal::mean_by_quadrature() const {
    quad::Options opt;
    opt.rel_tol = 1e-10;
    switch (family_) {
        case Family::Pareto: {
            const double a = pareto_.alpha, k = pareto_.k;
            double cut = k;
            // integral of the tail beyond the cut has a closed form
            auto remainder = [&](double X) {
                return std::pow(k, a) * std::pow(X + k, 1.0 - a) / (a - 1.0);
            };
            while (remainder(cut) > 1e-13 * (k / (a - 1.0))) cut *= 2.0;
            const double head = quad::integrate_value(
                [&](double x) { return tail(x); }, 0.0, cut, opt);
            return head + remainder(cut);
        }
        case Family::Weibull: {
            // u = x^beta turns the integral into a smooth incomplete-gamma form
            const double inv_b = 1.0 / weibull_.beta;
            return inv_b * quad::integrate_value(
                               [&](double u) {
                                   return std::pow(u, inv_b - 1.0) * std::exp(-u);
                               },
                               0.0, 700.0, opt);
        }
        case Family::Lognormal: {
            const double mu = lognormal_.mu, s = lognormal_.sigma;
            const double z_lo = 0.5 * s - 40.0 / s - 5.0;
            const double z_hi = s + 45.0;
            return quad::integrate_value(
                [&](double z) {
                    return std_normal_tail(z) * s * std::exp(mu + s * z);
                },
                z_lo, z_hi, opt);
        }
    }
    return 0.0;
}

double Marginal::mean_of_square_dist_by_quadrature() const {
    // integral of 1 - cdf^2 = tail*(2 - tail)
    quad::Options opt;
    opt.rel_tol = 1e-8;
    switch (family_) {
        case Family::Pareto: {
            const double a = pareto_.alpha, k = pareto_.k;
            double cut = k;
            auto rem1 = [&](double X) {
                return std::pow(k, a) * std::pow(X + k, 1.0 - a) / (a - 1.0);
            };
            auto rem2 = [&](double X) {
                return std::pow(k, 2.0 * a) * std::pow(X + k, 1.0 - 2.0 * a) /
                       (2.0 * a - 1.0);
            };
            while (rem1(cut) > 1e-12 * mean_) cut *= 2.0;
            const double head = quad::integrate_value(
                [&](double x) {
                    const double t = tail(x);
                    return t * (2.0 - t);
                },
                0.0, cut, opt);
            return head + 2.0 * rem1(cut) - rem2(cut);
        }
        case Family::Weibull: {
            const double inv_b = 1.0 / weibull_.beta;
            return inv_b * quad::integrate_value(
                               [&](double u) {
                                   const double e = std::exp(-u);
                                   return std::pow(u, inv_b - 1.0) * e * (2.0 - e);
                               },
                               0.0, 700.0, opt);
        }
        case Family::Lognormal: {
            const double mu = lognormal_.mu, s = lognormal_.sigma;
            const double z_lo = 0.5 * s - 40.0 / s - 5.0;
            const double z_hi = s + 45.0;
            return quad::integrate_value(
                [&](double z) {
                    const double t = std_normal_tail(z);
                    return t * (2.0 - t) * s * std::exp(mu + s * z);
                },
                z_lo, z_hi, opt);
        }
    }
    return 0.0;
}

double Marginal::integrate_against_density(
    const std::function<double(double)>& g, double lo, double hi,
    double rel_tol) const {
    if (hi <= lo) return 0.0;
    quad::Options opt;
    opt.rel_tol = rel_tol;
    switch (family_) {
        case Family::Pareto:
            return quad::integrate_value(
                [&](double t) { return g(t) * density(t); }, lo, hi, opt);
        case Family::Weibull: {
            const double b = weibull_.beta;
            const double u_lo = std::pow(lo, b);
            const double u_hi = std::min(std::pow(hi, b), 700.0);
            if (u_hi <= u_lo) return 0.0;
            return quad::integrate_value(
                [&](double u) {
                    return g(std::pow(u, 1.0 / b)) * std::exp(-u);
                },
                u_lo, u_hi, opt);
        }
        case Family::Lognormal: {
            const double mu = lognormal_.mu, s = lognormal_.sigma;
            const double z_lo =
                lo > 0.0 ? (std::log(lo) - mu) / s : -37.0;
            const double z_hi = std::min((std::log(hi) - mu) / s, 37.0);
            if (z_hi <= z_lo) return 0.0;
            return quad::integrate_value(
                [&](double z) {
                    return g(std::exp(mu + s * z)) * std_normal_pdf(z);
                },
                std::max(z_lo, -37.0), z_hi, opt);
        }
    }
    return 0.0;
}

double Marginal::convolution_tail(double x) const {
    check_x(x);
    if (x == 0.0) return 1.0;
    // P(X1+X2 > x) = 2*int_0^{x/2} [tail(x-t) - tail(x)] dF(t)
    //                + tail(x/2)^2 + 2*tail(x)*F(x/2)
    // written so every term stays positive and cancellation-free.
    const double half = tail(0.5 * x);
    const double t_x = tail(x);
    const double integral = integrate_against_density(
        [&](double t) { return local_mass(x - t, t); }, 0.0, 0.5 * x, 1e-8);
    const double num = 2.0 * integral + half * (half - 2.0 * t_x);
    return num + 2.0 * t_x;
}

double Marginal::s2_diagnostic(double x) const {
    check_x(x);
    const double mass = local_mass(x, 1.0);
    if (!(mass > 1e-280))
        throw std::runtime_error(
            "s2_diagnostic: local mass underflows at x = " + std::to_string(x));
    const double half = tail(0.5 * x);
    const double t_x = tail(x);
    const double integral = integrate_against_density(
        [&](double t) { return local_mass(x - t, t); }, 0.0, 0.5 * x, 1e-8);
    const double num = 2.0 * integral + half * (half - 2.0 * t_x);
    return num / (2.0 * mean_ * mass);
}

double Marginal::rv_density(double x) const {
    if (family_ != Family::Pareto)
        throw std::invalid_argument(
            "rv_density: only the Pareto family has a regularly varying "
            "density here");
    check_x(x);
    return density(x);
}

}  // namespace tailasym
