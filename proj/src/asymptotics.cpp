#include "tailasym/asymptotics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace tailasym {

namespace {

using Kind = ActiveCoord::Kind;

// Evaluates expectations over the weight law, dispatching between the
// deterministic tensor quadrature (IidUniform) and seeded Monte Carlo.
// Each Monte Carlo term gets its own derived sub-seed so a fixed options
// seed pins the whole evaluation.
class Expector {
  public:
    Expector(const WeightModel& wm, const ExpectOptions& opt,
             std::uint64_t salt)
        : wm_(wm), opt_(opt), salt_(salt) {
        use_quadrature_ =
            opt.path == ExpectOptions::Path::Quadrature ||
            (opt.path == ExpectOptions::Path::Auto &&
             wm.variant() == WeightVariant::IidUniform);
        if (opt.path == ExpectOptions::Path::Quadrature &&
            wm.variant() != WeightVariant::IidUniform)
            throw std::invalid_argument(
                "ExpectOptions: quadrature path requires IidUniform weights");
    }

    double operator()(std::initializer_list<ActiveCoord> active,
                      const std::function<double(const WeightSample&)>& fn) {
        const std::uint64_t term_seed =
            mix_seed(mix_seed(opt_.seed ^ salt_) + counter_);
        ++counter_;
        if (use_quadrature_)
            return weight_expectation_quadrature(
                wm_, std::span<const ActiveCoord>(active.begin(), active.size()),
                fn);
        const MeanStderr r =
            weight_expectation(wm_, fn, opt_.n_mc, term_seed, opt_.exec);
        stderr2_ += r.stderr_ * r.stderr_;
        return r.mean;
    }

    double accumulated_stderr() const { return std::sqrt(stderr2_); }

  private:
    const WeightModel& wm_;
    ExpectOptions opt_;
    std::uint64_t salt_ = 0;
    bool use_quadrature_ = false;
    int counter_ = 0;
    double stderr2_ = 0.0;
};

void check_positive(double v, const char* name) {
    if (!(v > 0.0))
        throw std::domain_error(std::string(name) + " must be > 0");
}

}  // namespace

ModelSpec::ModelSpec(FgmPair p, WeightModel w)
    : pair(std::move(p)), weights(std::move(w)) {}

AsymptoticEstimate joint_asy1(const ModelSpec& ms, double x, double y,
                              const ExpectOptions& opt) {
    check_positive(x, "x");
    check_positive(y, "y");
    Expector expect(ms.weights, opt, 0xA1);
    const Marginal& F = ms.pair.margin_x();
    const Marginal& G = ms.pair.margin_y();
    double total = 0.0;
    for (int i = 0; i < ms.n(); ++i) {
        for (int j = 0; j < ms.m(); ++j) {
            const bool coupled = (i == j);
            total += expect({{Kind::Theta, i}, {Kind::BigTheta, j}},
                            [&, i, j, coupled](const WeightSample& w) {
                                const double xc = x / w.theta[i];
                                const double yd = y / w.big_theta[j];
                                if (coupled) return ms.pair.joint_tail(xc, yd);
                                return F.tail(xc) * G.tail(yd);
                            });
        }
    }
    AsymptoticEstimate est;
    est.order = Order::First;
    est.first_order = total;
    est.terms = {{"pair_tails", total}};
    est.mc_stderr = expect.accumulated_stderr();
    return est;
}

AsymptoticEstimate joint_asy2(const ModelSpec& ms, double x, double y,
                              const ExpectOptions& opt) {
    AsymptoticEstimate est = joint_asy1(ms, x, y, opt);
    est.order = Order::Second;

    Expector expect(ms.weights, opt, 0xA2);
    const Marginal& F = ms.pair.margin_x();
    const Marginal& G = ms.pair.margin_y();
    const double r = ms.pair.r();
    const int n = ms.n(), m = ms.m();
    const int nm = std::min(n, m);

    // P(theta_i X_i > x, Theta_j Y_j in (y, y+1]) given the weights
    auto rect_y = [&](const WeightSample& w, int i, int j) {
        const double xc = x / w.theta[i];
        const double d = w.big_theta[j];
        if (i == j) return ms.pair.joint_rect_y(xc, y / d, (y + 1.0) / d);
        return F.tail(xc) * G.local_mass(y / d, 1.0 / d);
    };
    // P(theta_i X_i in (x, x+1], Theta_j Y_j > y) given the weights
    auto rect_x = [&](const WeightSample& w, int i, int j) {
        const double c = w.theta[i];
        const double yd = y / w.big_theta[j];
        if (i == j) return ms.pair.joint_rect_x(x / c, (x + 1.0) / c, yd);
        return F.local_mass(x / c, 1.0 / c) * G.tail(yd);
    };

    double strip_y = 0.0, strip_x = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int l = 0; l < m; ++l) {
                if (l == j) continue;
                strip_y += expect(
                    {{Kind::Theta, i}, {Kind::BigTheta, j}, {Kind::BigTheta, l}},
                    [&, i, j, l](const WeightSample& w) {
                        return w.big_theta[l] * rect_y(w, i, j);
                    });
            }
            for (int l = 0; l < n; ++l) {
                if (l == i) continue;
                strip_x += expect(
                    {{Kind::Theta, i}, {Kind::BigTheta, j}, {Kind::Theta, l}},
                    [&, i, j, l](const WeightSample& w) {
                        return w.theta[l] * rect_x(w, i, j);
                    });
            }
        }
    }
    strip_y *= G.mean();
    strip_x *= F.mean();

    // dependence group over ordered off-diagonal pairs; the pair events mix
    // different indices, hence plain products of marginal quantities
    double dep_y = 0.0, dep_x = 0.0;
    if (r != 0.0) {
        for (int i = 0; i < nm; ++i) {
            for (int j = 0; j < nm; ++j) {
                if (i == j) continue;
                dep_y += expect(
                    {{Kind::Theta, j}, {Kind::BigTheta, i}, {Kind::BigTheta, j}},
                    [&, i, j](const WeightSample& w) {
                        const double d = w.big_theta[i];
                        return w.big_theta[j] * F.tail(x / w.theta[j]) *
                               G.local_mass(y / d, 1.0 / d);
                    });
                dep_x += expect(
                    {{Kind::Theta, i}, {Kind::Theta, j}, {Kind::BigTheta, j}},
                    [&, i, j](const WeightSample& w) {
                        const double c = w.theta[i];
                        return w.theta[j] * F.local_mass(x / c, 1.0 / c) *
                               G.tail(y / w.big_theta[j]);
                    });
            }
        }
        dep_y *= r * (G.mean_of_square_dist() - G.mean());
        dep_x *= r * (F.mean_of_square_dist() - F.mean());
    }

    est.second_order_correction = strip_y + strip_x + dep_y + dep_x;
    est.terms.push_back({"strip_y", strip_y});
    est.terms.push_back({"strip_x", strip_x});
    est.terms.push_back({"dependence_y", dep_y});
    est.terms.push_back({"dependence_x", dep_x});
    est.mc_stderr = std::hypot(est.mc_stderr, expect.accumulated_stderr());
    return est;
}

AsymptoticEstimate sum_asy1(const ModelSpec& ms, double z,
                            const ExpectOptions& opt) {
    check_positive(z, "z");
    Expector expect(ms.weights, opt, 0x51);
    const Marginal& F = ms.pair.margin_x();
    const Marginal& G = ms.pair.margin_y();
    double tails_x = 0.0, tails_y = 0.0;
    for (int i = 0; i < ms.n(); ++i)
        tails_x += expect({{Kind::Theta, i}}, [&, i](const WeightSample& w) {
            return F.tail(z / w.theta[i]);
        });
    for (int j = 0; j < ms.m(); ++j)
        tails_y += expect({{Kind::BigTheta, j}}, [&, j](const WeightSample& w) {
            return G.tail(z / w.big_theta[j]);
        });
    AsymptoticEstimate est;
    est.order = Order::First;
    est.first_order = tails_x + tails_y;
    est.terms = {{"tails_x", tails_x}, {"tails_y", tails_y}};
    est.mc_stderr = expect.accumulated_stderr();
    return est;
}

AsymptoticEstimate sum_asy2(const ModelSpec& ms, double z,
                            const ExpectOptions& opt) {
    AsymptoticEstimate est = sum_asy1(ms, z, opt);
    est.order = Order::Second;

    Expector expect(ms.weights, opt, 0x52);
    const Marginal& F = ms.pair.margin_x();
    const Marginal& G = ms.pair.margin_y();
    const double r = ms.pair.r();
    const int n = ms.n(), m = ms.m();
    const int nm = std::min(n, m);

    const double ratio = F.local_mass(z, 1.0) / G.local_mass(z, 1.0);
    if (!(ratio >= 0.1 && ratio <= 10.0))
        est.warnings.push_back(
            "local-mass ratio F(z,z+1]/G(z,z+1] = " + std::to_string(ratio) +
            " lies outside [0.1, 10]; the sum expansion assumes comparable "
            "marginal local masses");

    auto mass_x = [&](const WeightSample& w, int l) {
        const double c = w.theta[l];
        return F.local_mass(z / c, 1.0 / c);
    };
    auto mass_y = [&](const WeightSample& w, int l) {
        const double d = w.big_theta[l];
        return G.local_mass(z / d, 1.0 / d);
    };

    double within_x = 0.0, within_y = 0.0;
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l) {
            if (l == i) continue;
            within_x += expect({{Kind::Theta, i}, {Kind::Theta, l}},
                               [&, i, l](const WeightSample& w) {
                                   return w.theta[i] * mass_x(w, l);
                               });
        }
    for (int j = 0; j < m; ++j)
        for (int l = 0; l < m; ++l) {
            if (l == j) continue;
            within_y += expect({{Kind::BigTheta, j}, {Kind::BigTheta, l}},
                               [&, j, l](const WeightSample& w) {
                                   return w.big_theta[j] * mass_y(w, l);
                               });
        }
    within_x *= F.mean();
    within_y *= G.mean();

    double cross = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            cross += F.mean() * expect({{Kind::Theta, i}, {Kind::BigTheta, j}},
                                       [&, i, j](const WeightSample& w) {
                                           return w.theta[i] * mass_y(w, j);
                                       });
            cross += G.mean() * expect({{Kind::Theta, i}, {Kind::BigTheta, j}},
                                       [&, i, j](const WeightSample& w) {
                                           return w.big_theta[j] * mass_x(w, i);
                                       });
        }

    double dep = 0.0;
    if (r != 0.0) {
        for (int i = 0; i < nm; ++i) {
            dep += (F.mean_of_square_dist() - F.mean()) *
                   expect({{Kind::Theta, i}, {Kind::BigTheta, i}},
                          [&, i](const WeightSample& w) {
                              return w.theta[i] * mass_y(w, i);
                          });
            dep += (G.mean_of_square_dist() - G.mean()) *
                   expect({{Kind::Theta, i}, {Kind::BigTheta, i}},
                          [&, i](const WeightSample& w) {
                              return w.big_theta[i] * mass_x(w, i);
                          });
        }
        dep *= r;
    }

    est.second_order_correction = within_x + within_y + cross + dep;
    est.terms.push_back({"within_x", within_x});
    est.terms.push_back({"within_y", within_y});
    est.terms.push_back({"cross", cross});
    est.terms.push_back({"dependence", dep});
    est.mc_stderr = std::hypot(est.mc_stderr, expect.accumulated_stderr());
    return est;
}

namespace {

void require_rv_margins(const ModelSpec& ms, bool same_index) {
    const Marginal& F = ms.pair.margin_x();
    const Marginal& G = ms.pair.margin_y();
    if (F.family() != Family::Pareto || G.family() != Family::Pareto)
        throw std::invalid_argument(
            "density-based expansion: both margins must be Pareto");
    const double a = F.pareto_params().alpha;
    const double b = G.pareto_params().alpha;
    if (!(a > 2.0 && b > 2.0))
        throw std::invalid_argument(
            "density-based expansion: tail indices must exceed 2");
    if (same_index && a != b)
        throw std::invalid_argument(
            "density-based sum expansion: margins must share one tail index");
}

}  // namespace

AsymptoticEstimate joint_asy2_rv(const ModelSpec& ms, double x, double y,
                                 const ExpectOptions& opt) {
    require_rv_margins(ms, false);
    AsymptoticEstimate est = joint_asy1(ms, x, y, opt);
    est.order = Order::Second;

    Expector expect(ms.weights, opt, 0xC1);
    const Marginal& F = ms.pair.margin_x();
    const Marginal& G = ms.pair.margin_y();
    const double alpha = F.pareto_params().alpha;
    const double beta = G.pareto_params().alpha;
    const double f_x = F.rv_density(x);
    const double g_y = G.rv_density(y);
    const double r = ms.pair.r();
    const int n = ms.n(), m = ms.m();
    const int nm = std::min(n, m);

    double strip_y = 0.0, strip_x = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int l = 0; l < m; ++l) {
                if (l == j) continue;
                strip_y += expect(
                    {{Kind::Theta, i}, {Kind::BigTheta, j}, {Kind::BigTheta, l}},
                    [&, i, j, l](const WeightSample& w) {
                        return w.big_theta[l] *
                               std::pow(w.big_theta[j], beta) *
                               F.tail(x / w.theta[i]);
                    });
            }
            for (int l = 0; l < n; ++l) {
                if (l == i) continue;
                strip_x += expect(
                    {{Kind::Theta, i}, {Kind::BigTheta, j}, {Kind::Theta, l}},
                    [&, i, j, l](const WeightSample& w) {
                        return w.theta[l] * std::pow(w.theta[i], alpha) *
                               G.tail(y / w.big_theta[j]);
                    });
            }
        }
    }
    strip_y *= G.mean() * g_y;
    strip_x *= F.mean() * f_x;

    double diag_y = 0.0, diag_x = 0.0, dep_y = 0.0, dep_x = 0.0;
    if (r != 0.0) {
        for (int i = 0; i < nm; ++i) {
            for (int j = 0; j < nm; ++j) {
                if (i == j) continue;
                diag_y += expect(
                    {{Kind::BigTheta, i}, {Kind::BigTheta, j}, {Kind::Theta, j}},
                    [&, i, j](const WeightSample& w) {
                        return w.big_theta[i] * std::pow(w.big_theta[j], beta) *
                               F.tail(x / w.theta[j]);
                    });
                diag_x += expect(
                    {{Kind::Theta, j}, {Kind::Theta, i}, {Kind::BigTheta, i}},
                    [&, i, j](const WeightSample& w) {
                        return w.theta[j] * std::pow(w.theta[i], alpha) *
                               G.tail(y / w.big_theta[i]);
                    });
                dep_y += expect(
                    {{Kind::BigTheta, i}, {Kind::BigTheta, j}, {Kind::Theta, i}},
                    [&, i, j](const WeightSample& w) {
                        return w.big_theta[i] * std::pow(w.big_theta[j], beta) *
                               F.tail(x / w.theta[i]);
                    });
                dep_x += expect(
                    {{Kind::Theta, j}, {Kind::Theta, i}, {Kind::BigTheta, i}},
                    [&, i, j](const WeightSample& w) {
                        return w.theta[j] * std::pow(w.theta[i], alpha) *
                               G.tail(y / w.big_theta[i]);
                    });
            }
        }
        diag_y *= r * G.mean() * g_y;
        diag_x *= r * F.mean() * f_x;
        dep_y *= r * (G.mean_of_square_dist() - G.mean()) * g_y;
        dep_x *= r * (F.mean_of_square_dist() - F.mean()) * f_x;
    }

    est.second_order_correction =
        strip_y + strip_x + diag_y + diag_x + dep_y + dep_x;
    est.terms.push_back({"strip_y", strip_y});
    est.terms.push_back({"strip_x", strip_x});
    est.terms.push_back({"fgm_diag_y", diag_y});
    est.terms.push_back({"fgm_diag_x", diag_x});
    est.terms.push_back({"dependence_y", dep_y});
    est.terms.push_back({"dependence_x", dep_x});
    est.mc_stderr = std::hypot(est.mc_stderr, expect.accumulated_stderr());
    return est;
}

AsymptoticEstimate sum_asy2_rv(const ModelSpec& ms, double z,
                               const ExpectOptions& opt) {
    require_rv_margins(ms, true);
    AsymptoticEstimate est = sum_asy1(ms, z, opt);
    est.order = Order::Second;

    Expector expect(ms.weights, opt, 0xC2);
    const Marginal& F = ms.pair.margin_x();
    const Marginal& G = ms.pair.margin_y();
    const double alpha = F.pareto_params().alpha;
    const double f_z = F.rv_density(z);
    const double g_z = G.rv_density(z);
    const double r = ms.pair.r();
    const int n = ms.n(), m = ms.m();
    const int nm = std::min(n, m);

    double within_x = 0.0, within_y = 0.0;
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l) {
            if (l == i) continue;
            within_x += expect({{Kind::Theta, i}, {Kind::Theta, l}},
                               [&, i, l](const WeightSample& w) {
                                   return w.theta[i] *
                                          std::pow(w.theta[l], alpha);
                               });
        }
    for (int j = 0; j < m; ++j)
        for (int l = 0; l < m; ++l) {
            if (l == j) continue;
            within_y += expect({{Kind::BigTheta, j}, {Kind::BigTheta, l}},
                               [&, j, l](const WeightSample& w) {
                                   return w.big_theta[j] *
                                          std::pow(w.big_theta[l], alpha);
                               });
        }
    within_x *= F.mean() * f_z;
    within_y *= G.mean() * g_z;

    double cross = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            cross += F.mean() * g_z *
                     expect({{Kind::Theta, i}, {Kind::BigTheta, j}},
                            [&, i, j](const WeightSample& w) {
                                return w.theta[i] *
                                       std::pow(w.big_theta[j], alpha);
                            });
            cross += G.mean() * f_z *
                     expect({{Kind::Theta, i}, {Kind::BigTheta, j}},
                            [&, i, j](const WeightSample& w) {
                                return std::pow(w.theta[i], alpha) *
                                       w.big_theta[j];
                            });
        }

    double dep = 0.0;
    if (r != 0.0) {
        for (int i = 0; i < nm; ++i) {
            dep += (F.mean_of_square_dist() - F.mean()) * g_z *
                   expect({{Kind::Theta, i}, {Kind::BigTheta, i}},
                          [&, i](const WeightSample& w) {
                              return w.theta[i] *
                                     std::pow(w.big_theta[i], alpha);
                          });
            dep += (G.mean_of_square_dist() - G.mean()) * f_z *
                   expect({{Kind::Theta, i}, {Kind::BigTheta, i}},
                          [&, i](const WeightSample& w) {
                              return std::pow(w.theta[i], alpha) *
                                     w.big_theta[i];
                          });
        }
        dep *= r;
    }

    est.second_order_correction = within_x + within_y + cross + dep;
    est.terms.push_back({"within_x", within_x});
    est.terms.push_back({"within_y", within_y});
    est.terms.push_back({"cross", cross});
    est.terms.push_back({"dependence", dep});
    est.mc_stderr = std::hypot(est.mc_stderr, expect.accumulated_stderr());
    return est;
}

AsymptoticEstimate risk_joint_asy2(const FgmPair& pair, double factor_lo,
                                   double factor_hi, int horizon, double x,
                                   double y, const ExpectOptions& opt) {
    ModelSpec ms(pair, WeightModel::discount_product(factor_lo, factor_hi,
                                                     horizon, horizon));
    return joint_asy2(ms, x, y, opt);
}

AsymptoticEstimate risk_sum_asy2(const FgmPair& pair, double factor_lo,
                                 double factor_hi, int horizon, double x,
                                 double y, const ExpectOptions& opt) {
    check_positive(x, "x");
    check_positive(y, "y");
    ModelSpec ms(pair, WeightModel::discount_product(factor_lo, factor_hi,
                                                     horizon, horizon));
    return sum_asy2(ms, x + y, opt);
}

}  // namespace tailasym
