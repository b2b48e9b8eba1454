#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tailasym/distributions.hpp"
#include "tailasym/quadrature.hpp"
#include "testutil.hpp"

using namespace tailasym;

namespace {

std::vector<Marginal> all_families() {
    return {Marginal::pareto(2.01, 1.0), Marginal::pareto(2.2, 4.0),
            Marginal::weibull(0.5), Marginal::lognormal(0.0, 1.0),
            Marginal::lognormal(0.5, 0.8)};
}

}  // namespace

TEST_SUITE("distributions") {

TEST_CASE("tail values") {
    const auto p = Marginal::pareto(2.01, 2.0);
    CHECK(p.tail(0.0) == 1.0);
    CHECK(p.tail(2.0) == doctest::Approx(std::pow(0.5, 2.01)).epsilon(1e-14));
    const auto w = Marginal::weibull(0.5);
    CHECK(w.tail(4.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    CHECK_THROWS_AS(p.tail(-1.0), std::domain_error);
}

TEST_CASE("local mass") {
    const auto p = Marginal::pareto(2.01, 2.0);
    CHECK_THROWS_AS(p.local_mass(1.0, 0.0), std::domain_error);
    CHECK(p.local_mass(5.0, 1e-13) < 1e-12);  // vanishing increment

    // against the plain tail difference in extended precision
    const long double a = 2.01L, k = 2.0L;
    auto tail_ld = [&](long double x) {
        return std::pow(k / (x + k), a);
    };
    const double expect = static_cast<double>(tail_ld(20.0L) - tail_ld(21.0L));
    CHECK(p.local_mass(20.0, 1.0) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(p.local_mass(20.0, 1.0) == doctest::Approx(7.22e-4).epsilon(2e-3));

    const auto w = Marginal::weibull(0.5);
    const double expect_w = std::exp(-10.0) - std::exp(-std::sqrt(101.0));
    CHECK(w.local_mass(100.0, 1.0) ==
          doctest::Approx(expect_w).epsilon(1e-10));

    // equals the quadrature of the density over (x, x+t]
    const double mass = p.local_mass(10.0, 2.5);
    quad::Options opt;
    opt.rel_tol = 1e-12;
    const double by_density = quad::integrate_value(
        [&](double t) { return p.density(t); }, 10.0, 12.5, opt);
    CHECK(mass == doctest::Approx(by_density).epsilon(1e-8));
}

TEST_CASE("means") {
    CHECK(Marginal::pareto(2.2, 4.0).mean() ==
          doctest::Approx(4.0 / 1.2).epsilon(1e-14));
    CHECK(Marginal::weibull(0.5).mean() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(Marginal::pareto(2.01, 1.0).mean() ==
          doctest::Approx(1.0 / 1.01).epsilon(1e-14));
    CHECK(Marginal::lognormal(0.0, 1.0).mean() ==
          doctest::Approx(std::exp(0.5)).epsilon(1e-14));
    CHECK_THROWS_AS(Marginal::pareto(0.9, 1.0), std::invalid_argument);
}

TEST_CASE("mean of the squared distribution") {
    CHECK(Marginal::pareto(2.01, 1.0).mean_of_square_dist() ==
          doctest::Approx(2.0 / 1.01 - 1.0 / 3.02).epsilon(1e-14));
    CHECK(Marginal::weibull(0.5).mean_of_square_dist() ==
          doctest::Approx(3.5).epsilon(1e-12));
    for (const auto& m : all_families())
        CHECK(m.mean_of_square_dist() >= m.mean());
}

TEST_CASE("closed-form moments match the quadrature fallbacks") {
    for (const auto& m : all_families()) {
        CHECK(testutil::close_rel(m.mean(), m.mean_by_quadrature(), 1e-8));
        CHECK(testutil::close_rel(m.mean_of_square_dist(),
                                  m.mean_of_square_dist_by_quadrature(),
                                  1e-7));
    }
}

TEST_CASE("tail + cdf identity on a log grid") {
    for (const auto& m : all_families())
        for (double x = 1e-3; x < 1e6; x *= 10.0)
            CHECK(std::fabs(m.tail(x) + m.cdf(x) - 1.0) < 1e-14);
}

TEST_CASE("quantile round trip") {
    const auto p = Marginal::pareto(2.01, 2.0);
    const auto w = Marginal::weibull(0.5);
    const auto l = Marginal::lognormal(0.3, 1.2);
    for (double x : {0.1, 1.0, 5.0, 40.0, 300.0})
        CHECK(testutil::close_rel(p.quantile(p.cdf(x)), x, 1e-10));
    // the weibull cdf saturates early; stay on interior points
    for (double x : {0.1, 1.0, 5.0, 40.0})
        CHECK(testutil::close_rel(w.quantile(w.cdf(x)), x, 1e-10));
    for (double x : {0.1, 1.0, 5.0, 40.0, 300.0})
        CHECK(testutil::close_abs(l.quantile(l.cdf(x)), x, 1e-9 * (1.0 + x)));
    CHECK_THROWS_AS(p.quantile(0.0), std::domain_error);
    CHECK_THROWS_AS(p.quantile(1.0), std::domain_error);
}

TEST_CASE("inverse standard normal") {
    CHECK(std::fabs(inverse_standard_normal_cdf(0.5)) < 1e-15);
    // negative z keeps p away from 1, so the round trip stays exact
    for (double z : {-6.0, -2.5, -1.3, -0.2}) {
        const double p = 0.5 * std::erfc(-z / std::sqrt(2.0));
        CHECK(inverse_standard_normal_cdf(p) ==
              doctest::Approx(z).epsilon(1e-11));
    }
    for (double p : {0.3, 0.6, 0.9})
        CHECK(std::fabs(inverse_standard_normal_cdf(p) +
                        inverse_standard_normal_cdf(1.0 - p)) < 1e-13);
}

TEST_CASE("self-convolution ratio: Pareto regression fixtures") {
    const auto p = Marginal::pareto(2.01, 1.0);
    auto tail_ld = [](long double x) { return std::pow(1.0L / (x + 1.0L), 2.01L); };
    auto dens_ld = [](long double x) {
        return 2.01L * std::pow(1.0L / (x + 1.0L), 3.01L);
    };
    // fixtures from the Simpson reference below
    const double fixtures[4][2] = {
        {50.0, 1.144953}, {100.0, 1.094843}, {200.0, 1.058233},
        {400.0, 1.034360}};
    double prev_gap = 1e9;
    for (const auto& [x, expected] : fixtures) {
        const double ratio = p.s2_diagnostic(x);
        CHECK(ratio == doctest::Approx(expected).epsilon(1e-3));
        const double oracle =
            static_cast<double>(testutil::conv_excess_simpson(
                tail_ld, dens_ld, static_cast<long double>(x))) /
            (2.0 * p.mean() * p.local_mass(x, 1.0));
        CHECK(ratio == doctest::Approx(oracle).epsilon(2e-4));
        const double gap = std::fabs(ratio - 1.0);
        CHECK(gap < prev_gap);  // moves toward 1 along the grid
        prev_gap = gap;
    }
}

TEST_CASE("self-convolution ratio: other families") {
    // reference values from a 40-digit adaptive integrator
    const auto w = Marginal::weibull(0.5);
    CHECK(w.s2_diagnostic(400.0) == doctest::Approx(1.2543254).epsilon(5e-4));
    const auto l = Marginal::lognormal(0.0, 1.0);
    CHECK(l.s2_diagnostic(400.0) == doctest::Approx(1.0522162).epsilon(5e-4));

    // each family's ratio trend approaches 1 on a family-appropriate grid
    struct Case {
        Marginal m;
        std::vector<double> grid;
    };
    const std::vector<Case> cases = {
        {Marginal::pareto(2.01, 1.0), {50, 100, 200, 400}},
        {Marginal::lognormal(0.0, 1.0), {50, 100, 200, 400}},
        {Marginal::weibull(0.5), {400, 1000, 3000}},
    };
    for (const auto& c : cases) {
        double prev_gap = 1e9, last = 0.0;
        for (double x : c.grid) {
            last = std::fabs(c.m.s2_diagnostic(x) - 1.0);
            CHECK(last < prev_gap);
            prev_gap = last;
        }
        CHECK(last < 0.15);
    }
}

TEST_CASE("convolution tail dominates the single tail") {
    for (const auto& m :
         {Marginal::pareto(2.01, 1.0), Marginal::weibull(0.5)})
        for (double x : {0.5, 2.0, 10.0, 80.0})
            CHECK(m.convolution_tail(x) >= m.tail(x));
}

TEST_CASE("regularly varying density") {
    const auto p = Marginal::pareto(2.01, 2.0);
    CHECK(p.rv_density(0.0) == doctest::Approx(2.01 / 2.0).epsilon(1e-14));
    quad::Options opt;
    opt.rel_tol = 1e-10;
    double cut = 2.0;
    while (p.tail(cut) > 1e-13) cut *= 2.0;  // integral beyond = tail(cut)
    const double total = quad::integrate_value(
        [&](double x) { return p.rv_density(x); }, 0.0, cut, opt);
    CHECK(total + p.tail(cut) == doctest::Approx(1.0).epsilon(1e-9));

    // density approximates the unit local mass far out
    double prev = 1e9;
    for (double x : {1e2, 1e3, 1e4}) {
        const double rel = std::fabs(p.rv_density(x) / p.local_mass(x, 1.0) - 1.0);
        CHECK(rel < prev);
        prev = rel;
    }
    CHECK(prev < 2e-3);

    CHECK_THROWS_AS(Marginal::weibull(0.5).rv_density(1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(Marginal::lognormal(0, 1).rv_density(1.0),
                    std::invalid_argument);
}

}  // TEST_SUITE
