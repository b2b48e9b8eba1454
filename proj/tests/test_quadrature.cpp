#include <doctest.h>

#include <cmath>

#include "tailasym/quadrature.hpp"

using namespace tailasym;

TEST_SUITE("quadrature") {

TEST_CASE("polynomials and smooth integrands") {
    auto r = quad::integrate([](double x) { return x * x; }, 0.0, 1.0);
    CHECK(r.converged);
    CHECK(std::fabs(r.value - 1.0 / 3.0) < 1e-14);

    r = quad::integrate([](double x) { return std::exp(-x); }, 0.0, 30.0);
    CHECK(std::fabs(r.value - (1.0 - std::exp(-30.0))) < 1e-12);

    r = quad::integrate([](double x) { return std::sin(x); }, 0.0, M_PI);
    CHECK(std::fabs(r.value - 2.0) < 1e-12);
}

TEST_CASE("reversed limits flip the sign") {
    const double fwd =
        quad::integrate_value([](double x) { return x; }, 0.0, 2.0);
    const double rev =
        quad::integrate_value([](double x) { return x; }, 2.0, 0.0);
    CHECK(fwd == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(rev == doctest::Approx(-2.0).epsilon(1e-14));
}

TEST_CASE("integrable endpoint singularity") {
    quad::Options opt;
    opt.rel_tol = 1e-9;
    auto r = quad::integrate([](double x) { return 1.0 / std::sqrt(x); },
                             1e-300, 1.0, opt);
    CHECK(std::fabs(r.value - 2.0) < 1e-7);
}

TEST_CASE("gauss-legendre rule") {
    const auto& rule = quad::gauss_legendre(32);
    REQUIRE(rule.nodes.size() == 32);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    // symmetry
    for (int i = 0; i < 16; ++i) {
        CHECK(rule.nodes[i] == doctest::Approx(-rule.nodes[31 - i]).epsilon(1e-14));
        CHECK(rule.weights[i] == doctest::Approx(rule.weights[31 - i]).epsilon(1e-14));
    }
    // exact for polynomials up to degree 63; spot-check x^10 on [-1,1]
    double acc = 0.0;
    for (int i = 0; i < 32; ++i)
        acc += rule.weights[i] * std::pow(rule.nodes[i], 10);
    CHECK(acc == doctest::Approx(2.0 / 11.0).epsilon(1e-13));
}

}  // TEST_SUITE
