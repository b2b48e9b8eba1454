#ifndef TAILASYM_QUADRATURE_HPP
#define TAILASYM_QUADRATURE_HPP

#include <functional>
#include <span>
#include <vector>

namespace tailasym::quad {

struct Options {
    double abs_tol = 0.0;
    double rel_tol = 1e-10;
    int max_segments = 5000;
};

struct Result {
    double value = 0.0;
    double error = 0.0;     // estimated absolute error
    bool converged = true;
};

/// Globally adaptive Gauss-Kronrod (7,15) integration on a finite interval.
/// Subdivides the segment with the largest error estimate until the summed
/// error satisfies max(abs_tol, rel_tol*|value|) or max_segments is reached.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opt = {});

/// Convenience wrapper returning the value only.
double integrate_value(const std::function<double(double)>& f, double a, double b,
                       const Options& opt = {});

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
/// Computed once per n and cached; thread-safe.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(int n);

}  // namespace tailasym::quad

#endif
