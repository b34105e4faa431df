#pragma once

#include <functional>
#include <vector>

namespace gpswf::specfun {

// Nodes and weights integrating against (1-y^2)^alpha on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;    // strictly increasing, symmetric about 0
  std::vector<double> weights;  // positive
  double alpha = 0.0;

  std::size_t size() const noexcept { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

// N-point Gauss-Jacobi rule for the symmetric weight (1-y^2)^alpha, exact
// for polynomials of degree <= 2N-1.
QuadratureRule gauss_jacobi(int n, double alpha);

// Plain Gauss-Legendre on [a, b].
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

// Adaptive 15-point Gauss-Kronrod on [a, b] with absolute tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol = 1e-13);

}  // namespace gpswf::specfun
