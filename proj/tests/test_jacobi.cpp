#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/jacobi.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "gpswf/errors.hpp"
#include "gpswf/jacobi.hpp"
#include "gpswf/linalg.hpp"
#include "gpswf/quadrature.hpp"
#include "oracles.hpp"

using namespace gpswf::specfun;

TEST_CASE("Jacobi polynomials against boost") {
  for (double a : {0.0, 0.5, 1.0, 1.4}) {
    for (double b : {0.0, 0.5, 1.4}) {
      for (int n : {0, 1, 2, 5, 17, 40}) {
        for (double x : {-1.0, -0.73, 0.0, 0.31, 0.9, 1.0}) {
          const double ref = boost::math::jacobi(static_cast<unsigned>(n), a, b, x);
          CHECK(std::fabs(jacobi_p({a, b, n}, x) - ref) < 1e-12 * std::max(1.0, std::fabs(ref)));
        }
      }
    }
  }
}

TEST_CASE("P_1 has the standard closed form") {
  for (double a : {0.0, 0.7}) {
    for (double b : {0.0, 1.2}) {
      for (double x : {-0.5, 0.25, 1.0}) {
        CHECK(jacobi_p({a, b, 1}, x) == doctest::Approx(0.5 * (a + b + 2.0) * x + 0.5 * (a - b)));
      }
    }
  }
}

TEST_CASE("norm against direct quadrature") {
  for (double a : {0.0, 0.5, 1.0}) {
    for (int n : {0, 3, 10}) {
      const auto rule = gauss_jacobi(n + 5, a);
      const double direct = rule.integrate([&](double y) {
        const double p = jacobi_p({a, a, n}, y);
        return p * p;
      });
      CHECK(jacobi_norm_sq({a, a, n}) == doctest::Approx(direct).epsilon(1e-13));
    }
  }
  // beta != alpha: closed form 2^{a+b+1} G(n+a+1) G(n+b+1) / ((2n+a+b+1) n! G(n+a+b+1))
  const double a = 0.5, b = 1.5;
  const int n = 4;
  const double closed = std::pow(2.0, a + b + 1) * std::tgamma(n + a + 1) * std::tgamma(n + b + 1) /
                        ((2 * n + a + b + 1) * std::tgamma(n + 1.0) * std::tgamma(n + a + b + 1));
  CHECK(jacobi_norm_sq({a, b, n}) == doctest::Approx(closed).epsilon(1e-13));
}

TEST_CASE("derivative against boost") {
  for (double a : {0.0, 0.5, 1.4}) {
    for (int n : {1, 7, 20}) {
      for (double x : {-0.8, 0.1, 0.6, 1.0}) {
        const double ref = boost::math::jacobi_derivative(static_cast<unsigned>(n), a, 1.0, x, 1u);
        CHECK(std::fabs(jacobi_p_deriv({a, 1.0, n}, x) - ref) < 1e-12 * std::max(1.0, std::fabs(ref)));
      }
    }
  }
}

TEST_CASE("orthonormal basis is orthonormal under the Gauss-Jacobi rule") {
  for (double a : {-0.5, 0.0, 0.5, 1.0, 1.4, 3.0}) {
    const OrthonormalJacobi basis(a);
    const int m = 30;
    const auto rule = gauss_jacobi(m + 2, a);
    for (int j = 0; j < m; j += 3) {
      for (int k = j; k < m; k += 4) {
        const double ip = rule.integrate([&](double y) { return basis.eval(j, y) * basis.eval(k, y); });
        CHECK(std::fabs(ip - (j == k ? 1.0 : 0.0)) < 1e-13);
      }
    }
    CHECK(basis.mass() == doctest::Approx(std::pow(2.0, 2 * a + 1) * boost::math::beta(a + 1, a + 1)));
    CHECK(basis.p0() == doctest::Approx(1.0 / std::sqrt(basis.mass())));
  }
}

TEST_CASE("orthonormal basis agrees with normalized classical polynomials") {
  const OrthonormalJacobi basis(0.75);
  for (int k : {0, 1, 4, 13}) {
    for (double x : {-0.9, 0.0, 0.55, 1.0}) {
      CHECK(basis.eval(k, x) == doctest::Approx(jacobi_p_normalized({0.75, 0.75, k}, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("Clenshaw sum equals the explicit sum") {
  const OrthonormalJacobi basis(0.5);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c(25);
  for (auto& v : c) v = u(rng);
  std::vector<double> p(c.size());
  for (double x : {-1.0, -0.3, 0.2, 0.99, 1.0}) {
    basis.eval_all(x, p);
    double s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * p[k];
    CHECK(basis.clenshaw(c, x) == doctest::Approx(s).epsilon(1e-13));
  }
}

TEST_CASE("derivative coefficients") {
  const double a = 0.5;
  const OrthonormalJacobi b0(a);
  const OrthonormalJacobi b1(a + 1.0);
  std::vector<double> c = {0.3, -0.2, 0.7, 0.1, -0.4, 0.25};
  const auto d = b0.derivative_coefficients(c);
  for (double x : {-0.7, 0.0, 0.45}) {
    const double h = 1e-6;
    const double fd = (b0.clenshaw(c, x + h) - b0.clenshaw(c, x - h)) / (2 * h);
    CHECK(b1.clenshaw(d, x) == doctest::Approx(fd).epsilon(1e-8));
  }
}

TEST_CASE("Gauss-Jacobi integrates polynomials exactly") {
  for (double a : {-0.5, 0.0, 0.5, 1.0, 1.4}) {
    const int n = 12;
    const auto rule = gauss_jacobi(n, a);
    CHECK(rule.size() == static_cast<std::size_t>(n));
    for (int k = 0; k <= 2 * n - 1; k += 2) {
      // int x^k (1-x^2)^a = B((k+1)/2, a+1)
      const double exact = boost::math::beta((k + 1) / 2.0, a + 1.0);
      const double q = rule.integrate([&](double y) { return std::pow(y, k); });
      CHECK(q == doctest::Approx(exact).epsilon(1e-13));
    }
    for (std::size_t i = 0; i < rule.size(); ++i) {
      CHECK(rule.weights[i] > 0.0);
      CHECK(rule.nodes[i] == doctest::Approx(-rule.nodes[rule.size() - 1 - i]).epsilon(1e-15));
      if (i) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
    }
  }
}

TEST_CASE("alpha = 0 rule equals Gauss-Legendre found by Newton iteration") {
  for (int n : {5, 20, 64, 300}) {
    const auto rule = gauss_jacobi(n, 0.0);
    const auto ref = oracle::legendre_newton(n);
    for (int i = 0; i < n; ++i) {
      CHECK(std::fabs(rule.nodes[i] - ref.x[i]) < 1e-14);
      CHECK(std::fabs(rule.weights[i] - ref.w[i]) < 1e-14);
    }
  }
}

TEST_CASE("Gauss-Legendre on an interval and adaptive integration") {
  const auto rule = gauss_legendre(10, 1.0, 3.0);
  CHECK(rule.integrate([](double x) { return x * x; }) == doctest::Approx(26.0 / 3.0).epsilon(1e-14));
  CHECK(integrate_adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-13) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(integrate_adaptive([](double x) { return std::cos(50 * x); }, 0.0, 2.0) ==
        doctest::Approx(std::sin(100.0) / 50.0).epsilon(1e-11));
  CHECK_THROWS(gauss_jacobi(0, 0.5));
}

TEST_CASE("tridiagonal QL against Eigen") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int n : {1, 2, 7, 40}) {
    std::vector<double> d(n), e(n > 0 ? n - 1 : 0);
    for (auto& v : d) v = u(rng);
    for (auto& v : e) v = u(rng);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = d[i];
    for (int i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = e[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const auto full = gpswf::linalg::tridiagonal_eigen(d, e, gpswf::linalg::Vectors::full);
    const auto first = gpswf::linalg::tridiagonal_eigen(d, e, gpswf::linalg::Vectors::first_row);
    const auto none = gpswf::linalg::tridiagonal_eigen(d, e, gpswf::linalg::Vectors::none);
    for (int j = 0; j < n; ++j) {
      CHECK(full.values[j] == doctest::Approx(es.eigenvalues()[j]).epsilon(1e-13));
      CHECK(none.values[j] == doctest::Approx(es.eigenvalues()[j]).epsilon(1e-13));
      CHECK(std::fabs(std::fabs(full.vector(0, j)) - std::fabs(es.eigenvectors()(0, j))) < 1e-12);
      CHECK(std::fabs(std::fabs(first.vectors[j]) - std::fabs(es.eigenvectors()(0, j))) < 1e-12);
      // A v = lambda v
      for (int i = 0; i < n; ++i) {
        double av = d[i] * full.vector(i, j);
        if (i > 0) av += e[i - 1] * full.vector(i - 1, j);
        if (i + 1 < n) av += e[i] * full.vector(i + 1, j);
        CHECK(std::fabs(av - full.values[j] * full.vector(i, j)) < 1e-12);
      }
    }
  }
}
