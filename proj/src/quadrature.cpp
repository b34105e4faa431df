#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "gpswf/errors.hpp"
#include "gpswf/jacobi.hpp"
#include "gpswf/linalg.hpp"
#include "gpswf/quadrature.hpp"

namespace gpswf::specfun {

namespace {

// p_n and p_n' for the orthonormal family.
std::pair<double, double> orthonormal_with_derivative(const OrthonormalJacobi& basis, int n,
                                                       double x) {
  double p_prev = 0.0;
  double p = basis.p0();
  double d_prev = 0.0;
  double d = 0.0;
  double ak = 0.0;
  for (int k = 0; k < n; ++k) {
    const double an = basis.a(k + 1);
    const double p_next = (x * p - ak * p_prev) / an;
    const double d_next = (p + x * d - ak * d_prev) / an;
    p_prev = p;
    p = p_next;
    d_prev = d;
    d = d_next;
    ak = an;
  }
  return {p, d};
}

constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082,
                           0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975,
                           0.417959183673469387755102040816327};

struct Piece {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Piece& o) const { return error < o.error; }
};

Piece gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double fsum = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * fsum;
    if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
  }
  return {a, b, kronrod * half, std::fabs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureRule gauss_jacobi(int n, double alpha) {
  if (n < 1) throw std::domain_error("gauss_jacobi: need at least one node");
  const OrthonormalJacobi basis(alpha);
  std::vector<double> diag(n, 0.0);
  std::vector<double> off(n > 1 ? n - 1 : 0);
  for (int k = 1; k < n; ++k) off[k - 1] = basis.a(k);
  const auto eig = linalg::tridiagonal_eigen(diag, off, linalg::Vectors::none);

  QuadratureRule rule;
  rule.alpha = alpha;
  rule.nodes = eig.values;
  rule.weights.resize(n);
  std::vector<double> p(n);
  for (int i = 0; i < n; ++i) {
    double x = rule.nodes[i];
    for (int it = 0; it < 3; ++it) {
      const auto [pn, dpn] = orthonormal_with_derivative(basis, n, x);
      if (dpn == 0.0) break;
      const double dx = pn / dpn;
      if (!(std::fabs(dx) < 1e-6)) break;
      x -= dx;
      if (std::fabs(dx) <= 1e-17) break;
    }
    rule.nodes[i] = x;
    basis.eval_all(x, p);
    double s = 0.0;
    for (double v : p) s += v * v;
    rule.weights[i] = 1.0 / s;
  }
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = w;
    rule.weights[j] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  QuadratureRule rule = gauss_jacobi(n, 0.0);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol) {
  if (a == b) return 0.0;
  constexpr int kMaxPieces = 4000;
  std::priority_queue<Piece> heap;
  Piece first = gk15(f, a, b);
  double total = first.value;
  double err = first.error;
  heap.push(first);
  int pieces = 1;
  while (err > abs_tol && err > 1e-15 * std::fabs(total)) {
    if (pieces >= kMaxPieces) {
      throw NumericError("integrate_adaptive: tolerance " + std::to_string(abs_tol) +
                         " not reached on [" + std::to_string(a) + ", " + std::to_string(b) +
                         "], estimated error " + std::to_string(err));
    }
    const Piece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Piece left = gk15(f, worst.a, mid);
    const Piece right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++pieces;
  }
  // Re-sum to drop the drift from incremental updates.
  double sum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    heap.pop();
  }
  return sum;
}

}  // namespace gpswf::specfun
