#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "gpswf/errors.hpp"
#include "gpswf/linalg.hpp"

namespace gpswf::linalg {

TridiagonalEigen tridiagonal_eigen(std::span<const double> diag, std::span<const double> off,
                                   Vectors want, int max_iter) {
  const int n = static_cast<int>(diag.size());
  if (n == 0) return {{}, {}, want};
  if (static_cast<int>(off.size()) < n - 1) {
    throw std::invalid_argument("tridiagonal_eigen: off-diagonal too short");
  }
  std::vector<double> d(diag.begin(), diag.end());
  std::vector<double> e(n, 0.0);
  std::copy_n(off.begin(), n - 1, e.begin());

  // z is column-major; with first_row only row 0 is carried.
  const int rows = want == Vectors::full ? n : (want == Vectors::first_row ? 1 : 0);
  std::vector<double> z(static_cast<std::size_t>(rows) * n, 0.0);
  for (int i = 0; i < n && rows > 0; ++i) {
    if (want == Vectors::full) z[static_cast<std::size_t>(i) * n + i] = 1.0;
  }
  if (want == Vectors::first_row) z[0] = 1.0;

  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == max_iter) {
          throw NumericError("tridiagonal_eigen: no convergence for eigenvalue " +
                             std::to_string(l) + " after " + std::to_string(max_iter) +
                             " iterations");
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        int i = m - 1;
        for (; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (int k = 0; k < rows; ++k) {
            double& zi = z[static_cast<std::size_t>(i) * rows + k];
            double& zi1 = z[static_cast<std::size_t>(i + 1) * rows + k];
            f = zi1;
            zi1 = s * zi + c * f;
            zi = c * zi - s * f;
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });

  TridiagonalEigen out;
  out.kind = want;
  out.values.resize(n);
  if (rows > 0) out.vectors.resize(static_cast<std::size_t>(rows) * n);
  for (int j = 0; j < n; ++j) {
    out.values[j] = d[order[j]];
    for (int k = 0; k < rows; ++k) {
      out.vectors[static_cast<std::size_t>(j) * rows + k] =
          z[static_cast<std::size_t>(order[j]) * rows + k];
    }
  }
  return out;
}

}  // namespace gpswf::linalg
