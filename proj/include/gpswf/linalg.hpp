#pragma once

#include <span>
#include <vector>

namespace gpswf::linalg {

enum class Vectors { none, first_row, full };

// Eigen-decomposition of a real symmetric tridiagonal matrix.
struct TridiagonalEigen {
  std::vector<double> values;  // ascending
  // none: empty. first_row: values.size() entries, the first component of
  // each eigenvector. full: column-major n x n, column j pairs with values[j].
  std::vector<double> vectors;
  Vectors kind = Vectors::none;

  double vector(std::size_t row, std::size_t col) const {
    return vectors[col * values.size() + row];
  }
};

// Implicit-shift QL. `off` holds the n-1 sub-diagonal entries.
// Throws NumericError if some eigenvalue needs more than `max_iter` sweeps.
TridiagonalEigen tridiagonal_eigen(std::span<const double> diag, std::span<const double> off,
                                   Vectors want, int max_iter = 60);

}  // namespace gpswf::linalg
