#include "gpswf/sturm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gpswf/errors.hpp"
#include "gpswf/linalg.hpp"

namespace gpswf {

namespace {

constexpr int kTailWidth = 8;
constexpr double kTailTolerance = 1e-12;
constexpr int kMaxTruncation = 1 << 16;

struct Solve {
  int n_trunc;
  double tail;
  std::vector<double> chis;
  std::vector<double> coeffs;
};

// Even or odd block of diag(k(k+2a+1)) + c^2 X^2, where X is the Jacobi matrix
// of the orthonormal basis: (X^2)_{kk} = b_k + b_{k+1}, (X^2)_{k,k+2} = a_{k+1} a_{k+2}.
Solve solve(const ProblemParams& p, int n_max, int n_trunc) {
  const specfun::OrthonormalJacobi basis(p.alpha);
  const double c2 = p.c * p.c;
  Solve out{n_trunc, 0.0, std::vector<double>(n_max + 1),
            std::vector<double>(static_cast<std::size_t>(n_max + 1) * n_trunc, 0.0)};
  std::vector<double> ak(n_trunc + 2, 0.0);
  for (int k = 1; k < n_trunc + 2; ++k) ak[k] = basis.a(k);

  for (int parity = 0; parity < 2; ++parity) {
    std::vector<int> index;
    for (int k = parity; k < n_trunc; k += 2) index.push_back(k);
    const std::size_t m = index.size();
    std::vector<double> diag(m);
    std::vector<double> off(m > 0 ? m - 1 : 0);
    for (std::size_t j = 0; j < m; ++j) {
      const double k = index[j];
      const int ki = index[j];
      diag[j] = k * (k + 2.0 * p.alpha + 1.0) + c2 * (ak[ki] * ak[ki] + ak[ki + 1] * ak[ki + 1]);
      if (j + 1 < m) off[j] = c2 * ak[ki + 1] * ak[ki + 2];
    }
    const auto eig = linalg::tridiagonal_eigen(diag, off, linalg::Vectors::full);
    for (int n = parity; n <= n_max; n += 2) {
      const std::size_t col = static_cast<std::size_t>(n / 2);
      out.chis[n] = eig.values[col];
      double* row = out.coeffs.data() + static_cast<std::size_t>(n) * n_trunc;
      double norm = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        row[index[j]] = eig.vector(j, col);
        norm += row[index[j]] * row[index[j]];
      }
      norm = std::sqrt(norm);
      const std::span<const double> view(row, n_trunc);
      const double sign = basis.clenshaw(view, 1.0) < 0.0 ? -1.0 : 1.0;
      double tail = 0.0;
      for (int k = 0; k < n_trunc; ++k) {
        row[k] *= sign / norm;
        if (k >= n_trunc - kTailWidth) tail += row[k] * row[k];
      }
      out.tail = std::max(out.tail, tail);
    }
  }
  return out;
}

}  // namespace

void ProblemParams::validate() const {
  if (!(alpha > -1.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("alpha must be a finite number > -1, got " +
                                std::to_string(alpha));
  }
  if (!(c >= 0.0) || !std::isfinite(c)) {
    throw std::invalid_argument("c must be a finite number >= 0, got " + std::to_string(c));
  }
}

std::span<const double> ChiSpectrum::coeffs(int n) const {
  if (n < 0 || n > n_max()) throw std::out_of_range("ChiSpectrum::coeffs: index out of range");
  return {coeffs_.data() + static_cast<std::size_t>(n) * n_trunc_,
          static_cast<std::size_t>(n_trunc_)};
}

int default_truncation(int n_max, double c) {
  return n_max + std::max(32, static_cast<int>(std::ceil(1.2 * c)) + 10);
}

std::shared_ptr<const ChiSpectrum> chi_spectrum(const ProblemParams& params, int n_max,
                                                TruncationPolicy policy, int n_trunc) {
  params.validate();
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  int n = n_trunc > 0 ? n_trunc : default_truncation(n_max, params.c);
  if (n < n_max + kTailWidth + 1) {
    throw std::invalid_argument("truncation " + std::to_string(n) + " too small for n_max " +
                                std::to_string(n_max));
  }
  const int requested = n;
  Solve s = solve(params, n_max, n);
  while (s.tail >= kTailTolerance) {
    if (n >= kMaxTruncation) {
      throw TruncationError("chi_spectrum: trailing coefficients do not decay", requested, n);
    }
    n = std::min(kMaxTruncation, n + std::max(16, n / 2));
    s = solve(params, n_max, n);
  }
  if (policy == TruncationPolicy::strict && n != requested) {
    throw TruncationError("chi_spectrum: truncation " + std::to_string(requested) +
                              " leaves trailing coefficient mass above 1e-12; need " +
                              std::to_string(n),
                          requested, n);
  }
  auto out = std::make_shared<ChiSpectrum>();
  out->params_ = params;
  out->n_trunc_ = s.n_trunc;
  out->trailing_mass_ = s.tail;
  out->chis_ = std::move(s.chis);
  out->coeffs_ = std::move(s.coeffs);
  return out;
}

GpswfFunction::GpswfFunction(std::shared_ptr<const ChiSpectrum> spectrum, int n)
    : spectrum_(std::move(spectrum)),
      n_(n),
      basis0_(spectrum_->params().alpha),
      basis1_(spectrum_->params().alpha + 1.0),
      basis2_(spectrum_->params().alpha + 2.0) {
  if (n < 0 || n > spectrum_->n_max()) {
    throw std::out_of_range("GpswfFunction: n outside the computed spectrum");
  }
  d1_ = basis0_.derivative_coefficients(spectrum_->coeffs(n));
  d2_ = basis1_.derivative_coefficients(d1_);
}

double GpswfFunction::value(double x) const { return basis0_.clenshaw(coeffs(), x); }

double GpswfFunction::derivative(double x) const { return basis1_.clenshaw(d1_, x); }

double GpswfFunction::second_derivative(double x) const { return basis2_.clenshaw(d2_, x); }

double ode_residual(const GpswfFunction& f, double x, std::optional<double> chi_override) {
  const double chi = chi_override.value_or(f.chi());
  const double c = f.c();
  return (1.0 - x * x) * f.second_derivative(x) - 2.0 * (f.alpha() + 1.0) * x * f.derivative(x) +
         (chi - c * c * x * x) * f.value(x);
}

}  // namespace gpswf
