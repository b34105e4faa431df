#pragma once

// Eigenpairs of the Jacobi-type Sturm-Liouville operator
//   L psi = -(1-x^2) psi'' + 2(alpha+1) x psi' + c^2 x^2 psi = chi psi
// on [-1, 1], expanded in the orthonormal Jacobi basis for (1-x^2)^alpha.
// The eigenfunctions are the GPSWFs psi_{n,c}^{(alpha)}.

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "gpswf/jacobi.hpp"

namespace gpswf {

struct ProblemParams {
  double alpha = 0.0;
  double c = 0.0;

  // Throws std::invalid_argument unless alpha > -1 and c >= 0 (both finite).
  void validate() const;
};

enum class TruncationPolicy {
  grow,    // enlarge the basis until the trailing coefficients are negligible
  strict,  // throw TruncationError naming the size that would have been needed
};

class ChiSpectrum {
 public:
  const ProblemParams& params() const noexcept { return params_; }
  int n_max() const noexcept { return static_cast<int>(chis_.size()) - 1; }
  int truncation() const noexcept { return n_trunc_; }

  double chi(int n) const { return chis_.at(static_cast<std::size_t>(n)); }
  const std::vector<double>& chis() const noexcept { return chis_; }

  // d_k^n, k = 0 .. truncation()-1; entries of parity opposite to n are zero.
  std::span<const double> coeffs(int n) const;
  int parity(int n) const noexcept { return n % 2; }

  // sum_{k >= N-8} (d_k^n)^2, worst over n.
  double trailing_mass() const noexcept { return trailing_mass_; }

 private:
  friend std::shared_ptr<const ChiSpectrum> chi_spectrum(const ProblemParams&, int,
                                                         TruncationPolicy, int);
  ProblemParams params_;
  int n_trunc_ = 0;
  double trailing_mass_ = 0.0;
  std::vector<double> chis_;
  std::vector<double> coeffs_;  // (n_max+1) x n_trunc, row-major
};

// Default basis size for a given n_max and c.
int default_truncation(int n_max, double c);

// chi_0 .. chi_{n_max} and their expansion coefficients. `n_trunc` = 0 picks
// default_truncation(). Each eigenvector is signed so that psi_n(1) > 0.
std::shared_ptr<const ChiSpectrum> chi_spectrum(const ProblemParams& params, int n_max,
                                                TruncationPolicy policy = TruncationPolicy::grow,
                                                int n_trunc = 0);

// psi_n as an evaluable function on [-1, 1].
class GpswfFunction {
 public:
  GpswfFunction(std::shared_ptr<const ChiSpectrum> spectrum, int n);

  int n() const noexcept { return n_; }
  double alpha() const noexcept { return spectrum_->params().alpha; }
  double c() const noexcept { return spectrum_->params().c; }
  double chi() const noexcept { return spectrum_->chi(n_); }
  const ChiSpectrum& spectrum() const noexcept { return *spectrum_; }
  std::span<const double> coeffs() const { return spectrum_->coeffs(n_); }

  double value(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;
  double operator()(double x) const { return value(x); }

 private:
  std::shared_ptr<const ChiSpectrum> spectrum_;
  int n_;
  specfun::OrthonormalJacobi basis0_;
  specfun::OrthonormalJacobi basis1_;
  specfun::OrthonormalJacobi basis2_;
  std::vector<double> d1_;  // coefficients of psi' in the (alpha+1) basis
  std::vector<double> d2_;  // coefficients of psi'' in the (alpha+2) basis
};

// (1-x^2) psi'' - 2(alpha+1) x psi' + (chi - c^2 x^2) psi at x, with chi
// optionally replaced by `chi_override`.
double ode_residual(const GpswfFunction& f, double x,
                    std::optional<double> chi_override = std::nullopt);

}  // namespace gpswf
