#pragma once

// Uniform approximations of psi_{n,c}^{(alpha)} on [0, 1]:
//  - Bessel form: A chi^{1/4} sqrt(S) J_alpha(sqrt(chi) S) / ((1-x^2)^{1/4+alpha/2} (1-qx^2)^{1/4})
//    with q = c^2/chi and S the Liouville arc-length map, plus a rigorous envelope;
//  - Jacobi form: A_n P~_n^{(alpha,alpha)}(x), error O(c^2/n).

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gpswf/specfun.hpp"
#include "gpswf/sturm.hpp"

namespace gpswf::approx {

struct WkbFrame {
  double alpha = 0.0;
  double c = 0.0;
  int n = 0;
  double chi = 0.0;
  double q = 0.0;   // c^2 / chi
  double S0 = 0.0;  // S(0) = E(sqrt q)
  double K = 0.0;   // K(sqrt q)
  double eps = 0.0; // pi (e-1)(7/4+3 alpha^2) m_alpha / ((1-q) sqrt chi)
  specfun::BesselEnvelopeConstants constants;
  bool admissible = false;
  std::string reason;  // which hypothesis failed, empty when admissible
};

// Builds the frame without throwing on inadmissible input (see `admissible`).
WkbFrame wkb_frame(double alpha, double c, int n, double chi);
WkbFrame wkb_frame(const GpswfFunction& f);

// g_{alpha,q}(x): bound on the integrated perturbation of the Bessel normal form.
double g_bound(double alpha, double q, double x);

// x_j = sin(pi j / (2(m-1))), j = 0..m-1.
std::vector<double> default_grid(int points = 2001);

// A_alpha(q) = 2^alpha Gamma(1+alpha) psi_n(1) / ((1-q)^{alpha/2} chi^{1/4+alpha/2}).
double a_alpha_exact(const GpswfFunction& f);

class BesselUniform {
 public:
  // Throws InadmissibleError naming the failed hypothesis.
  explicit BesselUniform(const GpswfFunction& f);

  const WkbFrame& frame() const noexcept { return frame_; }
  double a_hat() const noexcept { return a_hat_; }    // sqrt(pi / (2 K(sqrt q)))
  double a_exact() const noexcept { return a_exact_; }

  // The Bessel profile without its normalization constant.
  double shape(double x) const;
  double value(double x) const { return a_hat_ * shape(x); }
  // (1-x^2)^{1/4} (1-qx^2)^{-3/4} chi^{1/4} sqrt(S) (M/E)(sqrt(chi) S) / (1-x^2)^{alpha/2}
  double remainder_weight(double x) const;
  // |A - A_hat| |shape(x)| + eps A remainder_weight(x)
  double envelope(double x) const;

 private:
  WkbFrame frame_;
  double a_hat_ = 0.0;
  double a_exact_ = 0.0;
};

struct ApproxReport {
  std::vector<double> grid;
  std::vector<double> approx;
  std::vector<double> reference;
  std::vector<double> envelope;  // Bessel: rigorous envelope; Jacobi: C_hat c^2/(n+2a+1)
  double sup_error = 0.0;
  double max_envelope = 0.0;
  int pointwise_violations = 0;
  bool envelope_violated = false;  // sup_error > max_envelope
};

ApproxReport bessel_report(const GpswfFunction& f, std::span<const double> grid);

struct NormCheck {
  double norm_sq = 0.0;    // ||psi~||^2 on [0,1] with weight (1-x^2)^alpha, psi~ using A
  double leading = 0.0;    // A^2 K(sqrt q) / pi
  double deviation = 0.0;  // |norm_sq - leading|
  double bound = 0.0;      // A^2 M_alpha / ((1-q) sqrt chi)
  bool holds() const noexcept { return deviation <= bound; }
};

NormCheck approximant_norm_check(const GpswfFunction& f);

struct JacobiFrame {
  double alpha = 0.0;
  double c = 0.0;
  int n = 0;
  double q = 0.0;
  double a_n = 0.0;  // int psi_n P~_n w_alpha
  // |1 - A_n| (2n + 2 alpha + 1) / c^2 (0 when c = 0)
  double scaled_norm_defect = 0.0;
};

// Throws InadmissibleError for alpha outside (0, 3/2) or q > q0.
JacobiFrame jacobi_frame(const GpswfFunction& f, double q0 = 0.9);

struct JacobiReport {
  ApproxReport report;
  JacobiFrame frame;
  double scaled_error = 0.0;  // sup_error (n + 2 alpha + 1) / c^2
  double c_hat = 0.0;         // constant used for the bound column
};

// Bound column is c_hat c^2 / (n + 2 alpha + 1); without c_hat the run's own
// scaled error is used.
JacobiReport jacobi_report(const GpswfFunction& f, std::span<const double> grid, double q0 = 0.9,
                           std::optional<double> c_hat = std::nullopt);

}  // namespace gpswf::approx
