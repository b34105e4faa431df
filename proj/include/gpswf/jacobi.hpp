#pragma once

#include <span>
#include <vector>

namespace gpswf::specfun {

struct JacobiParams {
  double alpha;
  double beta;
  int n;
};

// P_n^{(alpha,beta)}(x) from the three-term recurrence.
double jacobi_p(const JacobiParams& p, double x);

// h_n^{(alpha,beta)} = int_{-1}^{1} (P_n)^2 (1-y)^alpha (1+y)^beta dy.
double jacobi_norm_sq(const JacobiParams& p);

// P_n / sqrt(h_n).
double jacobi_p_normalized(const JacobiParams& p, double x);

// d/dx P_n^{(alpha,beta)} = (n+alpha+beta+1)/2 P_{n-1}^{(alpha+1,beta+1)}.
double jacobi_p_deriv(const JacobiParams& p, double x);

// Orthonormal symmetric Jacobi (Gegenbauer-type) polynomials
//   p_k = P_k^{(alpha,alpha)} / sqrt(h_k),   int p_j p_k (1-x^2)^alpha = delta_jk,
// through the symmetric recurrence x p_k = a_{k+1} p_{k+1} + a_k p_{k-1}.
class OrthonormalJacobi {
 public:
  explicit OrthonormalJacobi(double alpha);

  double alpha() const noexcept { return alpha_; }

  // Off-diagonal of the Jacobi matrix, a_k = sqrt(beta_k), k >= 1.
  double a(int k) const;
  // Total mass int (1-x^2)^alpha dx = 2^{2 alpha+1} B(alpha+1, alpha+1).
  double mass() const noexcept { return mass_; }
  double p0() const noexcept { return p0_; }

  double eval(int k, double x) const;
  // Fills out[0..size) with p_0(x) .. p_{size-1}(x).
  void eval_all(double x, std::span<double> out) const;
  // sum_k coeffs[k] p_k(x) by Clenshaw summation.
  double clenshaw(std::span<const double> coeffs, double x) const;

  // Coefficients of d/dx sum c_k p_k^{(alpha)} in the (alpha+1) basis:
  // d/dx p_k^{(alpha)} = sqrt(k (k + 2 alpha + 1)) p_{k-1}^{(alpha+1)}.
  std::vector<double> derivative_coefficients(std::span<const double> coeffs) const;

 private:
  double alpha_;
  double mass_;
  double p0_;
};

}  // namespace gpswf::specfun
