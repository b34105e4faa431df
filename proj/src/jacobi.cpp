#include <cmath>
#include <stdexcept>
#include <string>

#include "gpswf/jacobi.hpp"
#include "gpswf/specfun.hpp"

namespace gpswf::specfun {

namespace {

void check_params(const JacobiParams& p, const char* fn) {
  if (!(p.alpha > -1.0) || !(p.beta > -1.0) || p.n < 0) {
    throw std::domain_error(std::string(fn) + ": need alpha, beta > -1 and n >= 0");
  }
}

void check_x(double x, const char* fn) {
  if (!(x >= -1.0 && x <= 1.0)) {
    throw std::domain_error(std::string(fn) + ": x must lie in [-1, 1], got " + std::to_string(x));
  }
}

// beta_k of the orthonormal recurrence for (1-x^2)^alpha.
double recurrence_beta(double alpha, int k) {
  if (k == 1) return 1.0 / (2.0 * alpha + 3.0);
  const double t = 2.0 * k + 2.0 * alpha;
  return k * (k + 2.0 * alpha) / ((t + 1.0) * (t - 1.0));
}

}  // namespace

double jacobi_p(const JacobiParams& p, double x) {
  check_params(p, "jacobi_p");
  check_x(x, "jacobi_p");
  const double a = p.alpha;
  const double b = p.beta;
  if (p.n == 0) return 1.0;
  double pm1 = 1.0;
  double pk = 0.5 * (a + b + 2.0) * x + 0.5 * (a - b);
  for (int k = 1; k < p.n; ++k) {
    const double s = 2.0 * k + a + b;
    const double c1 = 2.0 * (k + 1) * (k + a + b + 1.0) * s;
    const double c2 = (s + 1.0) * (s * (s + 2.0) * x + a * a - b * b);
    const double c3 = 2.0 * (k + a) * (k + b) * (s + 2.0);
    const double next = (c2 * pk - c3 * pm1) / c1;
    pm1 = pk;
    pk = next;
  }
  return pk;
}

double jacobi_norm_sq(const JacobiParams& p) {
  check_params(p, "jacobi_norm_sq");
  const double a = p.alpha;
  const double b = p.beta;
  const double lead = (a + b + 1.0) * std::log(2.0);
  if (p.n == 0) return std::exp(lead + log_beta(a + 1.0, b + 1.0));
  const int n = p.n;
  const double lg = log_gamma(n + a + 1.0) + log_gamma(n + b + 1.0) -
                    log_gamma(n + a + b + 1.0) - log_gamma(n + 1.0);
  return std::exp(lead + lg) / (2.0 * n + a + b + 1.0);
}

double jacobi_p_normalized(const JacobiParams& p, double x) {
  return jacobi_p(p, x) / std::sqrt(jacobi_norm_sq(p));
}

double jacobi_p_deriv(const JacobiParams& p, double x) {
  check_params(p, "jacobi_p_deriv");
  if (p.n == 0) {
    check_x(x, "jacobi_p_deriv");
    return 0.0;
  }
  return 0.5 * (p.n + p.alpha + p.beta + 1.0) *
         jacobi_p({p.alpha + 1.0, p.beta + 1.0, p.n - 1}, x);
}

OrthonormalJacobi::OrthonormalJacobi(double alpha) : alpha_(alpha) {
  if (!(alpha > -1.0)) {
    throw std::domain_error("OrthonormalJacobi: alpha must be > -1, got " + std::to_string(alpha));
  }
  mass_ = std::exp((2.0 * alpha + 1.0) * std::log(2.0) + log_beta(alpha + 1.0, alpha + 1.0));
  p0_ = 1.0 / std::sqrt(mass_);
}

double OrthonormalJacobi::a(int k) const { return std::sqrt(recurrence_beta(alpha_, k)); }

double OrthonormalJacobi::eval(int k, double x) const {
  double prev = 0.0;
  double cur = p0_;
  double ak = 0.0;
  for (int j = 0; j < k; ++j) {
    const double an = a(j + 1);
    const double next = (x * cur - ak * prev) / an;
    prev = cur;
    cur = next;
    ak = an;
  }
  return cur;
}

void OrthonormalJacobi::eval_all(double x, std::span<double> out) const {
  if (out.empty()) return;
  out[0] = p0_;
  double prev = 0.0;
  double ak = 0.0;
  for (std::size_t j = 1; j < out.size(); ++j) {
    const double an = a(static_cast<int>(j));
    out[j] = (x * out[j - 1] - ak * prev) / an;
    prev = out[j - 1];
    ak = an;
  }
}

double OrthonormalJacobi::clenshaw(std::span<const double> coeffs, double x) const {
  // p_{k+1} = (x / a_{k+1}) p_k - (a_k / a_{k+1}) p_{k-1}
  double b1 = 0.0;
  double b2 = 0.0;
  const int n = static_cast<int>(coeffs.size());
  for (int k = n - 1; k >= 0; --k) {
    const double ak1 = a(k + 1);
    const double b0 = coeffs[k] + (x / ak1) * b1 - (ak1 / a(k + 2)) * b2;
    b2 = b1;
    b1 = b0;
  }
  return p0_ * b1;
}

std::vector<double> OrthonormalJacobi::derivative_coefficients(
    std::span<const double> coeffs) const {
  if (coeffs.size() <= 1) return std::vector<double>(1, 0.0);
  std::vector<double> out(coeffs.size() - 1);
  for (std::size_t k = 1; k < coeffs.size(); ++k) {
    const double dk = static_cast<double>(k);
    out[k - 1] = coeffs[k] * std::sqrt(dk * (dk + 2.0 * alpha_ + 1.0));
  }
  return out;
}

}  // namespace gpswf::specfun
