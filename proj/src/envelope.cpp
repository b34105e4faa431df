#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "gpswf/errors.hpp"
#include "gpswf/specfun.hpp"

namespace gpswf::specfun {

namespace {

void check_alpha(double alpha, const char* fn) {
  if (!(alpha >= -0.5) || !std::isfinite(alpha)) {
    throw std::domain_error(std::string(fn) + ": alpha must be >= -1/2, got " +
                            std::to_string(alpha));
  }
}

double j_plus_y(double alpha, double x) {
  const BesselJY b = bessel_jy(alpha, x);
  return b.j + b.y;
}

// First sign change of J + Y: march with a fixed step, then bisect.
double first_zero_j_plus_y(double alpha) {
  const double step = 0.02;
  double lo = 1e-3;
  double flo = j_plus_y(alpha, lo);
  const double limit = alpha + 50.0;
  for (double hi = lo + step; hi < limit; hi += step) {
    const double fhi = j_plus_y(alpha, hi);
    if ((flo < 0.0) != (fhi < 0.0)) {
      for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = j_plus_y(alpha, mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      return 0.5 * (lo + hi);
    }
    lo = hi;
    flo = fhi;
  }
  throw NumericError("envelope_constants: no zero of J+Y found below x=" +
                     std::to_string(limit) + " (alpha=" + std::to_string(alpha) + ")");
}

}  // namespace

double c_alpha_bound(double alpha) {
  check_alpha(alpha, "c_alpha_bound");
  if (std::fabs(alpha) <= 0.5) return std::sqrt(2.0 / kPi);
  const double a3 = std::cbrt(alpha);
  return 0.675 * std::sqrt(a3 + 1.9 / a3 + 1.1 / alpha);
}

BesselEnvelopeConstants envelope_constants(double alpha) {
  check_alpha(alpha, "envelope_constants");
  BesselEnvelopeConstants k;
  k.alpha = alpha;
  k.mu_alpha = std::fabs(alpha * alpha - 0.25);
  const double mu1 = std::fabs((alpha + 1.0) * (alpha + 1.0) - 0.25);
  k.c_alpha = c_alpha_bound(alpha);
  const double c1 = c_alpha_bound(alpha + 1.0);
  if (std::fabs(alpha) <= 0.5) {
    k.m_alpha = 2.0 / kPi;
  } else {
    const BesselJY b = bessel_jy(alpha, alpha);
    k.m_alpha = std::max(-2.0 * alpha * b.j * b.y + 4.0 * alpha / kPi,
                         alpha * (b.j * b.j + b.y * b.y));
  }
  k.kappa_alpha = 0.8 * std::sqrt(2.0 / kPi) * (k.mu_alpha + mu1) +
                  0.32 * (k.mu_alpha * k.mu_alpha + mu1 * mu1) +
                  std::fabs(alpha) * k.c_alpha * c1;
  k.M_alpha_cap = std::max({1.0 / kPi, k.c_alpha * k.c_alpha - 1.0 / kPi, k.kappa_alpha});
  k.X_alpha = first_zero_j_plus_y(alpha);
  return k;
}

WeightModulus weight_modulus(const BesselEnvelopeConstants& k, double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("weight_modulus: x must be positive, got " + std::to_string(x));
  }
  const BesselJY b = bessel_jy(k.alpha, x);
  if (x >= k.X_alpha) return {1.0, std::hypot(b.j, b.y)};
  return {std::sqrt(std::fabs(b.y / b.j)), std::sqrt(2.0 * std::fabs(b.y * b.j))};
}

WeightModulus weight_modulus(double alpha, double x) {
  return weight_modulus(envelope_constants(alpha), x);
}

double modulus_over_weight(const BesselEnvelopeConstants& k, double x) {
  if (x <= 0.0) {
    if (x < 0.0) throw std::domain_error("modulus_over_weight: x must be nonnegative");
    if (k.alpha == 0.0) return std::sqrt(2.0);
    return k.alpha > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  if (x < k.X_alpha) return std::sqrt(2.0) * std::fabs(bessel_j(k.alpha, x));
  const BesselJY b = bessel_jy(k.alpha, x);
  return std::hypot(b.j, b.y);
}

double eta_fn(double alpha, double x) {
  check_alpha(alpha, "eta_fn");
  if (!(x >= 0.0)) throw std::domain_error("eta_fn: x must be nonnegative");
  if (x == 0.0) return 0.0;
  const double ja = bessel_j(alpha, x);
  const double ja1 = bessel_j(alpha + 1.0, x);
  return 0.5 * x * x * (ja * ja + ja1 * ja1) - alpha * x * ja * ja1 - x / kPi;
}

}  // namespace gpswf::specfun
