#include <cmath>
#include <stdexcept>
#include <string>

#include "gpswf/quadrature.hpp"
#include "gpswf/specfun.hpp"

namespace gpswf::specfun {

namespace {

struct Agm {
  double a;
  double sum;  // sum_n 2^(n-1) c_n^2
};

Agm agm(double r) {
  double a = 1.0;
  double b = std::sqrt((1.0 - r) * (1.0 + r));
  double c = r;
  double pow2 = 0.5;
  double sum = pow2 * c * c;
  for (int it = 0; it < 64; ++it) {
    if (std::fabs(a - b) <= 1e-16 * a) break;
    const double an = 0.5 * (a + b);
    c = 0.5 * (a - b);
    b = std::sqrt(a * b);
    a = an;
    pow2 *= 2.0;
    sum += pow2 * c * c;
  }
  return {a, sum};
}

// Upper limit of the angle after t = cos(phi); acos loses accuracy near 1.
double angle_of(double x) { return 2.0 * std::asin(std::sqrt(0.5 * (1.0 - x))); }

void check_xq(double x, double q, const char* fn) {
  if (!(x >= 0.0 && x <= 1.0) || !(q >= 0.0 && q < 1.0)) {
    throw std::domain_error(std::string(fn) + ": need 0 <= x <= 1 and 0 <= q < 1 (x=" +
                            std::to_string(x) + ", q=" + std::to_string(q) + ")");
  }
}

}  // namespace

EllipticModulus::EllipticModulus(double r) : r_(r) {
  if (!(r >= 0.0 && r <= 1.0)) {
    throw std::domain_error("EllipticModulus: r must lie in [0, 1], got " + std::to_string(r));
  }
}

double elliptic_k(EllipticModulus m) {
  const double r = m.value();
  if (r >= 1.0) throw std::domain_error("elliptic_k: modulus must be < 1");
  return kPi / (2.0 * agm(r).a);
}

double elliptic_e(EllipticModulus m) {
  const double r = m.value();
  if (r >= 1.0) return 1.0;
  const Agm g = agm(r);
  return kPi / (2.0 * g.a) * (1.0 - g.sum);
}

double s_map(double x, double q) {
  check_xq(x, q, "s_map");
  if (x == 1.0) return 0.0;
  const double phi = angle_of(x);
  return integrate_adaptive(
      [q](double t) {
        const double c = std::cos(t);
        return std::sqrt(1.0 - q * c * c);
      },
      0.0, phi, 1e-13 * std::fmin(1.0, phi));
}

double incomplete_k(double x, double q) {
  check_xq(x, q, "incomplete_k");
  if (x == 1.0) return 0.0;
  const double phi = angle_of(x);
  return integrate_adaptive(
      [q](double t) {
        const double c = std::cos(t);
        return 1.0 / std::sqrt(1.0 - q * c * c);
      },
      0.0, phi, 1e-13 * std::fmin(1.0, phi));
}

}  // namespace gpswf::specfun
