#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "gpswf/errors.hpp"
#include "gpswf/specfun.hpp"

// Bessel J_nu, Y_nu of real order by Temme's method: the continued fraction
// J'/J (CF1) with downward recurrence to an order mu in [-1/2, 1/2], then the
// Temme series (x < 2) or Steed's complex continued fraction (x >= 2) to fix
// J_mu, Y_mu, followed by upward recurrence for Y. Non-integer and integer
// orders take the same path, so no limiting process is needed for Y_n.

namespace gpswf::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kFpMin = std::numeric_limits<double>::min() / kEps;
constexpr int kMaxIter = 1000000;
constexpr double kTemmeSwitch = 2.0;

double zeta_int(int k) {
  const double pi2 = kPi * kPi;
  switch (k) {
    case 2: return pi2 / 6.0;
    case 3: return 1.2020569031595942854;
    case 4: return pi2 * pi2 / 90.0;
    case 5: return 1.0369277551433699263;
    case 6: return pi2 * pi2 * pi2 / 945.0;
    case 7: return 1.0083492773819228268;
    case 8: return pi2 * pi2 * pi2 * pi2 / 9450.0;
    case 9: return 1.0020083928260822144;
    default: break;
  }
  double s = 1.0;
  for (int j = 2;; ++j) {
    const double t = std::pow(static_cast<double>(j), -k);
    s += t;
    if (t < 1e-18) break;
  }
  return s;
}

[[noreturn]] void no_convergence(const char* where, double nu, double x) {
  throw NumericError(std::string("bessel_jy: ") + where + " did not converge (nu=" +
                     std::to_string(nu) + ", x=" + std::to_string(x) + ")");
}

BesselJY jy_nonnegative_order(double nu, double x) {
  const int nl = x < kTemmeSwitch ? static_cast<int>(nu + 0.5)
                                  : std::max(0, static_cast<int>(nu - x + 1.5));
  const double xmu = nu - nl;
  const double xmu2 = xmu * xmu;
  const double xi = 1.0 / x;
  const double xi2 = 2.0 * xi;
  const double w = xi2 / kPi;

  // CF1 for J'_nu / J_nu by modified Lentz; isign tracks the sign of J_nu.
  int isign = 1;
  double h = std::max(nu * xi, kFpMin);
  double b = xi2 * nu;
  double d = 0.0;
  double c = h;
  int it = 0;
  for (; it < kMaxIter; ++it) {
    b += xi2;
    d = b - d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = b - 1.0 / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = c * d;
    h *= del;
    if (d < 0.0) isign = -isign;
    if (std::fabs(del - 1.0) <= kEps) break;
  }
  if (it >= kMaxIter) no_convergence("CF1", nu, x);

  double rjl = isign * kFpMin;
  double rjpl = h * rjl;
  const double rjl1 = rjl;
  const double rjp1 = rjpl;
  double fact = nu * xi;
  for (int l = nl - 1; l >= 0; --l) {
    const double rjtemp = fact * rjl + rjpl;
    fact -= xi;
    rjpl = fact * rjtemp - rjl;
    rjl = rjtemp;
  }
  if (rjl == 0.0) rjl = kEps;
  const double f = rjpl / rjl;

  double rjmu = 0.0;
  double rymu = 0.0;
  double rymup = 0.0;
  double ry1 = 0.0;
  if (x < kTemmeSwitch) {
    const double x2 = 0.5 * x;
    const double pimu = kPi * xmu;
    const double fct = std::fabs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
    const double dl = -std::log(x2);
    const double e = xmu * dl;
    const double fct2 = std::fabs(e) < kEps ? 1.0 : std::sinh(e) / e;
    const auto [gam1, gam2] = temme_gammas(xmu);
    const double gampl = gam2 - xmu * gam1;  // 1/Gamma(1+mu)
    const double gammi = gam2 + xmu * gam1;  // 1/Gamma(1-mu)
    double ff = 2.0 / kPi * fct * (gam1 * std::cosh(e) + gam2 * fct2 * dl);
    const double ee = std::exp(e);
    double p = ee / (gampl * kPi);
    double q = 1.0 / (ee * kPi * gammi);
    const double pimu2 = 0.5 * pimu;
    const double fct3 = std::fabs(pimu2) < kEps ? 1.0 : std::sin(pimu2) / pimu2;
    const double r = kPi * pimu2 * fct3 * fct3;
    double cc = 1.0;
    const double d2 = -x2 * x2;
    double sum = ff + r * q;
    double sum1 = p;
    int k = 1;
    for (; k < kMaxIter; ++k) {
      const double dk = k;
      ff = (dk * ff + p + q) / (dk * dk - xmu2);
      cc *= d2 / dk;
      p /= (dk - xmu);
      q /= (dk + xmu);
      const double del = cc * (ff + r * q);
      sum += del;
      sum1 += cc * p - dk * del;
      if (std::fabs(del) < (1.0 + std::fabs(sum)) * kEps) break;
    }
    if (k >= kMaxIter) no_convergence("Temme series", nu, x);
    rymu = -sum;
    ry1 = -sum1 * xi2;
    rymup = xmu * xi * rymu - ry1;
    rjmu = w / (rymup - f * rymu);
  } else {
    // Steed's CF2: p + iq = (J' + iY') / (J + iY) at order mu.
    double a = 0.25 - xmu2;
    double p = -0.5 * xi;
    double q = 1.0;
    const double br = 2.0 * x;
    double bi = 2.0;
    double fct = a * xi / (p * p + q * q);
    double cr = br + q * fct;
    double ci = bi + p * fct;
    double den = br * br + bi * bi;
    double dr = br / den;
    double di = -bi / den;
    double dlr = cr * dr - ci * di;
    double dli = cr * di + ci * dr;
    double temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    int k = 1;
    for (; k < kMaxIter; ++k) {
      a += 2 * k;
      bi += 2.0;
      dr = a * dr + br;
      di = a * di + bi;
      if (std::fabs(dr) + std::fabs(di) < kFpMin) dr = kFpMin;
      fct = a / (cr * cr + ci * ci);
      cr = br + cr * fct;
      ci = bi - ci * fct;
      if (std::fabs(cr) + std::fabs(ci) < kFpMin) cr = kFpMin;
      den = dr * dr + di * di;
      dr /= den;
      di /= -den;
      dlr = cr * dr - ci * di;
      dli = cr * di + ci * dr;
      temp = p * dlr - q * dli;
      q = p * dli + q * dlr;
      p = temp;
      if (std::fabs(dlr - 1.0) + std::fabs(dli) <= kEps) break;
    }
    if (k >= kMaxIter) no_convergence("CF2", nu, x);
    const double gam = (p - f) / q;
    rjmu = std::copysign(std::sqrt(w / ((p - f) * gam + q)), rjl);
    rymu = rjmu * gam;
    rymup = rymu * (p + q / gam);
    ry1 = xmu * xi * rymu - rymup;
  }

  const double scale = rjmu / rjl;
  BesselJY out{};
  out.j = rjl1 * scale;
  out.jp = rjp1 * scale;
  for (int k = 1; k <= nl; ++k) {
    const double t = (xmu + k) * xi2 * ry1 - rymu;
    rymu = ry1;
    ry1 = t;
  }
  out.y = rymu;
  out.yp = nu * xi * rymu - ry1;
  return out;
}

void check_order(double nu, const char* fn) {
  if (!(nu >= -0.5) || !std::isfinite(nu)) {
    throw std::domain_error(std::string(fn) + ": order must be >= -1/2, got " +
                            std::to_string(nu));
  }
}

}  // namespace

std::pair<double, double> temme_gammas(double mu) {
  // log Gamma(1+mu) = -gamma mu + sum_{k>=2} (-1)^k zeta(k) mu^k / k, split
  // into its odd part (odd_over_mu * mu) and even part.
  double odd_over_mu = -kEuler;
  double even = 0.0;
  double pk1 = 1.0;  // mu^(k-1)
  for (int k = 2; k < 80; ++k) {
    pk1 *= mu;
    if (k % 2 == 0) {
      even += zeta_int(k) * pk1 * mu / k;
    } else {
      odd_over_mu -= zeta_int(k) * pk1 / k;
    }
    if (std::fabs(pk1) < 1e-19) break;
  }
  const double odd = odd_over_mu * mu;
  const double scale = std::exp(-even);
  const double sinhc = std::fabs(odd) < 1e-8 ? 1.0 + odd * odd / 6.0 : std::sinh(odd) / odd;
  return {scale * odd_over_mu * sinhc, scale * std::cosh(odd)};
}

BesselJY bessel_jy(double nu, double x) {
  check_order(nu, "bessel_jy");
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error("bessel_jy: argument must be positive, got " + std::to_string(x));
  }
  if (nu >= 0.0) return jy_nonnegative_order(nu, x);
  // J_{-mu} = cos(mu pi) J_mu - sin(mu pi) Y_mu, Y_{-mu} = sin(mu pi) J_mu + cos(mu pi) Y_mu
  const double mu = -nu;
  const BesselJY pos = jy_nonnegative_order(mu, x);
  const double cs = std::cos(mu * kPi);
  const double sn = std::sin(mu * kPi);
  return {cs * pos.j - sn * pos.y, sn * pos.j + cs * pos.y, cs * pos.jp - sn * pos.yp,
          sn * pos.jp + cs * pos.yp};
}

double bessel_j(double nu, double x) {
  check_order(nu, "bessel_j");
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw std::domain_error("bessel_j: argument must be nonnegative, got " + std::to_string(x));
  }
  if (x == 0.0) {
    if (nu == 0.0) return 1.0;
    if (nu > 0.0) return 0.0;
    return std::numeric_limits<double>::infinity();
  }
  return bessel_jy(nu, x).j;
}

double bessel_y(double nu, double x) {
  check_order(nu, "bessel_y");
  if (!(x > 0.0)) {
    throw std::domain_error("bessel_y: argument must be positive, got " + std::to_string(x));
  }
  return bessel_jy(nu, x).y;
}

double bessel_j_scaled(double nu, double x) {
  check_order(nu, "bessel_j_scaled");
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw std::domain_error("bessel_j_scaled: argument must be nonnegative, got " +
                            std::to_string(x));
  }
  if (x > 2.0) return bessel_jy(nu, x).j / std::pow(x, nu);
  // sum_k (-x^2/4)^k / (k! Gamma(nu+k+1)) / 2^nu
  const double z = -0.25 * x * x;
  double term = std::exp(-log_gamma(nu + 1.0)) * std::pow(2.0, -nu);
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= z / (k * (nu + k));
    sum += term;
    if (std::fabs(term) <= kEps * 0.25 * std::fabs(sum)) break;
  }
  return sum;
}

}  // namespace gpswf::specfun
