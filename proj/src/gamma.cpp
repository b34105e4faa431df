#include <cmath>
#include <stdexcept>
#include <string>

#include "gpswf/specfun.hpp"

namespace gpswf::specfun {

namespace {

void require_positive(double x, const char* name) {
  if (!(x > 0.0)) {
    throw std::domain_error(std::string(name) + ": argument must be positive, got " +
                            std::to_string(x));
  }
}

}  // namespace

double gamma_fn(double x) {
  require_positive(x, "gamma_fn");
  return std::tgamma(x);
}

double log_gamma(double x) {
  require_positive(x, "log_gamma");
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);  // std::lgamma writes the global signgam
#else
  return std::lgamma(x);
#endif
}

double log_beta(double a, double b) {
  require_positive(a, "beta_fn");
  require_positive(b, "beta_fn");
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double beta_fn(double a, double b) {
  require_positive(a, "beta_fn");
  require_positive(b, "beta_fn");
  // Direct ratio is exact for small integer/half-integer arguments; fall back to
  // log space once tgamma would overflow.
  if (a + b < 150.0) return std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b);
  return std::exp(log_beta(a, b));
}

}  // namespace gpswf::specfun
