#include "gpswf/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gpswf/errors.hpp"
#include "gpswf/parallel.hpp"
#include "gpswf/quadrature.hpp"

namespace gpswf::approx {

namespace {

using specfun::kPi;

constexpr double kEndpointGap = 1e-10;

double a_from_endpoint(double alpha, double q, double chi, double psi1) {
  const double log_scale = alpha * std::log(2.0) + specfun::log_gamma(1.0 + alpha) -
                           0.5 * alpha * std::log1p(-q) - (0.25 + 0.5 * alpha) * std::log(chi);
  return std::exp(log_scale) * psi1;
}

// S as a function of the angle phi = arccos x.
double s_of_angle(double phi, double q) {
  if (phi <= 0.0) return 0.0;
  return specfun::integrate_adaptive(
      [q](double t) {
        const double c = std::cos(t);
        return std::sqrt(1.0 - q * c * c);
      },
      0.0, phi, 1e-14 * std::fmin(1.0, phi));
}

struct Liouville {
  double S;      // S(x)
  double ratio;  // S^2 / (1 - x^2), tends to 1 - q at x = 1
  double one_minus_x2;
};

Liouville liouville(double x, double q) {
  const double omx2 = (1.0 - x) * (1.0 + x);
  if (1.0 - x < kEndpointGap) {
    const double r = 1.0 - q * x * x;
    return {std::sqrt(omx2 * r), r, omx2};
  }
  const double S = specfun::s_map(x, q);
  return {S, S * S / omx2, omx2};
}

void check_grid_point(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("approximation defined on [0, 1], got x=" + std::to_string(x));
  }
}

}  // namespace

WkbFrame wkb_frame(double alpha, double c, int n, double chi) {
  WkbFrame f;
  f.alpha = alpha;
  f.c = c;
  f.n = n;
  f.chi = chi;
  if (!(alpha >= -0.5)) {
    f.reason = "alpha must be >= -1/2 for the Bessel approximation";
    return f;
  }
  f.constants = specfun::envelope_constants(alpha);
  f.q = chi > 0.0 ? c * c / chi : 1.0;
  if (!(f.q < 1.0)) {
    std::ostringstream os;
    os << "q = c^2/chi = " << f.q << " is not < 1";
    f.reason = os.str();
    return f;
  }
  const specfun::EllipticModulus r(std::sqrt(f.q));
  f.S0 = specfun::elliptic_e(r);
  f.K = specfun::elliptic_k(r);
  const double factor = kPi * (1.75 + 3.0 * alpha * alpha) * f.constants.m_alpha;
  const double lhs = (1.0 - f.q) * std::sqrt(chi);
  f.eps = (std::exp(1.0) - 1.0) * factor / lhs;
  if (lhs < factor) {
    std::ostringstream os;
    os << "(1-q) sqrt(chi) = " << lhs << " is below pi (7/4 + 3 alpha^2) m_alpha = " << factor;
    f.reason = os.str();
    return f;
  }
  f.admissible = true;
  return f;
}

WkbFrame wkb_frame(const GpswfFunction& f) { return wkb_frame(f.alpha(), f.c(), f.n(), f.chi()); }

double g_bound(double alpha, double q, double x) {
  if (!(q >= 0.0 && q < 1.0)) throw std::domain_error("g_bound: q must lie in [0, 1)");
  check_grid_point(x);
  if (x == 1.0) return 0.0;
  const double omx2 = (1.0 - x) * (1.0 + x);
  const double lead = (3.0 + 2.0 * q + 12.0 * alpha * alpha) / (4.0 * (1.0 - q));
  return lead * (q * x * std::sqrt(omx2) / std::sqrt(1.0 - q * x * x) + specfun::s_map(x, q)) +
         alpha * (alpha + 1.0) * specfun::incomplete_k(x, q);
}

std::vector<double> default_grid(int points) {
  if (points < 2) throw std::invalid_argument("grid needs at least 2 points");
  std::vector<double> g(points);
  for (int j = 0; j < points; ++j) g[j] = std::sin(kPi * j / (2.0 * (points - 1)));
  g.back() = 1.0;
  return g;
}

double a_alpha_exact(const GpswfFunction& f) {
  const double q = f.c() * f.c() / f.chi();
  return a_from_endpoint(f.alpha(), q, f.chi(), f.value(1.0));
}

BesselUniform::BesselUniform(const GpswfFunction& f) : frame_(wkb_frame(f)) {
  if (!frame_.admissible) throw InadmissibleError("Bessel approximation: " + frame_.reason);
  a_hat_ = std::sqrt(kPi / (2.0 * frame_.K));
  a_exact_ = a_from_endpoint(frame_.alpha, frame_.q, frame_.chi, f.value(1.0));
}

double BesselUniform::shape(double x) const {
  check_grid_point(x);
  const double a = frame_.alpha;
  const Liouville L = liouville(x, frame_.q);
  const double z = std::sqrt(frame_.chi) * L.S;
  const double p = 0.25 + 0.5 * a;
  return std::pow(frame_.chi * L.ratio, p) * specfun::bessel_j_scaled(a, z) /
         std::pow(1.0 - frame_.q * x * x, 0.25);
}

double BesselUniform::remainder_weight(double x) const {
  check_grid_point(x);
  const double a = frame_.alpha;
  const Liouville L = liouville(x, frame_.q);
  if (L.one_minus_x2 == 0.0) return 0.0;
  const double z = std::sqrt(frame_.chi) * L.S;
  const double tail = std::pow(1.0 - frame_.q * x * x, -0.75);
  if (z < frame_.constants.X_alpha) {
    // M/E = sqrt(2)|J_a(z)| = sqrt(2) z^a |J_a(z)/z^a|
    return std::sqrt(2.0) * std::pow(frame_.chi * L.ratio, 0.25 + 0.5 * a) *
           std::fabs(specfun::bessel_j_scaled(a, z)) * std::sqrt(L.one_minus_x2) * tail;
  }
  return std::pow(frame_.chi, 0.25) * std::sqrt(L.S) *
         specfun::modulus_over_weight(frame_.constants, z) *
         std::pow(L.one_minus_x2, 0.25 - 0.5 * a) * tail;
}

double BesselUniform::envelope(double x) const {
  return std::fabs(a_exact_ - a_hat_) * std::fabs(shape(x)) +
         frame_.eps * a_exact_ * remainder_weight(x);
}

ApproxReport bessel_report(const GpswfFunction& f, std::span<const double> grid) {
  const BesselUniform u(f);
  ApproxReport r;
  const std::size_t m = grid.size();
  r.grid.assign(grid.begin(), grid.end());
  r.approx.resize(m);
  r.reference.resize(m);
  r.envelope.resize(m);
  parallel_for(m, [&](std::size_t i) {
    const double x = grid[i];
    r.approx[i] = u.value(x);
    r.reference[i] = f.value(x);
    r.envelope[i] = u.envelope(x);
  });
  for (std::size_t i = 0; i < m; ++i) {
    const double err = std::fabs(r.approx[i] - r.reference[i]);
    r.sup_error = std::max(r.sup_error, err);
    r.max_envelope = std::max(r.max_envelope, r.envelope[i]);
    // rounding slack
    const double slack = 16.0 * std::numeric_limits<double>::epsilon() *
                         (std::fabs(r.approx[i]) + std::fabs(r.reference[i]));
    if (err > r.envelope[i] + slack) ++r.pointwise_violations;
  }
  r.envelope_violated = r.sup_error > r.max_envelope;
  return r;
}

NormCheck approximant_norm_check(const GpswfFunction& f) {
  const BesselUniform u(f);
  const WkbFrame& fr = u.frame();
  const double A = u.a_exact();
  const double root = std::sqrt(fr.chi);
  // x = cos(phi): psi~^2 w dx = A^2 sqrt(chi) S J_a(sqrt(chi) S)^2 / sqrt(1 - q cos^2 phi) dphi
  const int panels = std::max(16, static_cast<int>(std::ceil(2.0 * root * fr.S0 / kPi)) + 8);
  const specfun::QuadratureRule gl = specfun::gauss_legendre(20, 0.0, 1.0);
  const double h = 0.5 * kPi / panels;
  std::vector<double> partial(panels, 0.0);
  parallel_for(static_cast<std::size_t>(panels), [&](std::size_t p) {
    double s = 0.0;
    for (std::size_t k = 0; k < gl.size(); ++k) {
      const double phi = h * (static_cast<double>(p) + gl.nodes[k]);
      const double S = s_of_angle(phi, fr.q);
      const double c = std::cos(phi);
      const double j = specfun::bessel_j(fr.alpha, root * S);
      s += gl.weights[k] * root * S * j * j / std::sqrt(1.0 - fr.q * c * c);
    }
    partial[p] = s * h;
  });
  double integral = 0.0;
  for (double v : partial) integral += v;
  NormCheck out;
  out.norm_sq = A * A * integral;
  out.leading = A * A * fr.K / kPi;
  out.deviation = std::fabs(out.norm_sq - out.leading);
  out.bound = A * A * fr.constants.M_alpha_cap / ((1.0 - fr.q) * root);
  return out;
}

JacobiFrame jacobi_frame(const GpswfFunction& f, double q0) {
  const double a = f.alpha();
  if (!(a > 0.0 && a < 1.5)) {
    throw InadmissibleError("Jacobi approximation: alpha must lie in (0,3/2), got " +
                            std::to_string(a));
  }
  if (!(q0 > 0.0 && q0 < 1.0)) throw std::invalid_argument("q0 must lie in (0, 1)");
  JacobiFrame fr;
  fr.alpha = a;
  fr.c = f.c();
  fr.n = f.n();
  fr.q = f.c() * f.c() / f.chi();
  if (fr.q > q0) {
    std::ostringstream os;
    os << "Jacobi approximation: q = c^2/chi = " << fr.q << " exceeds q0 = " << q0
       << "; increase n";
    throw InadmissibleError(os.str());
  }
  fr.a_n = f.coeffs()[static_cast<std::size_t>(f.n())];
  const double c2 = f.c() * f.c();
  fr.scaled_norm_defect = c2 > 0.0 ? std::fabs(1.0 - fr.a_n) * (2.0 * f.n() + 2.0 * a + 1.0) / c2
                                   : 0.0;
  return fr;
}

JacobiReport jacobi_report(const GpswfFunction& f, std::span<const double> grid, double q0,
                           std::optional<double> c_hat) {
  JacobiReport out;
  out.frame = jacobi_frame(f, q0);
  const specfun::OrthonormalJacobi basis(f.alpha());
  ApproxReport& r = out.report;
  const std::size_t m = grid.size();
  std::vector<double> single(f.coeffs().size(), 0.0);
  single[static_cast<std::size_t>(f.n())] = out.frame.a_n;
  r.grid.assign(grid.begin(), grid.end());
  r.approx.resize(m);
  r.reference.resize(m);
  parallel_for(m, [&](std::size_t i) {
    const double x = grid[i];
    if (!(x >= -1.0 && x <= 1.0)) throw std::domain_error("grid point outside [-1, 1]");
    r.approx[i] = basis.clenshaw(single, x);
    r.reference[i] = f.value(x);
  });
  for (std::size_t i = 0; i < m; ++i) {
    r.sup_error = std::max(r.sup_error, std::fabs(r.approx[i] - r.reference[i]));
  }
  const double c2 = f.c() * f.c();
  const double scale = f.n() + 2.0 * f.alpha() + 1.0;
  out.scaled_error = c2 > 0.0 ? r.sup_error * scale / c2 : 0.0;
  out.c_hat = c_hat.value_or(out.scaled_error);
  const double bound = out.c_hat * c2 / scale;
  r.envelope.assign(m, bound);
  r.max_envelope = bound;
  for (std::size_t i = 0; i < m; ++i) {
    if (std::fabs(r.approx[i] - r.reference[i]) > bound) ++r.pointwise_violations;
  }
  r.envelope_violated = r.sup_error > bound;
  return out;
}

}  // namespace gpswf::approx
