#include "gpswf/spectrum.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <tuple>
#include <sstream>
#include <stdexcept>

#include "gpswf/errors.hpp"
#include "gpswf/parallel.hpp"
#include "gpswf/quadrature.hpp"
#include "gpswf/specfun.hpp"

namespace gpswf::spectrum {

namespace {

using specfun::kPi;

Eigen::MatrixXd nystrom_matrix(const SincLikeKernel& k, double c,
                               const specfun::QuadratureRule& rule) {
  const int n = static_cast<int>(rule.size());
  Eigen::MatrixXd m(n, n);
  std::vector<double> sw(n);
  for (int i = 0; i < n; ++i) sw[i] = std::sqrt(rule.weights[i]);
  const double pre = c / (2.0 * kPi);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t row) {
    const int i = static_cast<int>(row);
    for (int j = 0; j <= i; ++j) {
      m(i, j) = pre * k(c * (rule.nodes[i] - rule.nodes[j])) * sw[i] * sw[j];
    }
  });
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) m(i, j) = m(j, i);
  }
  return m;
}

std::vector<double> descending(const Eigen::VectorXd& ascending) {
  std::vector<double> out(ascending.size());
  for (Eigen::Index i = 0; i < ascending.size(); ++i) out[i] = ascending[ascending.size() - 1 - i];
  return out;
}

double log_mu_prefactor(double a, int n) {
  using specfun::log_gamma;
  return 0.5 * std::log(kPi) + log_gamma(n + a + 1.0) + log_gamma(n + 2.0 * a + 1.0) -
         log_gamma(n + a + 1.5) - log_gamma(2.0 * n + 2.0 * a + 1.0);
}

// Per-(alpha, tau) eigen-solutions shared by mu_explicit calls. Indices are
// grouped in fixed blocks so a result never depends on earlier requests.
class ChiCache {
 public:
  static constexpr int kBlock = 32;

  std::shared_ptr<const ChiSpectrum> get(double alpha, double tau, int n) {
    const int top = (n / kBlock + 1) * kBlock - 1;
    const std::tuple<double, double, int> key{alpha, tau, top};
    {
      std::shared_lock lock(mutex_);
      auto it = map_.find(key);
      if (it != map_.end()) return it->second;
    }
    auto fresh = chi_spectrum({alpha, tau}, top);
    std::unique_lock lock(mutex_);
    auto& slot = map_[key];
    if (!slot) slot = fresh;
    return slot;
  }

  void clear() {
    std::unique_lock lock(mutex_);
    map_.clear();
  }

 private:
  std::shared_mutex mutex_;
  std::map<std::tuple<double, double, int>, std::shared_ptr<const ChiSpectrum>> map_;
};

ChiCache& chi_cache() {
  static ChiCache cache;
  return cache;
}

}  // namespace

SincLikeKernel::SincLikeKernel(double alpha) : alpha_(alpha) {
  if (!(alpha > -1.0)) throw std::domain_error("SincLikeKernel: alpha must be > -1");
  scale_ = std::sqrt(kPi) * std::pow(2.0, alpha + 0.5) * specfun::gamma_fn(alpha + 1.0);
  at_zero_ = std::sqrt(kPi) *
             std::exp(specfun::log_gamma(alpha + 1.0) - specfun::log_gamma(alpha + 1.5));
}

double SincLikeKernel::operator()(double u) const {
  if (u == 0.0) return at_zero_;
  return scale_ * specfun::bessel_j_scaled(alpha_ + 0.5, std::fabs(u));
}

double kernel_eval(double alpha, double u) { return SincLikeKernel(alpha)(u); }

double OperatorSpectrum::sum() const {
  double s = 0.0;
  for (double v : lambdas) s += v;
  return s;
}

double OperatorSpectrum::sum_squares() const {
  double s = 0.0;
  for (double v : lambdas) s += v * v;
  return s;
}

bool OperatorSpectrum::any_unstable() const {
  return std::any_of(unstable.begin(), unstable.end(), [](bool b) { return b; });
}

OperatorSpectrum nystrom_spectrum(const ProblemParams& params, int n_quad, int n_keep,
                                  const NystromOptions& options) {
  params.validate();
  if (n_keep < 0 || n_quad < 2 * n_keep + 20) {
    throw std::invalid_argument("nystrom_spectrum: need n_quad >= 2 n_keep + 20 (n_quad=" +
                                std::to_string(n_quad) + ", n_keep=" + std::to_string(n_keep) +
                                ")");
  }
  const SincLikeKernel kernel(params.alpha);
  const auto rule = specfun::gauss_jacobi(n_quad, params.alpha);
  const Eigen::MatrixXd m = nystrom_matrix(kernel, params.c, rule);

  OperatorSpectrum out;
  out.alpha = params.alpha;
  out.c = params.c;
  out.n_quad = n_quad;
  out.n_keep = n_keep;
  out.nodes = rule.nodes;
  out.weights = rule.weights;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      m, options.keep_modes ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("nystrom_spectrum: eigensolver failed");
  out.lambdas = descending(solver.eigenvalues());
  if (options.keep_modes) {
    out.modes.resize(static_cast<std::size_t>(n_keep) * n_quad);
    for (int k = 0; k < n_keep; ++k) {
      const auto col = solver.eigenvectors().col(n_quad - 1 - k);
      for (int i = 0; i < n_quad; ++i) out.modes[static_cast<std::size_t>(k) * n_quad + i] = col[i];
    }
  }
  out.unstable.assign(n_keep, false);
  out.refinement_change.assign(n_keep, 0.0);
  if (options.refine) {
    const auto rule2 = specfun::gauss_jacobi(2 * n_quad, params.alpha);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> fine(
        nystrom_matrix(kernel, params.c, rule2), Eigen::EigenvaluesOnly);
    if (fine.info() != Eigen::Success) throw NumericError("nystrom_spectrum: eigensolver failed");
    const std::vector<double> lf = descending(fine.eigenvalues());
    for (int k = 0; k < n_keep; ++k) {
      out.refinement_change[k] = std::fabs(out.lambdas[k] - lf[k]);
      out.unstable[k] = out.refinement_change[k] > options.stability_tol;
    }
  }
  return out;
}

double mode_correlation(const OperatorSpectrum& s, const GpswfFunction& f) {
  const int n = f.n();
  if (n >= s.n_keep || s.modes.empty()) {
    throw std::out_of_range("mode_correlation: mode not stored in the spectrum");
  }
  double dot = 0.0;
  double nv = 0.0;
  double nu = 0.0;
  for (int i = 0; i < s.n_quad; ++i) {
    const double u = std::sqrt(s.weights[i]) * f.value(s.nodes[i]);
    const double v = s.mode(n, i);
    dot += u * v;
    nu += u * u;
    nv += v * v;
  }
  return std::fabs(dot) / std::sqrt(nu * nv);
}

std::complex<double> mu_eigenrelation(const GpswfFunction& f) {
  const double c = f.c();
  double x0 = 1.0;
  double best = -1.0;
  constexpr int kCoarse = 201;
  for (int i = 0; i < kCoarse; ++i) {
    const double x = -1.0 + 2.0 * i / (kCoarse - 1);
    const double v = std::fabs(f.value(x));
    if (v > best) {
      best = v;
      x0 = x;
    }
  }
  if (best < 1e-8) {
    throw NumericError("mu_eigenrelation: psi_n is below 1e-8 on the whole coarse grid");
  }
  const int nodes = f.spectrum().truncation() + static_cast<int>(std::ceil(c)) + 40;
  const auto rule = specfun::gauss_jacobi(nodes, f.alpha());
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double y = rule.nodes[i];
    const double g = rule.weights[i] * f.value(y);
    re += g * std::cos(c * x0 * y);
    im += g * std::sin(c * x0 * y);
  }
  const double psi0 = f.value(x0);
  return {re / psi0, im / psi0};
}

double lambda_from_mu(double c, std::complex<double> mu) { return c / (2.0 * kPi) * std::norm(mu); }

double f_n_moment(const GpswfFunction& f) {
  const auto rule = specfun::gauss_jacobi(f.spectrum().truncation() + 8, f.alpha());
  return rule.integrate([&](double x) { return x * f.value(x) * f.derivative(x); });
}

double f_n_moment_by_parts(const GpswfFunction& f) {
  const double a = f.alpha();
  if (!(a > 0.0)) {
    throw std::domain_error("f_n_moment_by_parts: alpha must be > 0 (w_{alpha-1} integrable)");
  }
  const auto rule = specfun::gauss_jacobi(f.spectrum().truncation() + 8, a - 1.0);
  const double m = rule.integrate([&](double x) {
    const double v = f.value(x);
    return v * v;
  });
  return -(a + 0.5) + a * m;
}

MuExplicit mu_explicit(const ProblemParams& params, int n, int tau_nodes) {
  params.validate();
  if (!(params.c > 0.0)) throw std::domain_error("mu_explicit: c must be > 0");
  if (n < 0 || tau_nodes < 1) throw std::invalid_argument("mu_explicit: bad n or tau_nodes");
  const double a = params.alpha;
  const auto gl = specfun::gauss_legendre(tau_nodes, 0.0, params.c);
  std::vector<double> integrand(tau_nodes);
  std::vector<double> q(tau_nodes + 1);
  parallel_for(static_cast<std::size_t>(tau_nodes) + 1, [&](std::size_t k) {
    const double tau = k < static_cast<std::size_t>(tau_nodes) ? gl.nodes[k] : params.c;
    const GpswfFunction f(chi_cache().get(a, tau, n), n);
    q[k] = tau * tau / f.chi();
    if (k < static_cast<std::size_t>(tau_nodes)) integrand[k] = (f_n_moment(f) - n) / tau;
  });
  for (int k = 0; k <= tau_nodes; ++k) {
    if (!(q[k] < 1.0)) {
      std::ostringstream os;
      os << "mu_explicit: q = tau^2/chi_n = " << q[k] << " >= 1 on the tau path (n=" << n
         << ", c=" << params.c << ")";
      throw InadmissibleError(os.str());
    }
  }
  MuExplicit out;
  out.n = n;
  for (int k = 0; k < tau_nodes; ++k) out.phi += gl.weights[k] * integrand[k];
  out.log_abs_mu = log_mu_prefactor(a, n) + n * std::log(params.c) + out.phi;
  out.log_lambda = std::log(params.c / (2.0 * kPi)) + 2.0 * out.log_abs_mu;
  const double mag = std::exp(out.log_abs_mu);
  static constexpr std::complex<double> kPhase[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  out.mu = mag * kPhase[n % 4];
  return out;
}

void clear_mu_cache() { chi_cache().clear(); }

std::vector<CrossCheck> cross_check(const OperatorSpectrum& s, int n_max, double trusted) {
  if (n_max < 0 || n_max >= s.n_quad) throw std::out_of_range("cross_check: n_max out of range");
  const ProblemParams params{s.alpha, s.c};
  const auto chis = chi_spectrum(params, n_max);
  std::vector<CrossCheck> out(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    CrossCheck& r = out[n];
    const GpswfFunction f(chis, n);
    r.n = n;
    r.lambda_nystrom = s.lambdas[n];
    r.mu = mu_eigenrelation(f);
    r.lambda_mu = lambda_from_mu(s.c, r.mu);
    const double mag = std::abs(r.mu);
    r.phase_residual = (n % 2 == 0 ? std::fabs(r.mu.imag()) : std::fabs(r.mu.real())) / mag;
    try {
      r.lambda_explicit = std::exp(mu_explicit(params, n).log_lambda);
    } catch (const InadmissibleError&) {
      r.lambda_explicit.reset();
    }
    double ref = r.lambda_nystrom;
    if (r.lambda_nystrom < trusted && r.lambda_explicit) {
      ref = *r.lambda_explicit;
      r.explicit_reference = true;
    }
    r.rel_residual = std::fabs(ref - r.lambda_mu) / std::fabs(ref);
    if (r.lambda_nystrom >= trusted && n < s.n_keep && !s.modes.empty()) {
      r.mode_correlation = mode_correlation(s, f);
    }
  }
  return out;
}

DecayReport decay_check(const ProblemParams& params, int n_lo, int n_hi) {
  params.validate();
  const double a = params.alpha;
  const double c = params.c;
  if (!(a > 0.0 && a < 1.5)) throw InadmissibleError("decay_check: alpha must lie in (0,3/2)");
  if (!(c > 0.0)) throw std::domain_error("decay_check: c must be > 0");
  if (n_lo < 0 || n_hi < n_lo + 1) throw std::invalid_argument("decay_check: need n_lo < n_hi");

  NystromOptions opt;
  opt.refine = false;
  opt.keep_modes = false;
  const int keep = n_hi + 1;
  const auto ny = nystrom_spectrum(params, 2 * keep + 40, keep, opt);

  DecayReport r;
  for (int n = n_lo; n <= n_hi; ++n) {
    const double lam = ny.lambdas[n];
    r.n.push_back(n);
    if (lam >= 1e-14) {
      r.log_lambda.push_back(std::log(lam));
      r.from_explicit.push_back(false);
    } else {
      r.log_lambda.push_back(mu_explicit(params, n).log_lambda);
      r.from_explicit.push_back(true);
    }
    r.rate.push_back((2.0 * n + 1.0) * std::log((4.0 * n + 4.0 * a + 2.0) / (std::exp(1.0) * c)));
  }

  // log C + C c^2 = log lambda_{n_lo} + rate_{n_lo}; the left side increases with C.
  const double target = r.log_lambda.front() + r.rate.front();
  const double c2 = c * c;
  double lo = -60.0;
  double hi = 60.0;
  auto lhs = [&](double lc) { return lc + std::exp(lc) * c2; };
  if (lhs(lo) > target) {
    hi = lo;
  } else {
    while (lhs(hi) < target) hi += 60.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (lhs(mid) < target ? lo : hi) = mid;
    }
  }
  r.c_hat = std::exp(hi);
  const double log_c = std::log(r.c_hat);
  r.max_log_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r.n.size(); ++i) {
    const double excess = r.log_lambda[i] - (log_c - r.rate[i] + r.c_hat * c2);
    r.max_log_excess = std::max(r.max_log_excess, excess);
    if (excess > 1e-12) ++r.bound_violations;
  }

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double m = static_cast<double>(r.n.size());
  for (std::size_t i = 0; i < r.n.size(); ++i) {
    const double x = r.rate[i];
    const double y = -r.log_lambda[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  r.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return r;
}

TraceNorm trace_and_norm(const ProblemParams& params) {
  params.validate();
  using specfun::log_beta;
  using specfun::log_gamma;
  const double a = params.alpha;
  const double c = params.c;
  const double ln2 = std::log(2.0);
  TraceNorm t;
  const double log_mass = (2.0 * a + 1.0) * ln2 + log_beta(a + 1.0, a + 1.0);
  t.trace = c / (2.0 * kPi) * std::exp(2.0 * log_mass);
  t.trace_gamma_form =
      c / (2.0 * kPi) * kPi * std::exp(2.0 * (log_gamma(a + 1.0) - log_gamma(a + 1.5)));
  t.gamma_alpha =
      std::exp(4.0 * a * ln2 + 2.0 * (log_beta(2.0 * a + 1.0, 2.0 * a + 1.0) -
                                      log_beta(a + 1.0, a + 1.0)));
  t.hs_norm_limit = t.gamma_alpha * t.trace;
  t.nist_moment = std::exp(-2.0 * a * ln2 + 0.5 * std::log(kPi) + log_gamma(2.0 * a + 1.0) -
                           log_gamma(2.0 * a + 1.5) - 2.0 * log_gamma(a + 1.0));
  t.hs_limit_direct = c / (4.0 * kPi) *
                      std::exp((2.0 * a + 1.0) * ln2 + 2.0 * log_gamma(a + 1.0) +
                               (4.0 * a + 1.0) * ln2 + log_beta(2.0 * a + 1.0, 2.0 * a + 1.0)) *
                      t.nist_moment;
  return t;
}

CountingReport counting(const ProblemParams& params, double delta, const OperatorSpectrum& s) {
  params.validate();
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("counting: delta must lie in (0,1)");
  if (!(params.alpha >= 0.0)) throw std::domain_error("counting: alpha must be >= 0");
  const TraceNorm t = trace_and_norm(params);
  CountingReport r;
  r.delta = delta;
  r.gamma_alpha = t.gamma_alpha;
  r.trace_value = t.trace;
  r.hs_norm_value = s.sum_squares();
  r.m_empirical = static_cast<int>(
      std::count_if(s.lambdas.begin(), s.lambdas.end(), [&](double l) { return l >= delta; }));
  r.upper_bound = t.trace / delta;
  r.lower_asymptotic = (t.gamma_alpha - delta) / (1.0 - delta) * t.trace;
  r.lower_marzo = t.trace - (t.trace - r.hs_norm_value) / (1.0 - delta);
  r.gap = r.lower_asymptotic - r.m_empirical;
  return r;
}

}  // namespace gpswf::spectrum
