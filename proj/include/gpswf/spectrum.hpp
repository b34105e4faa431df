#pragma once

// Spectra of the weighted finite Fourier transform F_c^alpha and of
// Q_c^alpha = (c/2pi) F* F: Nystrom eigenvalues, mu_n by the eigen-relation
// and by the explicit product formula, trace / Hilbert-Schmidt identities,
// decay and counting checks.

#include <complex>
#include <optional>
#include <vector>

#include "gpswf/sturm.hpp"

namespace gpswf::spectrum {

// K_alpha(u) = sqrt(pi) 2^{alpha+1/2} Gamma(alpha+1) J_{alpha+1/2}(|u|) / |u|^{alpha+1/2}
class SincLikeKernel {
 public:
  explicit SincLikeKernel(double alpha);
  double alpha() const noexcept { return alpha_; }
  double operator()(double u) const;
  // sqrt(pi) Gamma(alpha+1) / Gamma(alpha+3/2)
  double at_zero() const noexcept { return at_zero_; }

 private:
  double alpha_;
  double scale_;
  double at_zero_;
};

double kernel_eval(double alpha, double u);

struct NystromOptions {
  bool refine = true;          // repeat at 2N and flag unstable eigenvalues
  bool keep_modes = true;      // store the top n_keep eigenvectors
  double stability_tol = 1e-10;
};

struct OperatorSpectrum {
  double alpha = 0.0;
  double c = 0.0;
  int n_quad = 0;
  int n_keep = 0;
  std::vector<double> lambdas;            // all n_quad eigenvalues, decreasing
  std::vector<double> refinement_change;  // |lambda_k(N) - lambda_k(2N)|, k < n_keep
  std::vector<bool> unstable;             // per kept eigenvalue
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> modes;  // column-major n_quad x n_keep

  double mode(int k, int i) const { return modes[static_cast<std::size_t>(k) * n_quad + i]; }
  double sum() const;
  double sum_squares() const;
  bool any_unstable() const;
};

// Eigenvalues of the symmetric matrix (c/2pi) K(c(x_i - x_j)) sqrt(w_i w_j) on an
// N-point Gauss-Jacobi rule. Requires n_quad >= 2 n_keep + 20.
OperatorSpectrum nystrom_spectrum(const ProblemParams& params, int n_quad, int n_keep,
                                  const NystromOptions& options = {});

// |<v_n, sqrt(w) psi_n>| / (|v_n| |sqrt(w) psi_n|) for the Nystrom mode n = f.n().
double mode_correlation(const OperatorSpectrum& s, const GpswfFunction& f);

// mu_n = (1/psi_n(x0)) int e^{i c x0 y} psi_n(y) w(y) dy with |psi_n(x0)| maximal.
std::complex<double> mu_eigenrelation(const GpswfFunction& f);

// (c / 2pi) |mu|^2
double lambda_from_mu(double c, std::complex<double> mu);

// F_n(c, alpha) = int x psi_n psi_n' w dx.
double f_n_moment(const GpswfFunction& f);
// -(alpha + 1/2) + alpha int psi_n^2 w_{alpha-1}; alpha > 0 only.
double f_n_moment_by_parts(const GpswfFunction& f);

struct MuExplicit {
  int n = 0;
  double phi = 0.0;          // Phi_n(c)
  double log_abs_mu = 0.0;
  double log_lambda = 0.0;   // log((c/2pi)|mu|^2)
  std::complex<double> mu;   // zero if |mu| underflows
};

// mu_n = i^n sqrt(pi) G(n+a+1) G(n+2a+1) / (G(n+a+3/2) G(2n+2a+1)) c^n exp(Phi_n(c)),
// Phi_n(c) = int_0^c (F_n(tau) - n)/tau dtau by `tau_nodes`-point Gauss-Legendre.
// Throws InadmissibleError if c^2/chi_n >= 1 anywhere on the tau path.
MuExplicit mu_explicit(const ProblemParams& params, int n, int tau_nodes = 64);

// Drops every cached per-(alpha, tau) spectrum used by mu_explicit.
void clear_mu_cache();

struct CrossCheck {
  int n = 0;
  double lambda_nystrom = 0.0;
  std::complex<double> mu;     // eigen-relation value
  double lambda_mu = 0.0;      // (c/2pi)|mu|^2
  std::optional<double> lambda_explicit;
  bool explicit_reference = false;  // reference was the explicit formula
  double rel_residual = 0.0;   // |lambda_ref - lambda_mu| / lambda_ref
  double phase_residual = 0.0; // off-axis part of mu i^{-n}, relative to |mu|
  std::optional<double> mode_correlation;  // only for trusted Nystrom values
};

// lambda-mu consistency for n = 0..n_max. Nystrom eigenvalues at or above
// `trusted` are the reference; smaller ones are compared against the
// explicit product formula (when its tau path is admissible).
std::vector<CrossCheck> cross_check(const OperatorSpectrum& s, int n_max,
                                    double trusted = 1e-10);

struct DecayReport {
  std::vector<int> n;
  std::vector<double> log_lambda;
  std::vector<bool> from_explicit;  // false: Nystrom value
  std::vector<double> rate;         // (2n+1) log((4n+4a+2)/(e c))
  double c_hat = 0.0;               // calibrated at the smallest n
  int bound_violations = 0;
  double max_log_excess = 0.0;      // max of log lambda_n - log bound_n (<= 0 when it holds)
  double slope = 0.0;               // least-squares slope of -log lambda vs rate
};

// Requires 0 < alpha < 3/2. Nystrom values are used down to 1e-14, explicit
// formula values below.
DecayReport decay_check(const ProblemParams& params, int n_lo, int n_hi);

struct TraceNorm {
  double trace = 0.0;          // (c/2pi) (2^{2a+1} B(a+1,a+1))^2
  double trace_gamma_form = 0.0;  // (c/2pi) pi Gamma(a+1)^2 / Gamma(a+3/2)^2
  double gamma_alpha = 0.0;    // 2^{4a} (B(2a+1,2a+1) / B(a+1,a+1))^2
  double hs_norm_limit = 0.0;  // gamma_alpha * trace
  double nist_moment = 0.0;    // int_R J_{a+1/2}^2(t) / t^{2a+1} dt
  // (c/4pi) 2^{2a+1} Gamma(a+1)^2 2^{4a+1} B(2a+1,2a+1) nist_moment
  double hs_limit_direct = 0.0;
};

TraceNorm trace_and_norm(const ProblemParams& params);

struct CountingReport {
  double delta = 0.0;
  int m_empirical = 0;
  double upper_bound = 0.0;       // trace / delta
  double lower_asymptotic = 0.0;  // (gamma - delta)/(1 - delta) trace, up to o(c)
  double lower_marzo = 0.0;       // trace - (trace - sum lambda^2)/(1 - delta)
  double gap = 0.0;               // lower_asymptotic - m_empirical
  double gamma_alpha = 0.0;
  double trace_value = 0.0;
  double hs_norm_value = 0.0;     // sum lambda^2 from the Nystrom spectrum
};

CountingReport counting(const ProblemParams& params, double delta, const OperatorSpectrum& s);

}  // namespace gpswf::spectrum
