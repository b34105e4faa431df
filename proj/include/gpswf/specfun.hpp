#pragma once

// Double-precision special functions used throughout the library: Gamma and
// Beta, Bessel functions of real order, complete and incomplete elliptic
// integrals, the Liouville arc-length map, and the Bessel envelope constants
// that control the uniform approximation error.
//
// Everything here is a pure function of its arguments.

#include <utility>

namespace gpswf::specfun {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEuler = 0.57721566490153286061;

// ---------------------------------------------------------------------------
// Gamma / Beta

double gamma_fn(double x);
double log_gamma(double x);
double beta_fn(double a, double b);
double log_beta(double a, double b);

// ---------------------------------------------------------------------------
// Bessel functions of the first and second kind, real order nu >= -1/2.

struct BesselJY {
  double j;
  double y;
  double jp;  // d/dx J_nu
  double yp;  // d/dx Y_nu
};

// J, Y and their derivatives for x > 0.
BesselJY bessel_jy(double nu, double x);

double bessel_j(double nu, double x);
double bessel_y(double nu, double x);

// J_nu(x) / x^nu, finite (and smooth) down to x = 0.
double bessel_j_scaled(double nu, double x);

// Terms of the Temme series: gam1 = (1/G(1-mu) - 1/G(1+mu)) / (2 mu),
// gam2 = (1/G(1-mu) + 1/G(1+mu)) / 2, for |mu| <= 1/2.
std::pair<double, double> temme_gammas(double mu);

// ---------------------------------------------------------------------------
// Elliptic integrals

class EllipticModulus {
 public:
  explicit EllipticModulus(double r);
  double value() const noexcept { return r_; }

 private:
  double r_;
};

// K(r) = int_0^1 dt / sqrt((1-t^2)(1-r^2 t^2)), r < 1.
double elliptic_k(EllipticModulus r);
// E(r) = int_0^1 sqrt((1-r^2 t^2)/(1-t^2)) dt, r <= 1.
double elliptic_e(EllipticModulus r);

// S(x) = int_x^1 sqrt((1-q t^2)/(1-t^2)) dt, 0 <= x <= 1, 0 <= q < 1.
double s_map(double x, double q);

// K(x, sqrt q) = int_x^1 dt / sqrt((1-t^2)(1-q t^2)).
double incomplete_k(double x, double q);

// ---------------------------------------------------------------------------
// Bessel envelope machinery (Olver weight and modulus functions)

struct BesselEnvelopeConstants {
  double alpha = 0.0;
  double mu_alpha = 0.0;     // |alpha^2 - 1/4|
  double c_alpha = 0.0;      // bound on sup sqrt(x)|J_alpha(x)|
  double m_alpha = 0.0;      // bound on sup x M_alpha(x)^2
  double M_alpha_cap = 0.0;  // bound on sup |eta_alpha|
  double kappa_alpha = 0.0;
  double X_alpha = 0.0;      // first positive zero of J_alpha + Y_alpha
};

// c_alpha on its own (used for both alpha and alpha + 1 in kappa_alpha).
double c_alpha_bound(double alpha);

BesselEnvelopeConstants envelope_constants(double alpha);

struct WeightModulus {
  double E;
  double M;
};

WeightModulus weight_modulus(double alpha, double x);
WeightModulus weight_modulus(const BesselEnvelopeConstants& k, double x);

// M_alpha(x) / E_alpha(x): sqrt(2) J_alpha(x) below X_alpha and
// sqrt(J^2 + Y^2) above. Evaluated without forming E and M separately.
double modulus_over_weight(const BesselEnvelopeConstants& k, double x);

// eta_alpha(x) = int_0^x t J_alpha(t)^2 dt - x / pi, in closed form.
double eta_fn(double alpha, double x);

}  // namespace gpswf::specfun
