#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/ellint_2.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gpswf/approx.hpp"
#include "gpswf/errors.hpp"

using namespace gpswf;
using namespace gpswf::approx;

namespace {

// A chi^{1/4} sqrt(S) J_alpha(sqrt(chi) S) / ((1-x^2)^{1/4+alpha/2} (1-qx^2)^{1/4}),
// built from boost elliptic integrals and Bessel functions.
double bessel_form_oracle(double a, double chi, double q, double amp, double x) {
  const double k = std::sqrt(q);
  const double s = boost::math::ellint_2(k) - boost::math::ellint_2(k, std::asin(x));
  const double j = boost::math::cyl_bessel_j(a, std::sqrt(chi) * s);
  return amp * std::pow(chi, 0.25) * std::sqrt(s) * j /
         (std::pow(1.0 - x * x, 0.25 + a / 2.0) * std::pow(1.0 - q * x * x, 0.25));
}

}  // namespace

TEST_CASE("frame: admissible and inadmissible cases") {
  const auto s = chi_spectrum({0.5, 5.0}, 40);
  const auto ok = wkb_frame(GpswfFunction(s, 40));
  CHECK(ok.admissible);
  CHECK(ok.reason.empty());
  CHECK(ok.q == doctest::Approx(25.0 / s->chi(40)));
  CHECK(ok.K == doctest::Approx(boost::math::ellint_1(std::sqrt(ok.q))));
  CHECK(ok.S0 == doctest::Approx(boost::math::ellint_2(std::sqrt(ok.q))));

  const auto low = wkb_frame(GpswfFunction(s, 0));
  CHECK_FALSE(low.admissible);
  CHECK(low.reason.find("q = c^2/chi") != std::string::npos);

  const auto s2 = chi_spectrum({1.0, 1.0}, 2);
  const auto small = wkb_frame(GpswfFunction(s2, 2));
  CHECK_FALSE(small.admissible);
  CHECK(small.reason.find("sqrt(chi)") != std::string::npos);
  CHECK_THROWS_AS(BesselUniform(GpswfFunction(s2, 2)), InadmissibleError);

  CHECK_FALSE(wkb_frame(-0.75, 1.0, 10, 200.0).admissible);
}

TEST_CASE("Bessel form matches an independent construction") {
  for (auto [a, c, n] : {std::tuple{0.5, 5.0, 40}, {1.0, 3.0, 30}, {0.0, 4.0, 50}}) {
    const auto s = chi_spectrum({a, c}, n);
    const GpswfFunction f(s, n);
    const BesselUniform u(f);
    const double q = u.frame().q;
    CHECK(u.a_hat() == doctest::Approx(std::sqrt(std::numbers::pi / (2.0 * boost::math::ellint_1(std::sqrt(q))))));
    for (double x : {0.0, 0.2, 0.5, 0.8, 0.95, 0.999}) {
      const double ref = bessel_form_oracle(a, f.chi(), q, u.a_hat(), x);
      CHECK(std::fabs(u.value(x) - ref) < 1e-10 * std::max(1.0, std::fabs(ref)));
    }
  }
}

TEST_CASE("endpoint value equals the x -> 1 limit") {
  const auto s = chi_spectrum({0.5, 5.0}, 40);
  const BesselUniform u(GpswfFunction(s, 40));
  CHECK(u.shape(1.0) == doctest::Approx(u.shape(1.0 - 1e-9)).epsilon(1e-6));
}

TEST_CASE("exact normalization constant reproduces psi(1)") {
  const auto s = chi_spectrum({1.0, 5.0}, 60);
  const GpswfFunction f(s, 60);
  const BesselUniform u(f);
  CHECK(u.a_exact() * u.shape(1.0) == doctest::Approx(f.value(1.0)).epsilon(1e-12));
  CHECK(a_alpha_exact(f) == doctest::Approx(u.a_exact()));
}

TEST_CASE("envelope dominates the error on the default grid") {
  for (double a : {0.5, 1.0}) {
    for (double c : {3.0, 5.0}) {
      for (int n : {30, 60}) {
        const auto s = chi_spectrum({a, c}, n);
        const GpswfFunction f(s, n);
        const auto r = bessel_report(f, default_grid(801));
        CHECK_FALSE(r.envelope_violated);
        CHECK(r.pointwise_violations == 0);
        CHECK(r.sup_error <= r.max_envelope);
      }
    }
  }
}

TEST_CASE("approximant norm check") {
  const auto s = chi_spectrum({0.5, 5.0}, 40);
  const auto nc = approximant_norm_check(GpswfFunction(s, 40));
  CHECK(nc.holds());
  CHECK(nc.norm_sq == doctest::Approx(0.5).epsilon(1e-2));
}

TEST_CASE("g bound") {
  CHECK(g_bound(0.5, 0.3, 1.0) == 0.0);
  double prev = g_bound(0.5, 0.3, 0.0);
  for (double x = 0.05; x < 1.0; x += 0.05) {
    const double g = g_bound(0.5, 0.3, x);
    CHECK(g >= 0.0);
    CHECK(g <= prev);
    prev = g;
  }
  CHECK_THROWS_AS(g_bound(0.5, 1.0, 0.5), std::domain_error);
}

TEST_CASE("default grid") {
  const auto g = default_grid(5);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 1.0);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
  CHECK_THROWS(default_grid(1));
}

TEST_CASE("Jacobi form") {
  SUBCASE("c = 0 reproduces psi exactly") {
    const auto s = chi_spectrum({0.5, 0.0}, 10);
    const auto r = jacobi_report(GpswfFunction(s, 10), default_grid(401));
    CHECK(r.report.sup_error == 0.0);
    CHECK(r.frame.a_n == 1.0);
    CHECK_FALSE(r.report.envelope_violated);
  }
  SUBCASE("refuses alpha outside (0,3/2)") {
    const auto s = chi_spectrum({2.0, 1.0}, 10);
    try {
      jacobi_frame(GpswfFunction(s, 10));
      FAIL("expected a refusal");
    } catch (const InadmissibleError& e) {
      CHECK(std::string(e.what()).find("alpha must lie in (0,3/2)") != std::string::npos);
    }
    const auto s0 = chi_spectrum({0.0, 1.0}, 10);
    CHECK_THROWS_AS(jacobi_frame(GpswfFunction(s0, 10)), InadmissibleError);
  }
  SUBCASE("refuses q above q0") {
    const auto s = chi_spectrum({0.5, 10.0}, 3);
    CHECK_THROWS_AS(jacobi_frame(GpswfFunction(s, 3), 0.9), InadmissibleError);
  }
  SUBCASE("error scales like c^2 / n") {
    const auto s = chi_spectrum({0.5, 2.0}, 200);
    const auto g = default_grid(801);
    const auto a = jacobi_report(GpswfFunction(s, 50), g);
    const auto b = jacobi_report(GpswfFunction(s, 200), g);
    CHECK(a.scaled_error == doctest::Approx(b.scaled_error).epsilon(0.2));
    CHECK(a.frame.a_n == doctest::Approx(GpswfFunction(s, 50).coeffs()[50]));
    const auto bounded = jacobi_report(GpswfFunction(s, 200), g, 0.9, a.scaled_error * 1.5);
    CHECK_FALSE(bounded.report.envelope_violated);
  }
}
