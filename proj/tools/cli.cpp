#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "gpswf/approx.hpp"
#include "gpswf/errors.hpp"
#include "gpswf/quadrature.hpp"
#include "gpswf/spectrum.hpp"
#include "gpswf/sturm.hpp"

namespace gpswf::cli {

namespace {

using nlohmann::ordered_json;

constexpr int kMaxIndex = 5000;
constexpr int kMaxGrid = 1000000;

void require(bool ok, const std::string& msg) {
  if (!ok) throw UsageError(msg);
}

ProblemParams checked_params(const RunConfig& cfg) {
  require(std::isfinite(cfg.alpha) && cfg.alpha > -1.0, "alpha must be finite and > -1");
  require(std::isfinite(cfg.c) && cfg.c >= 0.0, "c must be finite and >= 0");
  return ProblemParams{cfg.alpha, cfg.c};
}

ordered_json config_json(const RunConfig& cfg) {
  ordered_json j;
  j["command"] = cfg.command;
  j["alpha"] = cfg.alpha;
  j["c"] = cfg.c;
  if (cfg.command == "chi" || cfg.command == "spectrum") j["n_max"] = cfg.n_max;
  if (cfg.command == "eigenfunction" || cfg.command == "approx") j["n"] = cfg.n;
  if (cfg.command == "eigenfunction" || cfg.command == "approx") j["grid"] = cfg.grid;
  if (cfg.command == "approx") {
    j["kind"] = cfg.kind;
    if (cfg.kind == "jacobi") j["q0"] = cfg.q0;
  }
  if (cfg.command == "spectrum") {
    j["quad"] = cfg.quad;
    j["delta"] = cfg.delta;
  }
  return j;
}

Report make_report(const RunConfig& cfg) {
  Report r;
  r.command = cfg.command;
  r.config = config_json(cfg);
  return r;
}

void check_n(int n, const char* name) {
  require(n >= 0 && n <= kMaxIndex,
          std::string(name) + " must lie in [0, " + std::to_string(kMaxIndex) + "]");
}

void check_grid(int grid) {
  require(grid >= 2 && grid <= kMaxGrid,
          "grid must lie in [2, " + std::to_string(kMaxGrid) + "]");
}

bool json_non_finite(const ordered_json& j, std::string& where, const std::string& path) {
  if (j.is_number_float() && !std::isfinite(j.get<double>())) {
    where = path;
    return true;
  }
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (json_non_finite(v, where, path.empty() ? k : path + "." + k)) return true;
    }
  }
  return false;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

std::string summary_value(const ordered_json& v) {
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open output file " + path);
  f << text;
  if (!f) throw UsageError("failed writing " + path);
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string table_csv(const Table& t) {
  std::string s;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) s += ',';
    s += csv_field(t.columns[i]);
  }
  s += "\r\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) s += ',';
      s += format_number(row[i]);
    }
    s += "\r\n";
  }
  return s;
}

std::string summary_csv(const ordered_json& summary) {
  std::string s = "key,value\r\n";
  for (const auto& [k, v] : summary.items()) {
    s += csv_field(k) + "," + csv_field(summary_value(v)) + "\r\n";
  }
  return s;
}

ordered_json report_json(const Report& r) {
  ordered_json j;
  j["command"] = r.command;
  j["config"] = r.config;
  j["columns"] = r.table.columns;
  j["rows"] = r.table.rows;
  j["summary"] = r.summary;
  j["violations"] = r.violations;
  return j;
}

std::string first_non_finite(const Report& r) {
  for (std::size_t i = 0; i < r.table.rows.size(); ++i) {
    const auto& row = r.table.rows[i];
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (!std::isfinite(row[k])) {
        return "row " + std::to_string(i) + ", column " + r.table.columns[k];
      }
    }
  }
  std::string where;
  if (json_non_finite(r.summary, where, "")) return "summary field " + where;
  return {};
}

// ---------------------------------------------------------------------------

Report cmd_chi(const RunConfig& cfg) {
  const ProblemParams params = checked_params(cfg);
  check_n(cfg.n_max, "n-max");
  Report r = make_report(cfg);
  const auto s = chi_spectrum(params, cfg.n_max);
  const double a = params.alpha;
  const double c2 = params.c * params.c;

  r.table.columns = {"n[index]", "chi[1]", "lower[1]", "upper[1]", "bracket_ok[flag]"};
  int violated = 0;
  double worst_c0 = 0.0;
  for (int n = 0; n <= cfg.n_max; ++n) {
    const double chi = s->chi(n);
    const double lower = n * (n + 2.0 * a + 1.0);
    const double upper = lower + c2;
    const bool ok = lower <= chi && chi <= upper;
    if (!ok) ++violated;
    if (c2 == 0.0 && lower > 0.0) worst_c0 = std::max(worst_c0, std::fabs(chi - lower) / lower);
    r.table.rows.push_back({double(n), chi, lower, upper, ok ? 1.0 : 0.0});
  }
  r.summary["alpha"] = a;
  r.summary["c"] = params.c;
  r.summary["n_max"] = cfg.n_max;
  r.summary["truncation"] = s->truncation();
  r.summary["trailing_mass"] = s->trailing_mass();
  r.summary["bracket_violations"] = violated;
  if (c2 == 0.0) r.summary["c0_max_rel_deviation"] = worst_c0;
  if (violated) r.violations.push_back(std::to_string(violated) + " chi bracket violation(s)");
  return r;
}

Report cmd_eigenfunction(const RunConfig& cfg) {
  const ProblemParams params = checked_params(cfg);
  check_n(cfg.n, "n");
  const int grid = cfg.grid ? cfg.grid : 201;
  check_grid(grid);
  Report r = make_report(cfg);
  r.config["grid"] = grid;
  const auto s = chi_spectrum(params, cfg.n);
  const GpswfFunction f(s, cfg.n);

  r.table.columns = {"x[1]", "psi[1]", "dpsi_dx[1]", "ode_residual[1]"};
  double max_res = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double x = i == grid - 1 ? 1.0 : -1.0 + 2.0 * i / (grid - 1);
    const double res = ode_residual(f, x);
    max_res = std::max(max_res, std::fabs(res));
    r.table.rows.push_back({x, f.value(x), f.derivative(x), res});
  }
  const auto rule = specfun::gauss_jacobi(s->truncation() + 8, params.alpha);
  const double norm_sq = rule.integrate([&](double y) {
    const double v = f.value(y);
    return v * v;
  });
  const double rel_res = max_res / std::max(1.0, f.chi());

  r.summary["alpha"] = params.alpha;
  r.summary["c"] = params.c;
  r.summary["n"] = cfg.n;
  r.summary["chi"] = f.chi();
  r.summary["truncation"] = s->truncation();
  r.summary["trailing_mass"] = s->trailing_mass();
  r.summary["psi_at_1"] = f.value(1.0);
  r.summary["norm_sq"] = norm_sq;
  r.summary["max_ode_residual_over_chi"] = rel_res;
  if (std::fabs(norm_sq - 1.0) > 1e-10) r.violations.push_back("weighted norm differs from 1");
  if (rel_res > 1e-8) r.violations.push_back("ODE residual above 1e-8 chi");
  return r;
}

namespace {

void fill_approx_rows(Report& r, const approx::ApproxReport& a, const char* bound_name) {
  r.table.columns = {"x[1]", "approx[1]", "reference[1]", bound_name, "abs_error[1]"};
  for (std::size_t i = 0; i < a.grid.size(); ++i) {
    r.table.rows.push_back({a.grid[i], a.approx[i], a.reference[i], a.envelope[i],
                            std::fabs(a.approx[i] - a.reference[i])});
  }
}

Report approx_bessel(const RunConfig& cfg, const ProblemParams& params, int grid) {
  const auto s = chi_spectrum(params, cfg.n);
  const GpswfFunction f(s, cfg.n);
  const auto frame = approx::wkb_frame(f);
  if (!frame.admissible) throw UsageError("inadmissible frame: " + frame.reason);

  Report r = make_report(cfg);
  r.config["grid"] = grid;
  const approx::BesselUniform bu(f);
  const auto g = approx::default_grid(grid);
  const auto rep = approx::bessel_report(f, g);
  const auto norm = approx::approximant_norm_check(f);
  fill_approx_rows(r, rep, "envelope[1]");

  r.summary["kind"] = "bessel";
  r.summary["alpha"] = params.alpha;
  r.summary["c"] = params.c;
  r.summary["n"] = cfg.n;
  r.summary["chi"] = frame.chi;
  r.summary["q"] = frame.q;
  r.summary["eps"] = frame.eps;
  r.summary["a_exact"] = bu.a_exact();
  r.summary["a_hat"] = bu.a_hat();
  r.summary["sup_error"] = rep.sup_error;
  r.summary["max_envelope"] = rep.max_envelope;
  r.summary["sup_error_sqrt_chi"] = rep.sup_error * std::sqrt(frame.chi);
  r.summary["pointwise_violations"] = rep.pointwise_violations;
  r.summary["envelope_violated"] = rep.envelope_violated;
  r.summary["norm_sq"] = norm.norm_sq;
  r.summary["norm_leading"] = norm.leading;
  r.summary["norm_deviation"] = norm.deviation;
  r.summary["norm_bound"] = norm.bound;
  if (rep.envelope_violated) r.violations.push_back("sup error exceeds sup envelope");
  if (rep.pointwise_violations) {
    r.violations.push_back(std::to_string(rep.pointwise_violations) +
                           " grid point(s) above the envelope");
  }
  if (!norm.holds()) r.violations.push_back("approximant norm outside its bound");
  return r;
}

Report approx_jacobi(const RunConfig& cfg, const ProblemParams& params, int grid) {
  require(params.alpha > 0.0 && params.alpha < 1.5, "alpha must lie in (0,3/2)");
  require(cfg.q0 > 0.0 && cfg.q0 < 1.0, "q0 must lie in (0,1)");
  check_n(2 * cfg.n, "2n");
  const auto s = chi_spectrum(params, 2 * cfg.n);
  const GpswfFunction f(s, cfg.n);
  const GpswfFunction f2(s, 2 * cfg.n);
  const auto g = approx::default_grid(grid);

  approx::JacobiReport own;
  approx::JacobiReport twice;
  try {
    own = approx::jacobi_report(f, g, cfg.q0);
    twice = approx::jacobi_report(f2, g, cfg.q0);
  } catch (const InadmissibleError& e) {
    throw UsageError(std::string("inadmissible frame: ") + e.what());
  }
  // The bound constant is the larger scaled error over n and 2n.
  const double c_hat = std::max(own.scaled_error, twice.scaled_error);
  const auto rep = approx::jacobi_report(f, g, cfg.q0, c_hat);

  Report r = make_report(cfg);
  r.config["grid"] = grid;
  fill_approx_rows(r, rep.report, "bound[1]");
  r.summary["kind"] = "jacobi";
  r.summary["alpha"] = params.alpha;
  r.summary["c"] = params.c;
  r.summary["n"] = cfg.n;
  r.summary["q"] = rep.frame.q;
  r.summary["a_n"] = rep.frame.a_n;
  r.summary["scaled_norm_defect"] = rep.frame.scaled_norm_defect;
  r.summary["sup_error"] = rep.report.sup_error;
  r.summary["scaled_error"] = rep.scaled_error;
  r.summary["scaled_error_2n"] = twice.scaled_error;
  r.summary["c_hat"] = c_hat;
  r.summary["max_bound"] = rep.report.max_envelope;
  r.summary["envelope_violated"] = rep.report.envelope_violated;
  return r;
}

}  // namespace

Report cmd_approx(const RunConfig& cfg) {
  const ProblemParams params = checked_params(cfg);
  check_n(cfg.n, "n");
  require(cfg.kind == "bessel" || cfg.kind == "jacobi", "kind must be bessel or jacobi");
  const int grid = cfg.grid ? cfg.grid : 2001;
  check_grid(grid);
  return cfg.kind == "bessel" ? approx_bessel(cfg, params, grid)
                              : approx_jacobi(cfg, params, grid);
}

Report cmd_spectrum(const RunConfig& cfg) {
  const ProblemParams params = checked_params(cfg);
  check_n(cfg.n_max, "n-max");
  require(cfg.delta > 0.0 && cfg.delta < 1.0, "delta must lie in (0,1)");
  const int keep = cfg.n_max + 1;
  const int auto_quad =
      std::max({2 * keep + 20, static_cast<int>(std::ceil(params.c)) + 80, 120});
  const int quad = cfg.quad ? cfg.quad : auto_quad;
  require(quad >= 2 * keep + 20, "quad must be at least 2 (n-max + 1) + 20");
  require(quad <= 4000, "quad must be at most 4000");

  Report r = make_report(cfg);
  r.config["quad"] = quad;
  const auto ny = spectrum::nystrom_spectrum(params, quad, keep);
  const auto tn = spectrum::trace_and_norm(params);
  const auto cnt = spectrum::counting(params, cfg.delta, ny);

  r.table.columns = {"n[index]",          "lambda[1]",          "lambda_mu[1]",
                     "lambda_reference[1]", "explicit_reference[flag]", "rel_residual[1]",
                     "phase_residual[1]", "refinement_change[1]", "unstable[flag]"};
  double max_rel = 0.0;
  double max_phase = 0.0;
  double min_corr = 1.0;
  bool lambda_mu_ok = params.c > 0.0;
  if (params.c > 0.0) {
    const auto checks = spectrum::cross_check(ny, cfg.n_max);
    for (const auto& ck : checks) {
      const double ref = ck.explicit_reference ? *ck.lambda_explicit : ck.lambda_nystrom;
      max_rel = std::max(max_rel, ck.rel_residual);
      max_phase = std::max(max_phase, ck.phase_residual);
      if (ck.mode_correlation) min_corr = std::min(min_corr, *ck.mode_correlation);
      r.table.rows.push_back({double(ck.n), ck.lambda_nystrom, ck.lambda_mu, ref,
                              ck.explicit_reference ? 1.0 : 0.0, ck.rel_residual,
                              ck.phase_residual, ny.refinement_change[ck.n],
                              ny.unstable[ck.n] ? 1.0 : 0.0});
    }
  } else {
    for (int n = 0; n < keep; ++n) {
      r.table.rows.push_back({double(n), ny.lambdas[n], 0.0, ny.lambdas[n], 0.0, 0.0, 0.0,
                              ny.refinement_change[n], ny.unstable[n] ? 1.0 : 0.0});
    }
  }

  const double sum = ny.sum();
  const double sum_sq = ny.sum_squares();
  const double trace_rel = tn.trace > 0.0 ? std::fabs(sum - tn.trace) / tn.trace : 0.0;
  const double hs_gap = params.c > 0.0 ? std::fabs(sum_sq - tn.hs_norm_limit) / params.c : 0.0;

  auto& sm = r.summary;
  sm["alpha"] = params.alpha;
  sm["c"] = params.c;
  sm["quad"] = quad;
  sm["n_max"] = cfg.n_max;
  sm["trace"] = tn.trace;
  sm["trace_gamma_form"] = tn.trace_gamma_form;
  sm["sum_lambda"] = sum;
  sm["trace_rel_error"] = trace_rel;
  sm["gamma_alpha"] = tn.gamma_alpha;
  sm["hs_norm_limit"] = tn.hs_norm_limit;
  sm["sum_lambda_sq"] = sum_sq;
  sm["hs_gap_over_c"] = hs_gap;
  sm["delta"] = cfg.delta;
  sm["counting_m"] = cnt.m_empirical;
  sm["counting_upper"] = cnt.upper_bound;
  sm["counting_lower_asymptotic"] = cnt.lower_asymptotic;
  sm["counting_lower_marzo"] = cnt.lower_marzo;
  sm["counting_gap"] = cnt.gap;
  if (params.c > 0.0) {
    sm["m_over_c"] = cnt.m_empirical / params.c;
    sm["max_rel_residual"] = max_rel;
    sm["max_phase_residual"] = max_phase;
    sm["min_mode_correlation"] = min_corr;
  }
  sm["any_unstable"] = ny.any_unstable();

  if (params.alpha > 0.0 && params.alpha < 1.5 && params.c > 0.0) {
    const int n_lo = std::max(20, static_cast<int>(std::ceil(2.0 * params.c)));
    const int n_hi = n_lo + 40;
    try {
      const auto d = spectrum::decay_check(params, n_lo, n_hi);
      sm["decay_n_lo"] = n_lo;
      sm["decay_n_hi"] = n_hi;
      sm["decay_slope"] = d.slope;
      sm["decay_c_hat"] = d.c_hat;
      sm["decay_max_log_excess"] = d.max_log_excess;
      sm["decay_bound_violations"] = d.bound_violations;
    } catch (const InadmissibleError& e) {
      sm["decay_skipped"] = e.what();
    }
  }

  if (ny.any_unstable()) r.violations.push_back("Nystrom eigenvalue unstable under refinement");
  if (trace_rel > 1e-6) r.violations.push_back("trace relative error above 1e-6");
  if (cnt.m_empirical > cnt.upper_bound) r.violations.push_back("counting upper bound violated");
  if (lambda_mu_ok && max_rel > 1e-6) r.violations.push_back("lambda-mu residual above 1e-6");
  if (lambda_mu_ok && max_phase > 1e-8) r.violations.push_back("mu phase residual above 1e-8");
  return r;
}

// ---------------------------------------------------------------------------

namespace {

void add_problem_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--alpha", cfg.alpha, "weight exponent alpha > -1")->capture_default_str();
  sub->add_option("--c", cfg.c, "bandwidth c >= 0")->capture_default_str();
  sub->add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("--out", cfg.out, "output file (stdout when omitted)");
}

void emit(const Report& r, const RunConfig& cfg, std::ostream& out) {
  if (cfg.format == "json") {
    const std::string text = report_json(r).dump(2) + "\n";
    if (cfg.out.empty()) {
      out << text;
    } else {
      write_text(cfg.out, text);
    }
    return;
  }
  const std::string table = table_csv(r.table);
  const std::string summary = summary_csv(r.summary);
  if (cfg.out.empty()) {
    out << table << "\r\n" << summary;
  } else {
    write_text(cfg.out, table);
    write_text(cfg.out + ".summary.csv", summary);
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Generalized prolate spheroidal wave functions"};
  app.require_subcommand(1);

  auto* chi = app.add_subcommand("chi", "Sturm-Liouville eigenvalues with their brackets");
  add_problem_options(chi, cfg);
  chi->add_option("--n-max", cfg.n_max, "largest index")->capture_default_str();

  auto* eig = app.add_subcommand("eigenfunction", "psi_n, psi_n' and ODE residual on a grid");
  add_problem_options(eig, cfg);
  eig->add_option("--n", cfg.n, "index")->capture_default_str();
  eig->add_option("--grid", cfg.grid, "uniform grid points on [-1,1] (default 201)");

  auto* apx = app.add_subcommand("approx", "uniform approximation against the exact psi_n");
  add_problem_options(apx, cfg);
  apx->add_option("--n", cfg.n, "index")->capture_default_str();
  apx->add_option("--grid", cfg.grid, "grid points on [0,1] (default 2001)");
  apx->add_option("--kind", cfg.kind, "approximation")
      ->check(CLI::IsMember({"bessel", "jacobi"}))
      ->capture_default_str();
  apx->add_option("--q0", cfg.q0, "largest admissible c^2/chi for the Jacobi form")
      ->capture_default_str();

  auto* spc = app.add_subcommand("spectrum", "operator eigenvalues, trace, counting and decay");
  add_problem_options(spc, cfg);
  spc->add_option("--n-max", cfg.n_max, "largest tabulated index")->capture_default_str();
  spc->add_option("--quad", cfg.quad, "Nystrom quadrature size (default from n-max and c)");
  spc->add_option("--delta", cfg.delta, "counting threshold in (0,1)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  Report r;
  try {
    if (chi->parsed()) {
      cfg.command = "chi";
      r = cmd_chi(cfg);
    } else if (eig->parsed()) {
      cfg.command = "eigenfunction";
      r = cmd_eigenfunction(cfg);
    } else if (apx->parsed()) {
      cfg.command = "approx";
      r = cmd_approx(cfg);
    } else {
      cfg.command = "spectrum";
      r = cmd_spectrum(cfg);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: computation failed: " << e.what() << "\n";
    return kViolation;
  }

  if (const std::string where = first_non_finite(r); !where.empty()) {
    err << "error: non-finite value at " << where << "; nothing written\n";
    return kViolation;
  }
  try {
    emit(r, cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  for (const auto& v : r.violations) err << "violation: " << v << "\n";
  return r.violations.empty() ? kOk : kViolation;
}

}  // namespace gpswf::cli
