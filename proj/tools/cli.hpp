#pragma once

// Command-line front end: argument parsing, report assembly and CSV / JSON
// emission. `run` is the whole program minus process plumbing so tests can
// drive it in-process.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace gpswf::cli {

enum ExitCode : int { kOk = 0, kViolation = 1, kUsage = 2 };

struct RunConfig {
  std::string command;
  double alpha = 0.5;
  double c = 1.0;
  int n = 0;
  int n_max = 10;
  int grid = 0;  // 0: command default
  int quad = 0;  // 0: chosen from n_max and c
  double q0 = 0.9;
  double delta = 0.5;
  std::string kind = "bessel";
  std::string format = "csv";
  std::string out;
};

// Column names carry their unit in brackets, e.g. "chi[1]" or "n[index]".
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Report {
  std::string command;
  nlohmann::ordered_json config;
  Table table;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  std::vector<std::string> violations;
};

// Thrown for inputs that fail a subcommand's preconditions (exit code 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Report cmd_chi(const RunConfig& cfg);
Report cmd_eigenfunction(const RunConfig& cfg);
Report cmd_approx(const RunConfig& cfg);
Report cmd_spectrum(const RunConfig& cfg);

// Exact round-trip formatting ("%.17g").
std::string format_number(double v);

std::string table_csv(const Table& t);
std::string summary_csv(const nlohmann::ordered_json& summary);
nlohmann::ordered_json report_json(const Report& r);

// First non-finite number in the report, or empty.
std::string first_non_finite(const Report& r);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gpswf::cli
