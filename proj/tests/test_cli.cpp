#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "cli.hpp"
#include "doctest.h"

namespace fs = std::filesystem;
using gpswf::cli::run;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "gpswf");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

Csv parse_csv(const std::string& text) {
  Csv c;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  c.header = split(line, ',');
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") break;
    std::vector<double> row;
    for (const auto& f : split(line, ',')) row.push_back(std::strtod(f.c_str(), nullptr));
    c.rows.push_back(row);
  }
  return c;
}

std::map<std::string, std::string> parse_summary(const std::string& text) {
  std::map<std::string, std::string> m;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const auto p = split(line, ',');
    if (p.size() == 2) m[p[0]] = p[1];
  }
  return m;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "gpswf_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("chi at c = 0 equals n(n + 2 alpha + 1)") {
  const auto r = invoke({"chi", "--alpha", "0.5", "--c", "0", "--n-max", "5"});
  REQUIRE(r.code == 0);
  const Csv t = parse_csv(r.out);
  CHECK(t.header == std::vector<std::string>{"n[index]", "chi[1]", "lower[1]", "upper[1]", "bracket_ok[flag]"});
  REQUIRE(t.rows.size() == 6u);
  for (const auto& row : t.rows) CHECK(row[1] == row[0] * (row[0] + 2.0));
}

TEST_CASE("chi brackets hold at c = 3") {
  const auto r = invoke({"chi", "--alpha", "1", "--c", "3", "--n-max", "40"});
  REQUIRE(r.code == 0);
  for (const auto& row : parse_csv(r.out).rows) {
    CHECK(row[2] <= row[1]);
    CHECK(row[1] <= row[3]);
    CHECK(row[4] == 1.0);
  }
}

TEST_CASE("CSV and JSON emissions round-trip to identical values") {
  const auto csv = scratch("chi.csv");
  const auto json = scratch("chi.json");
  REQUIRE(invoke({"chi", "--alpha", "0.7", "--c", "4.5", "--n-max", "12", "--out", csv.string()}).code == 0);
  REQUIRE(invoke({"chi", "--alpha", "0.7", "--c", "4.5", "--n-max", "12", "--format", "json", "--out",
                  json.string()})
              .code == 0);
  const Csv t = parse_csv(slurp(csv));
  const auto j = nlohmann::json::parse(slurp(json));
  CHECK(j["columns"].get<std::vector<std::string>>() == t.header);
  REQUIRE(j["rows"].size() == t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    for (std::size_t k = 0; k < t.header.size(); ++k) CHECK(j["rows"][i][k].get<double>() == t.rows[i][k]);
  }
  const auto summary = parse_summary(slurp(csv.string() + ".summary.csv"));
  CHECK(std::strtod(summary.at("trailing_mass").c_str(), nullptr) == j["summary"]["trailing_mass"].get<double>());
  CHECK(summary.at("bracket_violations") == "0");
}

TEST_CASE("numbers are written with 17 significant digits") {
  CHECK(gpswf::cli::format_number(0.1) == "0.10000000000000001");
  CHECK(std::strtod(gpswf::cli::format_number(std::numbers::pi).c_str(), nullptr) == std::numbers::pi);
}

TEST_CASE("eigenfunction table") {
  const auto r = invoke({"eigenfunction", "--alpha", "0.5", "--c", "3", "--n", "4", "--grid", "11"});
  REQUIRE(r.code == 0);
  const Csv t = parse_csv(r.out);
  REQUIRE(t.rows.size() == 11u);
  CHECK(t.rows.front()[0] == -1.0);
  CHECK(t.rows.back()[0] == 1.0);
  CHECK(t.rows.back()[1] > 0.0);
  const auto s = parse_summary(r.out.substr(r.out.find("key,value")));
  CHECK(std::fabs(std::strtod(s.at("norm_sq").c_str(), nullptr) - 1.0) < 1e-12);
}

TEST_CASE("bessel approximation at (0.5, 5, 40) keeps the envelope") {
  const auto r = invoke({"approx", "--kind", "bessel", "--alpha", "0.5", "--c", "5", "--n", "40"});
  CHECK(r.code == 0);
  const auto s = parse_summary(r.out.substr(r.out.find("key,value")));
  CHECK(s.at("envelope_violated") == "false");
  CHECK(s.at("pointwise_violations") == "0");
  const Csv t = parse_csv(r.out);
  CHECK(t.header[3] == "envelope[1]");
  CHECK(t.rows.size() == 2001u);
}

TEST_CASE("bessel approximation explains an inadmissible frame") {
  const auto r = invoke({"approx", "--alpha", "0.5", "--c", "5", "--n", "0"});
  CHECK(r.code == 2);
  CHECK(r.err.find("q = c^2/chi") != std::string::npos);
}

TEST_CASE("jacobi approximation") {
  SUBCASE("c = 0 gives zero error") {
    const auto r = invoke({"approx", "--kind", "jacobi", "--alpha", "0.5", "--c", "0", "--n", "10"});
    REQUIRE(r.code == 0);
    const auto s = parse_summary(r.out.substr(r.out.find("key,value")));
    CHECK(s.at("sup_error") == "0");
  }
  SUBCASE("alpha = 2 is refused") {
    const auto r = invoke({"approx", "--kind", "jacobi", "--alpha", "2", "--c", "1", "--n", "10"});
    CHECK(r.code == 2);
    CHECK(r.err.find("alpha must lie in (0,3/2)") != std::string::npos);
    CHECK(r.out.empty());
  }
}

TEST_CASE("spectrum report at alpha = 0, c = 10") {
  const auto r = invoke({"spectrum", "--alpha", "0", "--c", "10", "--delta", "0.5"});
  REQUIRE(r.code == 0);
  const auto s = parse_summary(r.out.substr(r.out.find("key,value")));
  const double m_over_c = std::strtod(s.at("m_over_c").c_str(), nullptr);
  const double gap = std::strtod(s.at("counting_gap").c_str(), nullptr);
  CHECK(m_over_c <= 4.0 / std::numbers::pi);
  CHECK(m_over_c >= 2.0 / std::numbers::pi - gap / 10.0);
  CHECK(std::strtod(s.at("trace_rel_error").c_str(), nullptr) <= 1e-6);
  CHECK(s.at("any_unstable") == "false");
}

TEST_CASE("spectrum output is byte-identical across runs") {
  const auto a = scratch("spec_a.json");
  const auto b = scratch("spec_b.json");
  const std::vector<std::string> base = {"spectrum", "--alpha", "0.5", "--c", "4", "--n-max", "6", "--format", "json"};
  auto args_a = base;
  args_a.insert(args_a.end(), {"--out", a.string()});
  auto args_b = base;
  args_b.insert(args_b.end(), {"--out", b.string()});
  REQUIRE(invoke(args_a).code == 0);
  REQUIRE(invoke(args_b).code == 0);
  CHECK(slurp(a) == slurp(b));
  const auto j = nlohmann::json::parse(slurp(a));
  CHECK(j["summary"].contains("decay_slope"));
}

TEST_CASE("usage errors exit with 2") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"chi", "--alpha", "-3"}).code == 2);
  CHECK(invoke({"chi", "--c", "-1"}).code == 2);
  CHECK(invoke({"chi", "--c", "abc"}).code == 2);
  CHECK(invoke({"chi", "--format", "xml"}).code == 2);
  CHECK(invoke({"approx", "--kind", "hermite"}).code == 2);
  CHECK(invoke({"spectrum", "--delta", "1.5"}).code == 2);
  CHECK(invoke({"spectrum", "--n-max", "20", "--quad", "30"}).code == 2);
  CHECK(invoke({"bogus"}).code == 2);
  CHECK(invoke({"chi", "--out", "/nonexistent/dir/x.csv"}).code == 2);
}

TEST_CASE("help exits with 0") {
  const auto r = invoke({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("spectrum") != std::string::npos);
}

TEST_CASE("every emitted number is finite") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"chi", "--alpha", "1.4", "--c", "10", "--n-max", "60"},
           {"eigenfunction", "--alpha", "-0.5", "--c", "2", "--n", "3"},
           {"approx", "--alpha", "1", "--c", "3", "--n", "30", "--format", "json"},
           {"spectrum", "--alpha", "1", "--c", "2", "--n-max", "10"}}) {
    const auto r = invoke(args);
    CHECK(r.code == 0);
    CHECK(r.out.find("nan") == std::string::npos);
    CHECK(r.out.find("inf") == std::string::npos);
  }
}

TEST_CASE("process exit codes") {
  const char* exe = std::getenv("GPSWF_CLI");
  if (!exe) return;
  const std::string e = exe;
  const auto status = [](const std::string& cmd) {
    const int s = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(s);
  };
  CHECK(status(e + " chi --alpha 0.5 --c 1 --n-max 3") == 0);
  CHECK(status(e + " approx --kind jacobi --alpha 2 --c 1 --n 10") == 2);
  CHECK(status(e + " chi --alpha nope") == 2);
}
