// End-to-end checks of the command-line tool: exit codes, determinism,
// output formats, and schema validity of the JSON outputs.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "doctest.h"
#include "json.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string out;
};

CmdResult run_cli(const std::string& args) {
  const std::string cmd =
      std::string(LEAFGROW_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CmdResult res;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) res.out.append(buf, got);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  REQUIRE(is.good());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

json load_schema(const std::string& name) {
  return json::parse(slurp(fs::path(LEAFGROW_SCHEMA_DIR) / name));
}

// Validator for the schema subset used by the shipped files:
// type, enum, properties, required, items, additionalProperties.
bool validate_schema(const json& value, const json& schema, std::string* err);

bool type_matches(const json& value, const std::string& type) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "boolean") return value.is_boolean();
  if (type == "integer") return value.is_number_integer();
  if (type == "number") return value.is_number();
  if (type == "null") return value.is_null();
  return false;
}

bool validate_schema(const json& value, const json& schema, std::string* err) {
  if (schema.contains("type") &&
      !type_matches(value, schema["type"].get<std::string>())) {
    if (err) *err = "type mismatch, want " + schema["type"].dump();
    return false;
  }
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& v : schema["enum"]) found = found || v == value;
    if (!found) {
      if (err) *err = "value " + value.dump() + " not in enum";
      return false;
    }
  }
  if (value.is_object()) {
    if (schema.contains("required")) {
      for (const auto& k : schema["required"]) {
        if (!value.contains(k.get<std::string>())) {
          if (err) *err = "missing required key " + k.dump();
          return false;
        }
      }
    }
    const json props =
        schema.contains("properties") ? schema["properties"] : json::object();
    for (const auto& [k, v] : value.items()) {
      if (props.contains(k)) {
        if (!validate_schema(v, props[k], err)) return false;
      } else if (schema.contains("additionalProperties") &&
                 schema["additionalProperties"].is_boolean() &&
                 !schema["additionalProperties"].get<bool>()) {
        if (err) *err = "unexpected key " + k;
        return false;
      }
    }
  }
  if (value.is_array() && schema.contains("items")) {
    for (const auto& v : value) {
      if (!validate_schema(v, schema["items"], err)) return false;
    }
  }
  return true;
}

fs::path temp_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() /
             ("leafgrow_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

// rows of a CSV body, skipping "# key=value" metadata lines and the header
std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<std::string> row;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) row.push_back(field);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("sample").exit_code == 2);               // missing --n
  CHECK(run_cli("verify --suite nonsense").exit_code == 2);
  CHECK(run_cli("moments --alpha 1 --n 50000").exit_code == 2);  // above cap
  CHECK(run_cli("sample --n 3 --measure").exit_code == 2);  // needs dot
  CHECK(run_cli("grow --n 5000000 --replicas 1 --seed 1").exit_code == 2);
}

TEST_CASE("sample: format, determinism, annotation") {
  SUBCASE("size 0 is the bare leaf word") {
    const auto r = run_cli("sample --n 0 --seed 5");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("()\n") != std::string::npos);
    CHECK(r.out.find("# seed=5") != std::string::npos);
  }
  SUBCASE("same seed, same bytes") {
    const auto a = run_cli("sample --n 50 --seed 123");
    const auto b = run_cli("sample --n 50 --seed 123");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    const auto c = run_cli("sample --n 50 --seed 124");
    CHECK(a.out != c.out);
  }
  SUBCASE("dot with masses") {
    const auto r = run_cli("sample --n 20000 --seed 9 --format dot --measure");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("digraph") != std::string::npos);
    std::size_t masses = 0, opens = 0, closes = 0;
    for (std::size_t pos = 0;
         (pos = r.out.find("mass=", pos)) != std::string::npos; ++pos)
      ++masses;
    for (char c : r.out) {
      opens += c == '{';
      closes += c == '}';
    }
    CHECK(masses == 20001);
    CHECK(opens == 1);
    CHECK(closes == 1);
  }
}

TEST_CASE("measure: round trip through a tree file") {
  const auto tree_file = temp_dir() / "tree.txt";
  CHECK(run_cli("sample --n 12 --seed 21 --out " + tree_file.string())
            .exit_code == 0);
  const auto r = run_cli("measure --in " + tree_file.string());
  CHECK(r.exit_code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 13);  // n + 1 leaves
  double total = 0.0;
  for (const auto& row : rows) {
    REQUIRE(row.size() == 4);
    total += std::stod(row[1]);
  }
  CHECK(std::abs(total - 1.0) < 1e-9);
}

TEST_CASE("grow: JSON-lines trajectories validate and are reproducible") {
  const std::string args =
      "grow --n 500 --replicas 4 --checkpoints 100,500 --stat --seed 77";
  const auto a = run_cli(args);
  CHECK(a.exit_code == 0);
  const auto b = run_cli(args + " --threads 1");
  const auto c = run_cli(args + " --threads 4");
  CHECK(b.out == c.out);  // scheduling-independent

  const json header_schema = load_schema("trajectory_header.schema.json");
  const json record_schema = load_schema("trajectory.schema.json");
  std::istringstream is(a.out);
  std::string line;
  int records = 0, headers = 0;
  std::string err;
  while (std::getline(is, line)) {
    const json row = json::parse(line);
    if (row["type"] == "header") {
      ++headers;
      CHECK_MESSAGE(validate_schema(row, header_schema, &err), err);
      CHECK(row["seed"] == "77");
    } else {
      ++records;
      CHECK_MESSAGE(validate_schema(row, record_schema, &err), err);
    }
  }
  CHECK(headers == 1);
  CHECK(records == 8);  // 4 replicas x 2 checkpoints
}

TEST_CASE("spectrum: grid values and diagnostics schema") {
  const auto diag_file = temp_dir() / "spec.json";
  const auto r = run_cli("spectrum --alphas -1,0,1 --seed 3 --diagnostics " +
                         diag_file.string());
  CHECK(r.exit_code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(std::abs(std::stod(rows[0][1]) + 1.0) < 1e-8);
  CHECK(std::abs(std::stod(rows[1][1]) - 0.0) < 1e-8);
  CHECK(std::abs(std::stod(rows[2][1]) - 0.6972243622680054) < 1e-7);

  std::string err;
  const json diag = json::parse(slurp(diag_file));
  CHECK_MESSAGE(
      validate_schema(diag, load_schema("spectrum_diagnostics.schema.json"),
                      &err),
      err);
}

TEST_CASE("moments: analytic column and diagnostics schema") {
  const auto diag_file = temp_dir() / "mom.json";
  const auto r = run_cli("moments --alpha 0 --n 100 --seed 3 --diagnostics " +
                         diag_file.string());
  CHECK(r.exit_code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 101);
  for (const auto& row : rows) CHECK(std::abs(std::stod(row[2]) - 1.0) < 1e-9);

  std::string err;
  const json diag = json::parse(slurp(diag_file));
  CHECK_MESSAGE(
      validate_schema(diag, load_schema("moments_diagnostics.schema.json"),
                      &err),
      err);
}

TEST_CASE("spine: continuum and discrete CSV output") {
  SUBCASE("continuum") {
    const auto hist_file = temp_dir() / "hist.csv";
    const auto r = run_cli(
        "spine --mode continuum --replicas 50 --eps-cut 1e-3 --seed 11 "
        "--histogram " +
        hist_file.string());
    CHECK(r.exit_code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 50);
    for (const auto& row : rows) {
      CHECK(std::stod(row[1]) > 0.0);   // extinction
      CHECK(std::stod(row[3]) == 0.0);  // not flagged
    }
    std::int64_t total = 0;
    for (const auto& row : csv_rows(slurp(hist_file)))
      total += std::stoll(row[2]);
    CHECK(total <= 50);
    CHECK(total >= 45);  // nearly all heights land in [0,3)
  }
  SUBCASE("discrete") {
    const auto r = run_cli(
        "spine --mode discrete --n 1000 --replicas 20 --seed 12");
    CHECK(r.exit_code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 20);
    for (const auto& row : rows) {
      CHECK(std::stod(row[1]) > 0.0);
      CHECK(std::stoll(row[2]) > 0);
    }
  }
  SUBCASE("bad mode") {
    CHECK(run_cli("spine --mode quantum --replicas 3").exit_code == 2);
  }
}

TEST_CASE("verify: all suites pass and reports validate") {
  const json schema = load_schema("verify_report.schema.json");
  for (const std::string suite :
       {"identities", "uniformity", "spectrum", "spine"}) {
    const auto report_file = temp_dir() / ("verify_" + suite + ".json");
    const auto r = run_cli("verify --suite " + suite + " --seed 1 --report " +
                           report_file.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("[PASS]") != std::string::npos);
    CHECK(r.out.find("[FAIL]") == std::string::npos);

    std::string err;
    const json report = json::parse(slurp(report_file));
    const std::string msg = suite + ": " + err;
    CHECK_MESSAGE(validate_schema(report, schema, &err), msg);
    CHECK(report["passed"] == true);
    CHECK(report["suite"] == suite);
  }
}

TEST_CASE("config file: flags override file values") {
  const auto cfg_file = temp_dir() / "run.cfg";
  {
    std::ofstream os(cfg_file);
    os << "[sample]\n";
    os << "n=6\n";
    os << "seed=5\n";
  }
  const auto from_cfg =
      run_cli("sample --config " + cfg_file.string());
  CHECK(from_cfg.exit_code == 0);
  CHECK(from_cfg.out == run_cli("sample --n 6 --seed 5").out);

  const auto overridden =
      run_cli("sample --config " + cfg_file.string() + " --n 9");
  CHECK(overridden.exit_code == 0);
  CHECK(overridden.out == run_cli("sample --n 9 --seed 5").out);
}
