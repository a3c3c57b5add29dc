// Command-line front end: uniform plane binary trees, the leaf-growth
// measure, growth-chain experiments, multifractal-spectrum numerics and the
// continuum spine simulation, with reproducible seeded outputs.

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "leafgrow/chain.hpp"
#include "leafgrow/combinatorics.hpp"
#include "leafgrow/measure.hpp"
#include "leafgrow/parallel.hpp"
#include "leafgrow/rng.hpp"
#include "leafgrow/spectrum.hpp"
#include "leafgrow/spine.hpp"
#include "leafgrow/stats.hpp"
#include "leafgrow/tree.hpp"

using json = nlohmann::json;
using namespace leafgrow;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// RFC-4180-style quoting for string fields.
std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

struct Output {
  std::ostream& stream() { return file ? *file : std::cout; }
  std::unique_ptr<std::ofstream> file;
};

Output open_output(const std::string& path) {
  Output out;
  if (!path.empty() && path != "-") {
    out.file = std::make_unique<std::ofstream>(path);
    if (!*out.file)
      throw CLI::ValidationError("--out", "cannot open '" + path + "'");
  }
  return out;
}

struct RunConfig {
  std::uint64_t seed = 0;
  bool seed_given = false;
  unsigned threads = default_thread_count();

  void finalize() {
    if (!seed_given) {
      std::random_device rd;
      seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
  }
  void add_common(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "master seed (auto-generated if absent)")
        ->each([this](const std::string&) { seed_given = true; });
    cmd->add_option("--threads", threads,
                    "worker threads (default: machine parallelism)");
  }
  std::vector<std::pair<std::string, std::string>> metadata(
      const std::string& command,
      std::vector<std::pair<std::string, std::string>> extra = {}) const {
    std::vector<std::pair<std::string, std::string>> md = {
        {"command", command}, {"seed", std::to_string(seed)}};
    for (auto& kv : extra) md.push_back(std::move(kv));
    return md;
  }
};

void write_metadata(std::ostream& os,
                    const std::vector<std::pair<std::string, std::string>>& md) {
  for (const auto& [k, v] : md) os << "# " << k << "=" << v << "\n";
}

json metadata_json(
    const std::vector<std::pair<std::string, std::string>>& md) {
  json j = json::object();
  for (const auto& [k, v] : md) j[k] = v;
  return j;
}

// ---------------------------------------------------------------------------
// sample
// ---------------------------------------------------------------------------

struct SampleArgs {
  std::int64_t n = 0;
  std::string format = "parens";
  bool with_measure = false;
  std::string out;
};

int cmd_sample(const SampleArgs& a, RunConfig& cfg) {
  if (a.with_measure && a.format != "dot")
    throw CLI::ValidationError("--measure",
                               "mass annotation requires --format dot");
  cfg.finalize();
  RngStream rng(cfg.seed, 0, /*purpose=*/1);
  const PlaneBinaryTree tree = remy_sample(a.n, rng);
  auto out = open_output(a.out);
  const auto md =
      cfg.metadata("sample", {{"n", std::to_string(a.n)}, {"format", a.format}});
  if (a.format == "dot") {
    for (const auto& [k, v] : md) out.stream() << "// " << k << "=" << v << "\n";
    if (a.with_measure) {
      const auto m = compute_measure(tree, /*exact_cap=*/0);
      out.stream() << to_dot(tree, m);
    } else {
      out.stream() << to_dot(tree);
    }
  } else {
    write_metadata(out.stream(), md);
    out.stream() << tree.encode() << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// measure
// ---------------------------------------------------------------------------

struct MeasureArgs {
  std::int64_t n = -1;
  std::string in;
  std::string out;
};

PlaneBinaryTree read_tree_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw CLI::ValidationError("--in", "cannot open '" + path + "'");
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    return PlaneBinaryTree::decode(line);
  }
  throw CLI::ValidationError("--in", "no tree word found in '" + path + "'");
}

int cmd_measure(const MeasureArgs& a, RunConfig& cfg) {
  if (a.in.empty() && a.n < 0)
    throw CLI::ValidationError("measure", "need --in FILE or --n SIZE");
  cfg.finalize();
  PlaneBinaryTree tree;
  if (!a.in.empty()) {
    tree = read_tree_file(a.in);
  } else {
    RngStream rng(cfg.seed, 0, /*purpose=*/1);
    tree = remy_sample(a.n, rng);
  }
  const auto m = compute_measure(tree);
  auto out = open_output(a.out);
  m.write_csv(out.stream(),
              cfg.metadata("measure", {{"n", std::to_string(tree.size())}}));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// grow
// ---------------------------------------------------------------------------

struct GrowArgs {
  std::int64_t n = 10000;
  int replicas = 1;
  std::vector<std::int64_t> checkpoints;
  bool with_stat = false;
  std::string out;
  std::string summary;
};

int cmd_grow(const GrowArgs& a, RunConfig& cfg) {
  if (a.n < 1 || a.n > kChainCap)
    throw CLI::ValidationError(
        "--n", "size must be in [1, " + std::to_string(kChainCap) + "]");
  if (a.replicas < 1)
    throw CLI::ValidationError("--replicas", "need at least one replica");
  cfg.finalize();
  std::vector<std::int64_t> checkpoints = a.checkpoints;
  if (checkpoints.empty()) checkpoints = {a.n};

  std::vector<std::vector<TrajectoryRecord>> results(
      static_cast<std::size_t>(a.replicas));
  parallel_for(results.size(), cfg.threads, [&](std::size_t r) {
    results[r] = run_chain(a.n, checkpoints, RngStream(cfg.seed, r, 2),
                           a.with_stat);
  });

  auto out = open_output(a.out);
  json header = metadata_json(cfg.metadata(
      "grow", {{"n", std::to_string(a.n)},
               {"replicas", std::to_string(a.replicas)}}));
  header["type"] = "header";
  out.stream() << header.dump() << "\n";
  for (std::size_t r = 0; r < results.size(); ++r) {
    for (const auto& rec : results[r]) {
      json row = {{"type", "record"},
                  {"replica", static_cast<std::int64_t>(r)},
                  {"n", rec.n},
                  {"log_mass", rec.log_mass},
                  {"leaf_height", rec.leaf_height}};
      if (rec.has_stat) row["stat"] = rec.stat;
      out.stream() << row.dump() << "\n";
    }
  }

  if (!a.summary.empty()) {
    // per-checkpoint summaries of the exponent estimate -log M_n / log n
    std::map<std::int64_t, std::vector<double>> exponent, height;
    for (const auto& recs : results) {
      for (const auto& rec : recs) {
        exponent[rec.n].push_back(rec.log_mass /
                                  std::log(static_cast<double>(rec.n)));
        height[rec.n].push_back(rec.leaf_height);
      }
    }
    auto sout = open_output(a.summary);
    write_metadata(sout.stream(),
                   cfg.metadata("grow-summary",
                                {{"n", std::to_string(a.n)},
                                 {"replicas", std::to_string(a.replicas)}}));
    sout.stream() << "n,replicas,gamma_hat_mean,gamma_hat_sd,mean_leaf_height\n";
    for (const auto& [n, xs] : exponent) {
      const auto s = summarize(xs);
      const auto h = summarize(height[n]);
      sout.stream() << n << "," << s.count << "," << fmt17(s.mean) << ","
                    << fmt17(s.sd) << "," << fmt17(h.mean) << "\n";
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

struct SpectrumArgs {
  std::vector<double> alphas;
  std::string out;
  std::string diagnostics;
};

int cmd_spectrum(const SpectrumArgs& a, RunConfig& cfg) {
  if (a.alphas.empty())
    throw CLI::ValidationError("--alphas", "need at least one alpha");
  cfg.finalize();
  std::vector<SpectrumResult> rows(a.alphas.size());
  parallel_for(rows.size(), cfg.threads,
               [&](std::size_t i) { rows[i] = beta_of_alpha(a.alphas[i]); });

  auto out = open_output(a.out);
  write_metadata(out.stream(), cfg.metadata("spectrum"));
  out.stream() << "alpha,beta,residual,iterations\n";
  for (const auto& r : rows)
    out.stream() << fmt17(r.alpha) << "," << fmt17(r.beta) << ","
                 << fmt17(r.residual) << "," << r.iterations << "\n";

  if (!a.diagnostics.empty()) {
    json diag = {{"config", metadata_json(cfg.metadata("spectrum"))},
                 {"results", json::array()}};
    for (const auto& r : rows) {
      diag["results"].push_back({{"alpha", r.alpha},
                                 {"beta", r.beta},
                                 {"residual", r.residual},
                                 {"iterations", r.iterations},
                                 {"bracket", {r.bracket_lo, r.bracket_hi}}});
    }
    auto dout = open_output(a.diagnostics);
    dout.stream() << diag.dump(2) << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// moments
// ---------------------------------------------------------------------------

struct MomentsArgs {
  double alpha = 1.0;
  std::int64_t n = 1024;
  std::int64_t window_lo = 0, window_hi = 0;
  std::string out;
  std::string diagnostics;
};

int cmd_moments(const MomentsArgs& a, RunConfig& cfg) {
  if (a.n < 1 || a.n > kMomentCap)
    throw CLI::ValidationError(
        "--n", "moment table size must be in [1, " +
                   std::to_string(kMomentCap) + "] (O(N^2) recursion)");
  cfg.finalize();
  const MomentTable table = moment_recursion(a.alpha, a.n);

  auto out = open_output(a.out);
  write_metadata(out.stream(),
                 cfg.metadata("moments", {{"alpha", fmt17(a.alpha)},
                                          {"n", std::to_string(a.n)}}));
  out.stream() << "n,log_e,e\n";
  for (std::size_t n = 0; n < table.log_e.size(); ++n)
    out.stream() << n << "," << fmt17(table.log_e[n]) << ","
                 << fmt17(std::exp(table.log_e[n])) << "\n";

  if (!a.diagnostics.empty()) {
    std::int64_t lo = a.window_lo, hi = a.window_hi;
    if (lo == 0) lo = std::max<std::int64_t>(2, a.n / 16);
    if (hi == 0) hi = a.n;
    const SlopeFit fit = slope_fit(table, lo, hi);
    json diag = {{"config", metadata_json(cfg.metadata(
                                "moments", {{"alpha", fmt17(a.alpha)},
                                            {"n", std::to_string(a.n)}}))},
                 {"window", {lo, hi}},
                 {"slope", fit.slope},
                 {"intercept", fit.intercept},
                 {"dyadic_mean", fit.dyadic_mean},
                 {"dyadic", json::array()}};
    for (const auto& [n, d] : fit.dyadic)
      diag["dyadic"].push_back({{"n", n}, {"estimate", d}});
    auto dout = open_output(a.diagnostics);
    dout.stream() << diag.dump(2) << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// spine
// ---------------------------------------------------------------------------

struct SpineArgs {
  std::string mode = "continuum";
  int replicas = 1000;
  std::int64_t n = 100000;  // discrete mode
  double eps_cut = 1e-4;
  std::vector<double> eps_grid = {1e-2, 1e-3};
  std::string out;
  std::string histogram;
};

int cmd_spine(const SpineArgs& a, RunConfig& cfg) {
  if (a.replicas < 1)
    throw CLI::ValidationError("--replicas", "need at least one replica");
  cfg.finalize();
  auto out = open_output(a.out);

  if (a.mode == "discrete") {
    if (a.n < 1)
      throw CLI::ValidationError("--n", "discrete spine needs n >= 1");
    std::vector<DiscreteSpineChain> chains(
        static_cast<std::size_t>(a.replicas));
    parallel_for(chains.size(), cfg.threads, [&](std::size_t r) {
      RngStream rng(cfg.seed, r, 3);
      chains[r] = discrete_spine(a.n, rng);
    });
    write_metadata(out.stream(),
                   cfg.metadata("spine", {{"mode", "discrete"},
                                          {"n", std::to_string(a.n)}}));
    out.stream() << "replica,neg_log_mass,height,exponent\n";
    const double logn = std::log(static_cast<double>(a.n));
    for (std::size_t r = 0; r < chains.size(); ++r)
      out.stream() << r << "," << fmt17(chains[r].neg_log_mass) << ","
                   << chains[r].steps << ","
                   << fmt17(chains[r].neg_log_mass / logn) << "\n";
    if (!a.histogram.empty()) {
      std::vector<double> scaled;
      scaled.reserve(chains.size());
      const double denom =
          2.0 * std::sqrt(2.0) * std::sqrt(static_cast<double>(a.n));
      for (const auto& c : chains)
        scaled.push_back(static_cast<double>(c.steps) / denom);
      const auto h = make_histogram(scaled, 60, 0.0, 3.0);
      auto hout = open_output(a.histogram);
      write_metadata(hout.stream(),
                     cfg.metadata("spine-histogram", {{"mode", "discrete"}}));
      hout.stream() << "bin_lo,bin_hi,count\n";
      const double w = (h.hi - h.lo) / static_cast<double>(h.counts.size());
      for (std::size_t i = 0; i < h.counts.size(); ++i)
        hout.stream() << fmt17(h.lo + w * i) << "," << fmt17(h.lo + w * (i + 1))
                      << "," << h.counts[i] << "\n";
    }
    return kExitOk;
  }

  if (a.mode != "continuum")
    throw CLI::ValidationError("--mode", "expected 'continuum' or 'discrete'");

  const JumpLaw law(a.eps_cut);
  if (law.compensation_warning())
    std::cerr << "warning: eps_cut=" << a.eps_cut
              << " compensates more than 10% of the mean jump rate\n";
  std::vector<SpinePathSample> paths(static_cast<std::size_t>(a.replicas));
  parallel_for(paths.size(), cfg.threads, [&](std::size_t r) {
    RngStream rng(cfg.seed, r, 4);
    paths[r] = sample_spine_pair(law, rng);
  });

  write_metadata(out.stream(),
                 cfg.metadata("spine", {{"mode", "continuum"},
                                        {"eps_cut", fmt17(a.eps_cut)}}));
  out.stream() << "replica,extinction,tail_bound,flagged";
  for (double e : a.eps_grid)
    out.stream() << ",exp_mu@" << fmt17(e) << ",exp_nu@" << fmt17(e);
  out.stream() << "\n";
  for (std::size_t r = 0; r < paths.size(); ++r) {
    const auto est = dimension_exponent(paths[r], a.eps_grid);
    out.stream() << r << "," << fmt17(paths[r].extinction) << ","
                 << fmt17(paths[r].tail_bound) << ","
                 << (paths[r].flagged ? 1 : 0);
    for (const auto& e : est)
      out.stream() << "," << fmt17(e.exp_mu) << "," << fmt17(e.exp_nu);
    out.stream() << "\n";
  }

  if (!a.histogram.empty()) {
    std::vector<double> I;
    I.reserve(paths.size());
    for (const auto& p : paths) I.push_back(p.extinction);
    const auto h = make_histogram(I, 60, 0.0, 3.0);
    auto hout = open_output(a.histogram);
    write_metadata(hout.stream(),
                   cfg.metadata("spine-histogram", {{"mode", "continuum"}}));
    hout.stream() << "bin_lo,bin_hi,count\n";
    const double w = (h.hi - h.lo) / static_cast<double>(h.counts.size());
    for (std::size_t i = 0; i < h.counts.size(); ++i)
      hout.stream() << fmt17(h.lo + w * i) << "," << fmt17(h.lo + w * (i + 1))
                    << "," << h.counts[i] << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct Check {
  std::string name;
  bool passed;
  double value;
  double expected;
  double tolerance;
};

void run_identities(std::vector<Check>& checks) {
  bool sum_ok = true, rec_ok = true, kernel_ok = true, b3_ok = true;
  for (std::int64_t a = 0; a <= 60 && sum_ok; ++a)
    for (std::int64_t b = 0; b <= 60; ++b)
      if (c_weight(a, b) + c_weight(b, a) != 1) {
        sum_ok = false;
        break;
      }
  checks.push_back({"c_weight_symmetry_sum", sum_ok, sum_ok ? 0.0 : 1.0, 0, 0});

  for (std::int64_t a = -1; a <= 60 && rec_ok; ++a) {
    for (std::int64_t b = -1; b <= 60; ++b) {
      if (a == -1 && b == -1) continue;
      auto P = [](std::int64_t x, std::int64_t y) {
        return (x < 0 || y < 0) ? Rational(0) : split_prob(x, y);
      };
      Rational rhs(0);
      if (a >= 0) rhs += P(a, b + 1) * c_weight(a, b + 1);
      if (b >= 0) rhs += P(a + 1, b) * (Rational(1) - c_weight(a + 1, b));
      if (P(a + 1, b + 1) != rhs) {
        rec_ok = false;
        break;
      }
    }
  }
  checks.push_back({"profile_recurrence", rec_ok, rec_ok ? 0.0 : 1.0, 0, 0});

  for (std::int64_t m = 1; m <= 60 && kernel_ok; ++m) {
    Rational sum(0);
    for (std::int64_t a = 0; a < m; ++a)
      sum += 2 * split_prob(a, m - 1 - a) * c_weight(a, m - 1 - a);
    if (sum != 1) kernel_ok = false;
  }
  checks.push_back(
      {"descent_kernel_total", kernel_ok, kernel_ok ? 0.0 : 1.0, 0, 0});

  for (std::int64_t a = 0; a <= 40 && b3_ok; ++a)
    for (std::int64_t b = 0; b <= 40; ++b)
      if (best_of_three(a, b) != c_weight(a, b)) {
        b3_ok = false;
        break;
      }
  checks.push_back({"best_of_three", b3_ok, b3_ok ? 0.0 : 1.0, 0, 0});
}

void run_uniformity(std::vector<Check>& checks) {
  for (int n = 1; n <= kPushforwardCap; ++n) {
    const Rational dev = uniformity_pushforward_deviation(n);
    checks.push_back({"pushforward_n" + std::to_string(n), dev == 0,
                      to_double(dev), 0.0, 0.0});
  }
}

void run_spectrum_suite(std::vector<Check>& checks) {
  auto add = [&](const std::string& name, double value, double expected,
                 double tol) {
    checks.push_back(
        {name, std::abs(value - expected) <= tol, value, expected, tol});
  };
  add("I_0_0", integral_I(0.0, 0.0).value, 0.0, 1e-10);
  add("beta_0", beta_of_alpha(0.0).beta, 0.0, 1e-9);
  add("beta_m1", beta_of_alpha(-1.0).beta, -1.0, 1e-9);
  add("beta_1", beta_of_alpha(1.0).beta, beta_at_one(), 1e-8);
  add("gamma_quadrature", gamma_constant(), gamma_exponent(), 1e-9);
  for (double alpha : {0.25, 0.5, 1.0, 2.0, 3.5}) {
    const auto r = phi(alpha);
    add("phi_" + fmt17(alpha), r.quadrature.value, r.closed_form,
        1e-8 * std::abs(r.closed_form));
  }
  for (double alpha : {1.0, 2.0, 2.5}) {
    const auto [lhs, rhs] = beta_identity(alpha);
    add("beta_identity_" + fmt17(alpha), lhs.value, rhs,
        1e-8 * std::max(1.0, std::abs(rhs)));
  }
}

void run_spine_suite(std::vector<Check>& checks, const RunConfig& cfg) {
  const double sqrt2pi = std::sqrt(8.0 * std::atan(1.0));
  auto add = [&](const std::string& name, double value, double expected,
                 double tol) {
    checks.push_back(
        {name, std::abs(value - expected) <= tol, value, expected, tol});
  };
  add("pi_mu_mean", pi_mu_mean(), sqrt2pi, 1e-9);
  add("pi_nu_mean", pi_nu_mean(), gamma_exponent() * sqrt2pi, 1e-9);

  const JumpLaw law(1e-4);
  double worst = 0.0;
  for (double u = 1.0 / 64; u < 1.0; u += 1.0 / 64)
    worst = std::max(worst, std::abs(law.cdf_x(law.sample_x(u)) - u));
  add("jump_table_inversion", worst, 0.0, 1e-8);

  const int reps = 3000;
  std::vector<double> I(reps);
  parallel_for(static_cast<std::size_t>(reps), cfg.threads, [&](std::size_t r) {
    RngStream rng(cfg.seed, r, 5);
    I[r] = sample_spine_pair(law, rng).extinction;
  });
  add("extinction_mean", summarize(I).mean, 0.9399856029866252, 0.03);
}

int cmd_verify(const std::string& suite, const std::string& report_path,
               RunConfig& cfg) {
  cfg.finalize();
  std::vector<Check> checks;
  if (suite == "identities") {
    run_identities(checks);
  } else if (suite == "uniformity") {
    run_uniformity(checks);
  } else if (suite == "spectrum") {
    run_spectrum_suite(checks);
  } else if (suite == "spine") {
    run_spine_suite(checks, cfg);
  } else {
    throw CLI::ValidationError(
        "--suite", "unknown suite '" + suite +
                       "' (expected uniformity|identities|spectrum|spine)");
  }

  bool all = true;
  json report = {{"suite", suite},
                 {"config", metadata_json(cfg.metadata("verify"))},
                 {"checks", json::array()}};
  for (const auto& c : checks) {
    all = all && c.passed;
    std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << "\n";
    report["checks"].push_back({{"name", c.name},
                                {"passed", c.passed},
                                {"value", c.value},
                                {"expected", c.expected},
                                {"tolerance", c.tolerance}});
  }
  report["passed"] = all;
  if (!report_path.empty()) {
    auto out = open_output(report_path);
    out.stream() << report.dump(2) << "\n";
  }
  std::cout << (all ? "verification passed" : "verification FAILED") << "\n";
  return all ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "leafgrow: uniform growth of plane binary trees by the leaf-growth "
      "measure, its multifractal spectrum, and the continuum spine"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "flat key=value config file (flags override)");

  RunConfig cfg;

  SampleArgs sample_args;
  auto* sample = app.add_subcommand("sample", "emit one uniform random tree");
  sample->add_option("--n", sample_args.n, "tree size (internal vertices)")
      ->required();
  sample->add_option("--format", sample_args.format, "parens|dot")
      ->check(CLI::IsMember({"parens", "dot"}));
  sample->add_flag("--measure", sample_args.with_measure,
                   "annotate leaves with their leaf-growth mass (dot only)");
  sample->add_option("--out", sample_args.out, "output path (default stdout)");
  cfg.add_common(sample);

  MeasureArgs measure_args;
  auto* measure =
      app.add_subcommand("measure", "leaf-growth measure of a tree as CSV");
  measure->add_option("--in", measure_args.in,
                      "tree file (balanced parentheses)");
  measure->add_option("--n", measure_args.n,
                      "sample a uniform tree of this size instead");
  measure->add_option("--out", measure_args.out, "output path");
  cfg.add_common(measure);

  GrowArgs grow_args;
  auto* grow = app.add_subcommand(
      "grow", "run leaf-growth chains, record trajectory statistics");
  grow->add_option("--n", grow_args.n, "target size");
  grow->add_option("--replicas", grow_args.replicas, "independent chains");
  grow->add_option("--checkpoints", grow_args.checkpoints,
                   "sizes at which to record (default: target)")
      ->delimiter(',');
  grow->add_flag("--stat", grow_args.with_stat,
                 "also record total internal path length");
  grow->add_option("--out", grow_args.out, "JSON-lines trajectory output");
  grow->add_option("--summary", grow_args.summary, "CSV summary per run");
  cfg.add_common(grow);

  SpectrumArgs spectrum_args;
  auto* spectrum = app.add_subcommand(
      "spectrum", "multifractal spectrum beta(alpha) over an alpha grid");
  spectrum->add_option("--alphas", spectrum_args.alphas, "alpha values")
      ->delimiter(',')
      ->required();
  spectrum->add_option("--out", spectrum_args.out, "CSV output");
  spectrum->add_option("--diagnostics", spectrum_args.diagnostics,
                       "JSON diagnostics blob");
  cfg.add_common(spectrum);

  MomentsArgs moments_args;
  auto* moments =
      app.add_subcommand("moments", "moment table e_n = E[M_n^alpha]");
  moments->add_option("--alpha", moments_args.alpha, "moment order")
      ->required();
  moments->add_option("--n", moments_args.n, "table size N");
  moments->add_option("--window-lo", moments_args.window_lo,
                      "slope window start");
  moments->add_option("--window-hi", moments_args.window_hi,
                      "slope window end");
  moments->add_option("--out", moments_args.out, "CSV output");
  moments->add_option("--diagnostics", moments_args.diagnostics,
                      "JSON slope diagnostics");
  cfg.add_common(moments);

  SpineArgs spine_args;
  auto* spine = app.add_subcommand(
      "spine", "continuum spine paths or the discrete descent chain");
  spine->add_option("--mode", spine_args.mode, "continuum|discrete");
  spine->add_option("--replicas", spine_args.replicas, "paths/chains");
  spine->add_option("--n", spine_args.n, "start size (discrete mode)");
  spine->add_option("--eps-cut", spine_args.eps_cut,
                    "small-jump truncation (continuum mode)");
  spine->add_option("--eps-grid", spine_args.eps_grid,
                    "near-extinction exponent scales")
      ->delimiter(',');
  spine->add_option("--out", spine_args.out, "CSV output");
  spine->add_option("--histogram", spine_args.histogram,
                    "height histogram CSV");
  cfg.add_common(spine);

  std::string verify_suite;
  std::string verify_report;
  auto* verify =
      app.add_subcommand("verify", "run an exact/numeric invariant suite");
  verify->add_option("--suite", verify_suite,
                     "uniformity|identities|spectrum|spine")
      ->required();
  verify->add_option("--report", verify_report, "JSON report path");
  cfg.add_common(verify);

  try {
    app.parse(argc, argv);
    if (sample->parsed()) return cmd_sample(sample_args, cfg);
    if (measure->parsed()) return cmd_measure(measure_args, cfg);
    if (grow->parsed()) return cmd_grow(grow_args, cfg);
    if (spectrum->parsed()) return cmd_spectrum(spectrum_args, cfg);
    if (moments->parsed()) return cmd_moments(moments_args, cfg);
    if (spine->parsed()) return cmd_spine(spine_args, cfg);
    if (verify->parsed()) return cmd_verify(verify_suite, verify_report, cfg);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return kExitOk;
}
