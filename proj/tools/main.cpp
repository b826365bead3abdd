// phaseest — command-line front end.
//
// Subcommands: ramsey, bayes1q, phom, ccphom, bayes-direct, bayes-marginal,
// compare, oracle-check. Each writes plot-ready CSVs plus a standalone
// metadata file. Exit codes: 0 success, 2 invalid configuration, 3 I/O error.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "phaseest/analysis.hpp"
#include "phaseest/csvio.hpp"
#include "phaseest/estimators.hpp"
#include "phaseest/models.hpp"
#include "phaseest/phasecore.hpp"
#include "phaseest/simkernel.hpp"

namespace {

using namespace phaseest;

constexpr const char* kVersion = "0.1.0";

struct CommonOpts {
  std::string outdir;
  std::string prefix;
  std::uint64_t seed = 12345;
  int workers = 0;
};

std::string out_path(const CommonOpts& c, const std::string& suffix) {
  std::string dir = c.outdir;
  if (dir.empty()) {
    const char* env = std::getenv("PHASEEST_OUTDIR");
    dir = env ? env : ".";
  }
  return dir + "/" + c.prefix + suffix;
}

void add_common(CLI::App* cmd, CommonOpts& c, const std::string& default_prefix) {
  c.prefix = default_prefix;
  cmd->add_option("--outdir", c.outdir, "output directory (default: $PHASEEST_OUTDIR or .)");
  cmd->add_option("--prefix", c.prefix, "output file prefix");
  cmd->add_option("--seed", c.seed, "master PRNG seed");
  cmd->add_option("--workers", c.workers, "worker threads (0 = all available cores)");
  // handled by expand_config() before parsing; declared here for --help
  cmd->add_option("--config", "flat key=value configuration file; flags override");
}

// Expands `--config FILE` into individual `--key=value` tokens, keeping
// explicit flags ahead of file values. Unknown keys then fail option parsing.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config_path;
  for (size_t i = 0; i < args.size();) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw CLI::ParseError("--config: missing file name", CLI::ExitCodes::InvalidError);
      config_path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
      args.erase(args.begin() + i);
    } else {
      ++i;
    }
  }
  if (config_path.empty()) return args;
  std::set<std::string> given;
  for (const std::string& a : args)
    if (a.rfind("--", 0) == 0) given.insert(a.substr(0, a.find('=')));
  std::ifstream in(config_path);
  if (!in) throw CLI::ParseError("--config: cannot read " + config_path, CLI::ExitCodes::InvalidError);
  std::string line;
  auto trim = [](std::string s) {
    size_t b = s.find_first_not_of(" \t\r");
    size_t e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw CLI::ParseError(config_path + ":" + std::to_string(lineno) + ": expected key=value",
                            CLI::ExitCodes::InvalidError);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw CLI::ParseError(config_path + ":" + std::to_string(lineno) + ": empty key", CLI::ExitCodes::InvalidError);
    if (given.count("--" + key)) continue;  // explicit flag wins
    args.push_back("--" + key + "=" + value);
  }
  return args;
}

std::string join_longs(const std::vector<long>& v) {
  std::ostringstream os;
  for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

MetadataBlock base_metadata(const CommonOpts& c, const std::string& command) {
  return {{"command", command},
          {"version", kVersion},
          {"rng_algorithm", kRngAlgorithm},
          {"seed", std::to_string(c.seed)},
          {"workers", std::to_string(c.workers)}};
}

void write_meta_with_clock(const CommonOpts& c, MetadataBlock meta,
                           std::chrono::steady_clock::time_point t0) {
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  meta.emplace_back("wall_clock_seconds", format_double(secs));
  write_metadata_file(out_path(c, ".meta"), meta);
}

void append_curve_meta(MetadataBlock& meta, const VarianceCurve& curve, const std::string& tag) {
  std::string suffix = tag.empty() ? "" : "_" + tag;
  if (curve.samples.size() >= 4) {
    meta.emplace_back("fitted_c" + suffix, format_double(curve.fitted_c));
    meta.emplace_back("fit_residual" + suffix, format_double(curve.fit_residual));
  }
}

// --- estimator hooks for Monte-Carlo curves ---

TrialEstimator marginal_estimator(const ModelSpec& model, BayesConfig cfg,
                                  std::vector<long> budgets) {
  TrialEstimator est;
  est.num_phases = model.num_phases();
  est.run = [&model, cfg, budgets](const std::vector<double>& truth, RngStream& rng) {
    return bayes_marginal_curve(model, truth, cfg, budgets, rng);
  };
  return est;
}

TrialEstimator direct_estimator(const ModelSpec& model, BayesConfig cfg,
                                std::vector<long> per_combo_budgets) {
  TrialEstimator est;
  est.num_phases = model.num_phases();
  est.run = [&model, cfg, per_combo_budgets](const std::vector<double>& truth, RngStream& rng) {
    return bayes_direct_cc_curve(model, truth, cfg, per_combo_budgets, rng);
  };
  return est;
}

// One PHOM run per configuration value (mpp or iteration count); each run is
// an independent experiment charged with its own preparations.
TrialEstimator phom_sweep_estimator(const ModelSpec& model, PhomConfig base,
                                    std::vector<int> values, bool sweep_iterations) {
  TrialEstimator est;
  est.num_phases = model.num_phases();
  est.run = [&model, base, values, sweep_iterations](const std::vector<double>& truth,
                                                     RngStream& rng) {
    std::vector<CheckpointEstimate> out;
    for (int v : values) {
      PhomConfig cfg = base;
      if (sweep_iterations)
        cfg.iterations = v;
      else
        cfg.shots_per_point = v;
      EstimateResult r = phom(model, truth, cfg, rng);
      out.push_back({r.preparations_used, r.phases_est, r.variances, r.diffuse});
    }
    return out;
  };
  return est;
}

std::vector<long> phom_budgets(const ModelSpec& model, const PhomConfig& base,
                               const std::vector<int>& values, bool sweep_iterations) {
  std::vector<long> budgets;
  for (int v : values) {
    long iters = sweep_iterations ? v : base.iterations;
    long mpp = sweep_iterations ? base.shots_per_point : v;
    budgets.push_back(static_cast<long>(model.num_combos()) * base.scan_points * mpp * iters);
  }
  return budgets;
}

// --- subcommand bodies ---

int run_ramsey(const CommonOpts& c, double phi, int scan_points, int shots, bool noiseless) {
  auto t0 = std::chrono::steady_clock::now();
  RamseyConfig cfg{scan_points, shots, noiseless};
  RngStream rng = spawn_rng(c.seed, 0);
  RamseyScanResult r = ramsey_scan(phi, cfg, rng);
  MetadataBlock meta = base_metadata(c, "ramsey");
  meta.emplace_back("phi", format_double(phi));
  meta.emplace_back("scan_points", std::to_string(scan_points));
  meta.emplace_back("shots_per_point", std::to_string(shots));
  meta.emplace_back("noiseless", noiseless ? "1" : "0");
  meta.emplace_back("estimate", format_double(r.estimate.phases_est[0]));
  meta.emplace_back("fitted_amplitude", format_double(r.fitted_amplitude));
  meta.emplace_back("preparations", std::to_string(r.estimate.preparations_used));
  write_scan_csv(out_path(c, ".csv"), meta, r.thetas, r.expectations, r.stderrs);
  write_meta_with_clock(c, meta, t0);
  std::cout << "estimate = " << format_double(r.estimate.phases_est[0]) << "\n";
  return 0;
}

int run_bayes1q(const CommonOpts& c, double phi, long budget, int grid_bins,
                std::vector<long> dump_steps) {
  auto t0 = std::chrono::steady_clock::now();
  std::sort(dump_steps.begin(), dump_steps.end());
  for (long s : dump_steps)
    if (s < 1 || s > budget) throw std::invalid_argument("dump-posterior: steps must be in [1, budget]");
  RngStream rng = spawn_rng(c.seed, 0);
  PosteriorGrid1D grid(grid_bins);
  MetadataBlock meta = base_metadata(c, "bayes1q");
  meta.emplace_back("phi", format_double(phi));
  meta.emplace_back("budget", std::to_string(budget));
  meta.emplace_back("grid_bins", std::to_string(grid_bins));
  double theta = 0.0;
  size_t next_dump = 0;
  for (long n = 1; n <= budget; ++n) {
    int outcome = sample_single_qubit(phi, theta, rng);
    grid.update_cosine(1, outcome, theta);
    theta = wrap(grid.circular_mean() + rng.coin_sign() * kPi / 2.0);
    while (next_dump < dump_steps.size() && n == dump_steps[next_dump]) {
      MetadataBlock step_meta = meta;
      step_meta.emplace_back("step", std::to_string(n));
      write_posterior_csv(out_path(c, "_step" + std::to_string(n) + ".csv"), step_meta, grid);
      ++next_dump;
    }
  }
  CircularMoments m = grid.moments();
  meta.emplace_back("estimate", format_double(m.mean));
  meta.emplace_back("posterior_variance", format_double(m.variance));
  meta.emplace_back("diffuse", m.diffuse ? "1" : "0");
  write_meta_with_clock(c, meta, t0);
  std::cout << "estimate = " << format_double(m.mean)
            << "  variance = " << format_double(m.variance) << "\n";
  return 0;
}

int run_phom_family(const CommonOpts& c, const std::string& command, const std::string& model_name,
                    PhomConfig base, std::vector<int> sweep_values, bool sweep_iterations,
                    int trials) {
  auto t0 = std::chrono::steady_clock::now();
  ModelSpec model = ModelSpec::build(parse_model_kind(model_name));
  TrialEstimator est = phom_sweep_estimator(model, base, sweep_values, sweep_iterations);
  std::vector<long> budgets = phom_budgets(model, base, sweep_values, sweep_iterations);
  VarianceCurve curve = monte_carlo_curve(est, budgets, trials, c.seed, c.workers);
  MetadataBlock meta = base_metadata(c, command);
  meta.emplace_back("model", model_name);
  meta.emplace_back("variant", base.variant == PhomVariant::plain ? "plain" : "constant_cosine");
  meta.emplace_back("scan_points", std::to_string(base.scan_points));
  meta.emplace_back(sweep_iterations ? "iterations" : "shots_per_point",
                    [&] {
                      std::ostringstream os;
                      for (size_t i = 0; i < sweep_values.size(); ++i)
                        os << (i ? "," : "") << sweep_values[i];
                      return os.str();
                    }());
  if (!sweep_iterations) meta.emplace_back("iterations", std::to_string(base.iterations));
  else meta.emplace_back("shots_per_point", std::to_string(base.shots_per_point));
  meta.emplace_back("trials", std::to_string(trials));
  meta.emplace_back("budgets", join_longs(budgets));
  append_curve_meta(meta, curve, "");
  write_curve_csv(out_path(c, ".csv"), meta, curve);
  write_meta_with_clock(c, meta, t0);
  if (curve.samples.size() >= 4)
    std::cout << "fitted_c = " << format_double(curve.fitted_c) << "\n";
  for (const auto& s : curve.samples)
    std::cout << "n = " << s.n << "  sigma2 = " << format_double(s.sigma2) << "\n";
  return 0;
}

int run_bayes_marginal(const CommonOpts& c, const std::string& model_name, BayesConfig cfg,
                       const std::string& selection, std::vector<long> budgets, int trials) {
  auto t0 = std::chrono::steady_clock::now();
  if (selection == "adaptive") cfg.selection = Selection::adaptive;
  else if (selection == "random") cfg.selection = Selection::random_angles;
  else throw std::invalid_argument("selection: must be adaptive or random");
  ModelSpec model = ModelSpec::build(parse_model_kind(model_name));
  TrialEstimator est = marginal_estimator(model, cfg, budgets);
  VarianceCurve curve = monte_carlo_curve(est, budgets, trials, c.seed, c.workers);
  MetadataBlock meta = base_metadata(c, "bayes-marginal");
  meta.emplace_back("model", model_name);
  meta.emplace_back("selection", selection);
  meta.emplace_back("grid_bins", std::to_string(cfg.grid_bins));
  meta.emplace_back("warmup", std::to_string(cfg.warmup));
  meta.emplace_back("trials", std::to_string(trials));
  meta.emplace_back("budgets", join_longs(budgets));
  append_curve_meta(meta, curve, "");
  write_curve_csv(out_path(c, ".csv"), meta, curve);
  write_meta_with_clock(c, meta, t0);
  if (curve.samples.size() >= 4)
    std::cout << "fitted_c = " << format_double(curve.fitted_c) << "\n";
  return 0;
}

int run_bayes_direct(const CommonOpts& c, BayesConfig cfg, const std::string& selection,
                     std::vector<long> budgets, int trials) {
  auto t0 = std::chrono::steady_clock::now();
  if (selection == "adaptive") cfg.selection = Selection::adaptive;
  else if (selection == "random") cfg.selection = Selection::random_angles;
  else throw std::invalid_argument("selection: must be adaptive or random");
  ModelSpec model = ModelSpec::build(ModelKind::two_plaquette);
  TrialEstimator est = direct_estimator(model, cfg, budgets);
  VarianceCurve curve = monte_carlo_curve(est, budgets, trials, c.seed, c.workers);
  // report total preparations across the per-combo runs
  for (auto& s : curve.samples) s.n *= model.num_combos();
  if (curve.samples.size() >= 4) curve.fitted_c = fit_inverse_n(curve.samples, &curve.fit_residual);
  MetadataBlock meta = base_metadata(c, "bayes-direct");
  meta.emplace_back("model", "two_plaquette");
  meta.emplace_back("selection", selection);
  meta.emplace_back("grid_bins_2d_phase", std::to_string(cfg.grid_bins_2d_phase));
  meta.emplace_back("grid_bins_2d_offset", std::to_string(cfg.grid_bins_2d_offset));
  meta.emplace_back("warmup", std::to_string(cfg.warmup));
  meta.emplace_back("trials", std::to_string(trials));
  meta.emplace_back("budgets_per_combo", join_longs(budgets));
  append_curve_meta(meta, curve, "");
  write_curve_csv(out_path(c, ".csv"), meta, curve);
  write_meta_with_clock(c, meta, t0);
  if (curve.samples.size() >= 4)
    std::cout << "fitted_c = " << format_double(curve.fitted_c) << "\n";
  return 0;
}

int run_compare(const CommonOpts& c, const std::string& model_name,
                std::vector<std::string> methods, std::vector<long> budgets, int trials,
                BayesConfig bayes_cfg, int scan_points) {
  auto t0 = std::chrono::steady_clock::now();
  ModelSpec model = ModelSpec::build(parse_model_kind(model_name));
  MetadataBlock meta = base_metadata(c, "compare");
  meta.emplace_back("model", model_name);
  meta.emplace_back("trials", std::to_string(trials));
  meta.emplace_back("budgets", join_longs(budgets));
  for (const std::string& method : methods) {
    VarianceCurve curve;
    std::vector<long> curve_budgets = budgets;
    if (method == "bayes-marginal" || method == "bayes-marginal-random") {
      BayesConfig cfg = bayes_cfg;
      cfg.selection =
          method == "bayes-marginal" ? Selection::adaptive : Selection::random_angles;
      curve = monte_carlo_curve(marginal_estimator(model, cfg, budgets), budgets, trials, c.seed,
                                c.workers);
    } else if (method == "ccphom") {
      // map total-preparation budgets to shots-per-point
      long per_run = static_cast<long>(model.num_combos()) * scan_points;
      std::vector<int> mpps;
      for (long n : budgets) {
        int mpp = static_cast<int>(std::max<long>(1, (n + per_run / 2) / per_run));
        mpps.push_back(mpp);
      }
      PhomConfig base;
      base.scan_points = scan_points;
      base.variant = PhomVariant::constant_cosine;
      curve_budgets = phom_budgets(model, base, mpps, false);
      curve = monte_carlo_curve(phom_sweep_estimator(model, base, mpps, false), curve_budgets,
                                trials, c.seed, c.workers);
    } else if (method == "bayes-direct") {
      if (model.kind() != ModelKind::two_plaquette)
        throw std::invalid_argument("methods: bayes-direct requires model=two_plaquette");
      std::vector<long> per_combo;
      for (long n : budgets) per_combo.push_back(std::max<long>(1, n / model.num_combos()));
      curve = monte_carlo_curve(direct_estimator(model, bayes_cfg, per_combo), per_combo, trials,
                                c.seed, c.workers);
      for (auto& s : curve.samples) s.n *= model.num_combos();
      if (curve.samples.size() >= 4)
        curve.fitted_c = fit_inverse_n(curve.samples, &curve.fit_residual);
    } else {
      throw std::invalid_argument("methods: unknown method '" + method + "'");
    }
    append_curve_meta(meta, curve, method);
    MetadataBlock curve_meta = meta;
    curve_meta.emplace_back("method", method);
    write_curve_csv(out_path(c, "_" + method + ".csv"), curve_meta, curve);
    std::cout << method << ": fitted_c = " << format_double(curve.fitted_c) << "\n";
  }
  write_meta_with_clock(c, meta, t0);
  return 0;
}

int run_oracle_check(const CommonOpts& c, int samples) {
  auto t0 = std::chrono::steady_clock::now();
  double max_dev = 0.0;
  RngStream rng = spawn_rng(c.seed, 0);
  for (ModelKind kind : {ModelKind::two_plaquette, ModelKind::three_plaquette}) {
    ModelSpec model = ModelSpec::build(kind);
    for (int s = 0; s < samples; ++s) {
      std::vector<double> phi(model.num_phases()), theta(model.num_angles());
      for (double& v : phi) v = rng.uniform_angle();
      for (double& v : theta) v = rng.uniform_angle();
      StatevectorOracle state = statevector_build(model, phi, theta);
      std::vector<double> expect = statevector_expectations(state, model);
      for (int k = 0; k < model.num_combos(); ++k) {
        double analytic = model.full_likelihood(k, +1, phi, theta) -
                          model.full_likelihood(k, -1, phi, theta);
        max_dev = std::max(max_dev, std::abs(expect[k] - analytic));
      }
    }
  }
  MetadataBlock meta = base_metadata(c, "oracle-check");
  meta.emplace_back("samples", std::to_string(samples));
  meta.emplace_back("max_deviation", format_double(max_dev));
  write_meta_with_clock(c, meta, t0);
  std::cout << "max_deviation = " << format_double(max_dev) << "\n";
  return max_dev <= 1e-10 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phase estimation protocol simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  CommonOpts c_ramsey, c_bayes1q, c_phom, c_ccphom, c_direct, c_marginal, c_compare, c_oracle;

  // ramsey
  auto* ramsey = app.add_subcommand("ramsey", "single-qubit Ramsey scan");
  double ramsey_phi = 0.0;
  int ramsey_points = 10, ramsey_shots = 50;
  bool ramsey_noiseless = false;
  ramsey->add_option("--phi", ramsey_phi, "true phase");
  ramsey->add_option("--scan-points", ramsey_points, "scan points M")->check(CLI::Range(4, 100000));
  ramsey->add_option("--shots", ramsey_shots, "shots per point")->check(CLI::PositiveNumber);
  ramsey->add_flag("--noiseless", ramsey_noiseless, "exact expectations instead of sampling");
  add_common(ramsey, c_ramsey, "ramsey");

  // bayes1q
  auto* bayes1q = app.add_subcommand("bayes1q", "single-qubit adaptive Bayes");
  double b1q_phi = 0.0;
  long b1q_budget = 500;
  int b1q_bins = 2048;
  std::vector<long> b1q_dump;
  bayes1q->add_option("--phi", b1q_phi, "true phase");
  bayes1q->add_option("--budget", b1q_budget, "measurement budget")->check(CLI::PositiveNumber);
  bayes1q->add_option("--grid-bins", b1q_bins, "posterior grid bins")->check(CLI::Range(8, 1 << 20));
  bayes1q->add_option("--dump-posterior", b1q_dump, "steps at which to dump the posterior")
      ->delimiter(',');
  add_common(bayes1q, c_bayes1q, "bayes1q");

  // phom
  auto* phom_cmd = app.add_subcommand("phom", "iterative scan-and-maximize (PHOM)");
  std::string phom_model = "two_plaquette";
  int phom_points = 10, phom_mpp = 100, phom_trials = 200;
  std::vector<int> phom_iters = {1};
  phom_cmd->add_option("--model", phom_model, "two_plaquette or three_plaquette");
  phom_cmd->add_option("--scan-points", phom_points, "scan points M")->check(CLI::Range(4, 100000));
  phom_cmd->add_option("--mpp", phom_mpp, "shots per scan point")->check(CLI::PositiveNumber);
  phom_cmd->add_option("--iterations", phom_iters, "iteration counts to sweep")->delimiter(',');
  phom_cmd->add_option("--trials", phom_trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);
  add_common(phom_cmd, c_phom, "phom");

  // ccphom
  auto* ccphom = app.add_subcommand("ccphom", "constant-cosine PHOM");
  std::string cc_model = "two_plaquette";
  int cc_points = 10, cc_trials = 200;
  std::vector<int> cc_mpps = {100};
  ccphom->add_option("--model", cc_model, "two_plaquette or three_plaquette");
  ccphom->add_option("--scan-points", cc_points, "scan points M")->check(CLI::Range(4, 100000));
  ccphom->add_option("--mpp", cc_mpps, "shots-per-point values to sweep")->delimiter(',');
  ccphom->add_option("--trials", cc_trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);
  add_common(ccphom, c_ccphom, "ccphom");

  // bayes-direct
  auto* direct = app.add_subcommand("bayes-direct", "direct constant-cosine Bayes (two-plaquette)");
  BayesConfig direct_cfg;
  int direct_trials = 200;
  std::string direct_selection = "random";
  std::vector<long> direct_budgets = {250, 500, 1000, 2000};
  direct->add_option("--budgets", direct_budgets, "per-combo preparation budgets")->delimiter(',');
  direct->add_option("--selection", direct_selection, "adaptive or random");
  direct->add_option("--trials", direct_trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);
  direct->add_option("--grid-bins-phase", direct_cfg.grid_bins_2d_phase, "phase-axis bins")
      ->check(CLI::Range(8, 1 << 16));
  direct->add_option("--grid-bins-offset", direct_cfg.grid_bins_2d_offset, "offset-axis bins")
      ->check(CLI::Range(2, 1 << 16));
  direct->add_option("--warmup", direct_cfg.warmup, "random-selection warmup steps");
  add_common(direct, c_direct, "bayes_direct");

  // bayes-marginal
  auto* marginal = app.add_subcommand("bayes-marginal", "marginal-likelihood Bayes");
  std::string marg_model = "two_plaquette", marg_selection = "adaptive";
  BayesConfig marg_cfg;
  int marg_trials = 200;
  std::vector<long> marg_budgets = {250, 500, 1000, 2000, 4000};
  marginal->add_option("--model", marg_model, "two_plaquette or three_plaquette");
  marginal->add_option("--selection", marg_selection, "adaptive or random");
  marginal->add_option("--budgets", marg_budgets, "preparation budgets")->delimiter(',');
  marginal->add_option("--trials", marg_trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);
  marginal->add_option("--grid-bins", marg_cfg.grid_bins, "posterior grid bins")
      ->check(CLI::Range(8, 1 << 20));
  marginal->add_option("--warmup", marg_cfg.warmup, "random-selection warmup steps");
  add_common(marginal, c_marginal, "bayes_marginal");

  // compare
  auto* compare = app.add_subcommand("compare", "run several methods on a common budget grid");
  std::string cmp_model = "three_plaquette";
  std::vector<std::string> cmp_methods = {"ccphom", "bayes-marginal"};
  std::vector<long> cmp_budgets = {250, 500, 1000, 2000, 4000};
  int cmp_trials = 200, cmp_points = 10;
  BayesConfig cmp_cfg;
  compare->add_option("--model", cmp_model, "two_plaquette or three_plaquette");
  compare->add_option("--methods", cmp_methods,
                      "subset of ccphom,bayes-marginal,bayes-marginal-random,bayes-direct")
      ->delimiter(',');
  compare->add_option("--budgets", cmp_budgets, "total preparation budgets")->delimiter(',');
  compare->add_option("--trials", cmp_trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);
  compare->add_option("--scan-points", cmp_points, "scan points for ccphom")
      ->check(CLI::Range(4, 100000));
  compare->add_option("--grid-bins", cmp_cfg.grid_bins, "posterior grid bins")
      ->check(CLI::Range(8, 1 << 20));
  compare->add_option("--warmup", cmp_cfg.warmup, "random-selection warmup steps");
  add_common(compare, c_compare, "compare");

  // oracle-check
  auto* oracle = app.add_subcommand("oracle-check", "statevector vs analytic likelihood check");
  int oracle_samples = 100;
  oracle->add_option("--samples", oracle_samples, "random draws per model")
      ->check(CLI::PositiveNumber);
  add_common(oracle, c_oracle, "oracle_check");

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());  // App::parse(vector) wants reversed tokens
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (ramsey->parsed())
      return run_ramsey(c_ramsey, ramsey_phi, ramsey_points, ramsey_shots, ramsey_noiseless);
    if (bayes1q->parsed()) return run_bayes1q(c_bayes1q, b1q_phi, b1q_budget, b1q_bins, b1q_dump);
    if (phom_cmd->parsed()) {
      PhomConfig base;
      base.scan_points = phom_points;
      base.shots_per_point = phom_mpp;
      return run_phom_family(c_phom, "phom", phom_model, base, phom_iters, true, phom_trials);
    }
    if (ccphom->parsed()) {
      PhomConfig base;
      base.scan_points = cc_points;
      base.variant = PhomVariant::constant_cosine;
      return run_phom_family(c_ccphom, "ccphom", cc_model, base, cc_mpps, false, cc_trials);
    }
    if (direct->parsed())
      return run_bayes_direct(c_direct, direct_cfg, direct_selection, direct_budgets,
                              direct_trials);
    if (marginal->parsed())
      return run_bayes_marginal(c_marginal, marg_model, marg_cfg, marg_selection, marg_budgets,
                                marg_trials);
    if (compare->parsed())
      return run_compare(c_compare, cmp_model, cmp_methods, cmp_budgets, cmp_trials, cmp_cfg,
                         cmp_points);
    if (oracle->parsed()) return run_oracle_check(c_oracle, oracle_samples);
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
