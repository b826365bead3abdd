// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. All tolerances are pinned here. Desk scale: trial counts
// in the low thousands rather than the tens of thousands used for the
// published curves, with tolerances set accordingly.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "phaseest/analysis.hpp"
#include "phaseest/csvio.hpp"
#include "phaseest/estimators.hpp"
#include "phaseest/models.hpp"
#include "phaseest/phasecore.hpp"
#include "phaseest/simkernel.hpp"

using namespace phaseest;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

bool in_range(double v, double lo, double hi) { return v >= lo && v <= hi; }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

constexpr std::uint64_t kSeed = 20260824;

TrialEstimator single_qubit_estimator(BayesConfig cfg, std::vector<long> budgets) {
  TrialEstimator est;
  est.num_phases = 1;
  est.run = [cfg, budgets](const std::vector<double>& truth, RngStream& rng) {
    return bayes_single_adaptive_curve(truth[0], cfg, budgets, rng);
  };
  return est;
}

TrialEstimator marginal_estimator(const ModelSpec& model, BayesConfig cfg,
                                  std::vector<long> budgets) {
  TrialEstimator est;
  est.num_phases = model.num_phases();
  est.run = [&model, cfg, budgets](const std::vector<double>& truth, RngStream& rng) {
    return bayes_marginal_curve(model, truth, cfg, budgets, rng);
  };
  return est;
}

TrialEstimator ccphom_estimator(const ModelSpec& model, std::vector<int> mpps) {
  TrialEstimator est;
  est.num_phases = model.num_phases();
  est.run = [&model, mpps](const std::vector<double>& truth, RngStream& rng) {
    std::vector<CheckpointEstimate> out;
    for (int mpp : mpps) {
      PhomConfig cfg;
      cfg.variant = PhomVariant::constant_cosine;
      cfg.shots_per_point = mpp;
      EstimateResult r = phom(model, truth, cfg, rng);
      out.push_back({r.preparations_used, r.phases_est, r.variances, r.diffuse});
    }
    return out;
  };
  return est;
}

// c/n fit of one phase's error column against per-combo budgets.
double fit_per_phase(const VarianceCurve& curve, int phase, int combos) {
  std::vector<VarianceCurve::Sample> samples;
  for (const auto& s : curve.samples) {
    VarianceCurve::Sample p;
    p.n = s.n / combos;
    p.sigma2 = s.sigma2_per_phase[phase];
    samples.push_back(p);
  }
  return fit_inverse_n(samples);
}

void criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  BayesConfig cfg;
  cfg.grid_bins = 256;
  std::vector<long> budgets = {250, 500, 750, 1000};
  auto curve = monte_carlo_curve(single_qubit_estimator(cfg, budgets), budgets, 1000, kSeed);
  bool pass = in_range(curve.fitted_c, 0.8, 1.4);
  report(1, pass, "single-qubit adaptive Bayes c = " + fmt(curve.fitted_c) +
                      " (required 0.8..1.4), " + fmt(elapsed_since(t0)) + " s");
}

void criterion2() {
  auto t0 = std::chrono::steady_clock::now();
  ModelSpec model = ModelSpec::build(ModelKind::two_plaquette);
  std::vector<long> budgets = {250, 500, 1000, 2000, 4000};
  BayesConfig cfg;
  cfg.grid_bins = 256;
  cfg.selection = Selection::random_angles;
  auto random_curve = monte_carlo_curve(marginal_estimator(model, cfg, budgets), budgets, 2000,
                                        kSeed + 1);
  cfg.selection = Selection::adaptive;
  auto adaptive_curve = monte_carlo_curve(marginal_estimator(model, cfg, budgets), budgets, 2000,
                                          kSeed + 2);
  bool pass_random = in_range(random_curve.fitted_c, 7.5 * 0.8, 7.5 * 1.2);
  bool pass_adaptive = in_range(adaptive_curve.fitted_c, 4.0 * 0.85, 4.0 * 1.15);
  report(2, pass_random && pass_adaptive,
         "two-plaquette marginal Bayes: random c = " + fmt(random_curve.fitted_c) +
             " (required 6.0..9.0), adaptive c = " + fmt(adaptive_curve.fitted_c) +
             " (required 3.4..4.6), " + fmt(elapsed_since(t0)) + " s");
}

void criterion3() {
  auto t0 = std::chrono::steady_clock::now();
  ModelSpec model = ModelSpec::build(ModelKind::two_plaquette);
  const int combos = model.num_combos();

  std::vector<int> mpps = {25, 50, 100, 200};
  std::vector<long> cc_budgets;
  for (int mpp : mpps) cc_budgets.push_back(static_cast<long>(combos) * 10 * mpp);
  auto cc = monte_carlo_curve(ccphom_estimator(model, mpps), cc_budgets, 2000, kSeed + 3);

  BayesConfig cfg;
  cfg.selection = Selection::random_angles;
  cfg.grid_bins_2d_phase = 128;
  cfg.grid_bins_2d_offset = 32;
  std::vector<long> per_combo = {250, 500, 1000, 2000};
  TrialEstimator direct;
  direct.num_phases = model.num_phases();
  direct.run = [&model, cfg, per_combo](const std::vector<double>& truth, RngStream& rng) {
    return bayes_direct_cc_curve(model, truth, cfg, per_combo, rng);
  };
  auto bd = monte_carlo_curve(direct, per_combo, 1000, kSeed + 4);
  for (auto& s : bd.samples) s.n *= combos;  // combined three-phase accounting
  bd.fitted_c = fit_inverse_n(bd.samples);

  bool pass = true;
  std::ostringstream detail;
  detail << "two-plaquette constant cosine:";
  for (auto [name, curve] : {std::pair<const char*, VarianceCurve*>{"ccphom", &cc},
                             {"direct Bayes", &bd}}) {
    double worst_per_phase_lo = 1e300, worst_per_phase_hi = 0.0;
    for (int p = 0; p < model.num_phases(); ++p) {
      double cp = fit_per_phase(*curve, p, combos);
      worst_per_phase_lo = std::min(worst_per_phase_lo, cp);
      worst_per_phase_hi = std::max(worst_per_phase_hi, cp);
      if (!in_range(cp, 6.0 * 0.8, 6.0 * 1.2)) pass = false;
    }
    if (!in_range(curve->fitted_c, 18.0 * 0.8, 18.0 * 1.2)) pass = false;
    detail << " " << name << " per-phase c in [" << fmt(worst_per_phase_lo) << ", "
           << fmt(worst_per_phase_hi) << "] (required 4.8..7.2), combined c = "
           << fmt(curve->fitted_c) << " (required 14.4..21.6);";
  }
  detail << " " << fmt(elapsed_since(t0)) << " s";
  report(3, pass, detail.str());
}

void criterion4() {
  auto t0 = std::chrono::steady_clock::now();
  ModelSpec model = ModelSpec::build(ModelKind::three_plaquette);
  std::vector<long> budgets = {2000, 4000, 8000, 16000};
  BayesConfig cfg;
  cfg.grid_bins = 256;
  cfg.warmup = 200;
  auto curve = monte_carlo_curve(marginal_estimator(model, cfg, budgets), budgets, 2000,
                                 kSeed + 5);
  bool pass = in_range(curve.fitted_c, 16.0 * 0.85, 16.0 * 1.15);
  report(4, pass, "three-plaquette adaptive marginal Bayes c = " + fmt(curve.fitted_c) +
                      " (required 13.6..18.4), " + fmt(elapsed_since(t0)) + " s");
}

void criterion5() {
  auto t0 = std::chrono::steady_clock::now();
  ModelSpec model = ModelSpec::build(ModelKind::three_plaquette);
  std::vector<int> mpps = {25, 50, 100, 200};
  std::vector<long> budgets;
  for (int mpp : mpps) budgets.push_back(static_cast<long>(model.num_combos()) * 10 * mpp);
  auto curve = monte_carlo_curve(ccphom_estimator(model, mpps), budgets, 2000, kSeed + 6);
  bool pass = in_range(curve.fitted_c, 224.0 * 0.7, 224.0 * 1.3);
  report(5, pass, "three-plaquette constant-cosine PHOM (M=10) c = " + fmt(curve.fitted_c) +
                      " (required 156.8..291.2), " + fmt(elapsed_since(t0)) + " s");
}

void criterion6() {
  auto t0 = std::chrono::steady_clock::now();
  ModelSpec model = ModelSpec::build(ModelKind::two_plaquette);
  std::vector<int> iterations = {1, 2, 3, 4};
  TrialEstimator est;
  est.num_phases = model.num_phases();
  est.run = [&model, iterations](const std::vector<double>& truth, RngStream& rng) {
    std::vector<CheckpointEstimate> out;
    for (int it : iterations) {
      PhomConfig cfg;
      cfg.iterations = it;
      cfg.shots_per_point = 100;
      EstimateResult r = phom(model, truth, cfg, rng);
      out.push_back({r.preparations_used, r.phases_est, r.variances, r.diffuse});
    }
    return out;
  };
  std::vector<long> budgets;
  for (int it : iterations) budgets.push_back(static_cast<long>(model.num_combos()) * 10 * 100 * it);
  auto curve = monte_carlo_curve(est, budgets, 500, kSeed + 7);
  // non-increasing within noise, and flat between the last two iteration counts
  bool pass = true;
  std::ostringstream detail;
  detail << "PHOM iteration plateau (mpp=100): sigma2 =";
  for (size_t i = 0; i < curve.samples.size(); ++i) {
    detail << " " << fmt(curve.samples[i].sigma2);
    if (i > 0) {
      double se = std::hypot(curve.samples[i].stderr_sigma2, curve.samples[i - 1].stderr_sigma2);
      if (curve.samples[i].sigma2 > curve.samples[i - 1].sigma2 + 2.0 * se) pass = false;
    }
  }
  const auto& s3 = curve.samples[2];
  const auto& s4 = curve.samples[3];
  double se_flat = std::hypot(s3.stderr_sigma2, s4.stderr_sigma2);
  if (std::abs(s4.sigma2 - s3.sigma2) > 2.0 * se_flat) pass = false;
  detail << " (non-increasing within 2 SE, flat at I=4 within 2 SE = " << fmt(2.0 * se_flat)
         << "), " << fmt(elapsed_since(t0)) << " s";
  report(6, pass, detail.str());
}

void criterion7() {
  auto t0 = std::chrono::steady_clock::now();
  double max_dev = 0.0;
  RngStream rng(kSeed + 8, 0);
  for (auto kind : {ModelKind::two_plaquette, ModelKind::three_plaquette}) {
    ModelSpec m = ModelSpec::build(kind);
    for (int rep = 0; rep < 100; ++rep) {
      std::vector<double> phi(m.num_phases()), theta(m.num_angles());
      for (double& v : phi) v = rng.uniform_angle();
      for (double& v : theta) v = rng.uniform_angle();
      auto sv = statevector_build(m, phi, theta);
      auto expect = statevector_expectations(sv, m);
      for (int k = 0; k < m.num_combos(); ++k) {
        double analytic =
            m.full_likelihood(k, +1, phi, theta) - m.full_likelihood(k, -1, phi, theta);
        max_dev = std::max(max_dev, std::abs(expect[k] - analytic));
      }
    }
  }
  report(7, max_dev <= 1e-10, "oracle equivalence max deviation = " + fmt(max_dev) +
                                  " (required <= 1e-10), " + fmt(elapsed_since(t0)) + " s");
}

void criterion8() {
  auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  double worst = 0.0;
  for (int k : {1, 2, 4}) {
    for (double sigma2 : {0.001, 0.01, 0.05, 0.1}) {
      for (double delta : {kPi / 6, kPi / 3, kPi / 2}) {
        const double mean = 0.3;
        PosteriorGrid1D g = make_gaussian_grid(8192, mean, sigma2);
        double numeric = variance_step_numeric(g, k, mean - delta);
        double analytic = variance_step_analytic(k, sigma2, mean, mean - delta).value;
        double rel = std::abs(analytic - numeric) / std::abs(numeric);
        worst = std::max(worst, rel);
        if (rel > 0.01) pass = false;
      }
    }
  }
  double ma = mean_alpha(2);
  double ma_target = (2.0 - std::sqrt(3.0)) / 2.0;
  if (std::abs(ma - ma_target) > 1e-6) pass = false;
  report(8, pass, "analytic vs numeric variance step worst rel dev = " + fmt(worst) +
                      " (required <= 0.01), mean_alpha(2) = " + fmt(ma) + " (required " +
                      fmt(ma_target) + " +- 1e-6), " + fmt(elapsed_since(t0)) + " s");
}

void criterion9() {
  auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::ostringstream detail;
  RngStream rng(kSeed + 9, 0);

  // likelihood complementarity, exact
  for (auto kind : {ModelKind::two_plaquette, ModelKind::three_plaquette}) {
    ModelSpec m = ModelSpec::build(kind);
    for (int rep = 0; rep < 50; ++rep) {
      std::vector<double> phi(m.num_phases()), theta(m.num_angles());
      for (double& v : phi) v = rng.uniform_angle();
      for (double& v : theta) v = rng.uniform_angle();
      for (int k = 0; k < m.num_combos(); ++k)
        if (m.full_likelihood(k, +1, phi, theta) + m.full_likelihood(k, -1, phi, theta) != 1.0)
          pass = false;
    }
  }
  detail << "complementarity " << (pass ? "ok" : "BROKEN");

  // posterior normalization after many updates
  {
    PosteriorGrid1D g(512);
    for (int i = 0; i < 200; ++i) g.update_cosine(2, rng.coin_sign(), rng.uniform_angle());
    bool ok = std::abs(g.mass() - 1.0) <= 1e-12;
    pass = pass && ok;
    detail << ", normalization " << (ok ? "ok" : "BROKEN");
  }

  // theta-tilde round trip
  {
    bool ok = true;
    for (auto kind : {ModelKind::two_plaquette, ModelKind::three_plaquette}) {
      ModelSpec m = ModelSpec::build(kind);
      for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> targets(m.num_combos());
        for (double& v : targets) v = rng.uniform_angle();
        auto theta = m.solve_angles(targets);
        for (int k = 0; k < m.num_combos(); ++k)
          if (std::abs(circ_diff(m.theta_tilde(k, theta), targets[k])) > 1e-10) ok = false;
      }
    }
    pass = pass && ok;
    detail << ", theta-tilde round trip " << (ok ? "ok" : "BROKEN");
  }

  // update order independence
  {
    PosteriorGrid1D a(512), b(512);
    std::vector<std::pair<int, double>> updates;
    for (int i = 0; i < 30; ++i) updates.emplace_back(rng.coin_sign(), rng.uniform_angle());
    for (const auto& [s, t] : updates) a.update_cosine(4, s, t);
    for (auto it = updates.rbegin(); it != updates.rend(); ++it)
      b.update_cosine(4, it->first, it->second);
    bool ok = true;
    for (int i = 0; i < a.bins(); ++i)
      if (std::abs(a.density_at(i) - b.density_at(i)) > 1e-12) ok = false;
    pass = pass && ok;
    detail << ", order independence " << (ok ? "ok" : "BROKEN");
  }

  // expected variance step never positive
  {
    bool ok = true;
    for (int k : {1, 2, 4})
      for (double sigma2 : {0.01, 0.2, 1.0})
        for (double delta : {0.0, 1.0, kPi / 2}) {
          PosteriorGrid1D g = make_gaussian_grid(2048, 0.5, sigma2);
          if (variance_step_numeric(g, k, 0.5 - delta) > 1e-12) ok = false;
        }
    pass = pass && ok;
    detail << ", non-positive variance step " << (ok ? "ok" : "BROKEN");
  }

  // byte-identical reruns under a fixed seed
  {
    ModelSpec m = ModelSpec::build(ModelKind::two_plaquette);
    BayesConfig cfg;
    cfg.grid_bins = 128;
    std::vector<long> budgets = {50, 100, 200, 400};
    auto c1 = monte_carlo_curve(marginal_estimator(m, cfg, budgets), budgets, 20, kSeed + 10);
    auto c2 = monte_carlo_curve(marginal_estimator(m, cfg, budgets), budgets, 20, kSeed + 10, 2);
    MetadataBlock meta = {{"check", "rerun"}};
    std::string p1 = "/tmp/phaseest_accept_rerun1.csv", p2 = "/tmp/phaseest_accept_rerun2.csv";
    write_curve_csv(p1, meta, c1);
    write_curve_csv(p2, meta, c2);
    auto slurp = [](const std::string& path) {
      std::string body;
      if (FILE* f = std::fopen(path.c_str(), "rb")) {
        char buf[4096];
        size_t n;
        while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) body.append(buf, n);
        std::fclose(f);
      }
      return body;
    };
    std::string b1 = slurp(p1), b2 = slurp(p2);
    bool ok = !b1.empty() && b1 == b2;
    pass = pass && ok;
    detail << ", byte-identical reruns " << (ok ? "ok" : "BROKEN");
  }

  detail << ", " << fmt(elapsed_since(t0)) << " s";
  report(9, pass, detail.str());
}

}  // namespace

int main() {
  criterion7();
  criterion8();
  criterion9();
  criterion1();
  criterion6();
  criterion3();
  criterion2();
  criterion5();
  criterion4();
  if (g_failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criterion(s) failed\n", g_failures);
  return 1;
}
