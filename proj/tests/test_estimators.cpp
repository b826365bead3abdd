#include "doctest.h"

#include <cmath>
#include <vector>

#include "phaseest/estimators.hpp"
#include "phaseest/models.hpp"
#include "phaseest/phasecore.hpp"

using namespace phaseest;

TEST_CASE("fit_cosine recovers exact cosines") {
  std::vector<double> xs, ys;
  for (int m = 0; m < 10; ++m) {
    double x = m * kTwoPi / 10.0 - kPi;
    xs.push_back(x);
    ys.push_back(std::cos(x - 1.0));
  }
  CosineFit fit = fit_cosine(xs, ys, 1.0, /*with_offset=*/false);
  CHECK(fit.amplitude() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.phase() == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<double> ys2;
  for (double x : xs) ys2.push_back(0.25 + 0.5 * std::cos(2.0 * (x + 0.4)));
  CosineFit fit2 = fit_cosine(xs, ys2, 2.0, /*with_offset=*/true);
  CHECK(fit2.offset == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(fit2.amplitude() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(wrap(fit2.phase() / 2.0) == doctest::Approx(-0.4).epsilon(1e-10));

  CHECK_THROWS_AS(fit_cosine({0.0, 1.0}, {0.0, 1.0}, 1.0, true), std::invalid_argument);
}

TEST_CASE("noiseless ramsey scan is exact") {
  RngStream rng(1, 0);
  RamseyConfig cfg;
  cfg.noiseless = true;
  for (double phi : {-2.5, -0.3, 0.0, 1.0, 3.0}) {
    auto r = ramsey_scan(phi, cfg, rng);
    CHECK(r.estimate.phases_est[0] == doctest::Approx(phi).epsilon(1e-12));
    CHECK(r.fitted_amplitude == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.estimate.preparations_used == 10 * 50);
    CHECK(r.thetas.size() == 10);
  }
}

TEST_CASE("sampled ramsey scan lands near the truth") {
  RngStream rng(3, 0);
  RamseyConfig cfg;
  cfg.scan_points = 10;
  cfg.shots_per_point = 100;
  auto r = ramsey_scan(1.0, cfg, rng);
  // sd of the phase estimate ~ sqrt(2 / (M * N)) = 0.045
  CHECK(std::abs(circ_diff(r.estimate.phases_est[0], 1.0)) < 0.2);
  CHECK(!r.estimate.diffuse);
}

TEST_CASE("single-qubit adaptive bayes converges and checkpoints are consistent") {
  BayesConfig cfg;
  cfg.grid_bins = 512;
  RngStream rng(11, 0);
  auto curve = bayes_single_adaptive_curve(2.0, cfg, {100, 250, 500}, rng);
  REQUIRE(curve.size() == 3);
  CHECK(curve[0].n == 100);
  CHECK(curve[2].n == 500);
  CHECK(std::abs(circ_diff(curve[2].phases_est[0], 2.0)) < 0.2);
  CHECK(curve[2].variances[0] < curve[0].variances[0]);
  CHECK(curve[2].variances[0] < 0.05);

  // a prefix run with the same stream reproduces the shared checkpoints
  RngStream rng2(11, 0);
  auto prefix = bayes_single_adaptive_curve(2.0, cfg, {100, 250}, rng2);
  CHECK(prefix[0].phases_est[0] == curve[0].phases_est[0]);
  CHECK(prefix[1].phases_est[0] == curve[1].phases_est[0]);

  CHECK_THROWS_AS(bayes_single_adaptive_curve(0.0, cfg, {}, rng), std::invalid_argument);
  CHECK_THROWS_AS(bayes_single_adaptive_curve(0.0, cfg, {10, 10}, rng), std::invalid_argument);
}

TEST_CASE("noiseless plain phom converges to the truth") {
  for (auto kind : {ModelKind::two_plaquette, ModelKind::three_plaquette}) {
    ModelSpec m = ModelSpec::build(kind);
    std::vector<double> truth(m.num_phases());
    for (int p = 0; p < m.num_phases(); ++p) truth[p] = 0.3 * (p + 1) - 1.0;
    PhomConfig cfg;
    cfg.noiseless = true;
    cfg.iterations = 6;
    RngStream rng(2, 0);
    auto r = phom(m, truth, cfg, rng);
    for (int p = 0; p < m.num_phases(); ++p)
      CHECK(std::abs(circ_diff(r.phases_est[p], truth[p])) < 1e-6);
    CHECK(r.preparations_used ==
          static_cast<long>(m.num_combos()) * cfg.scan_points * cfg.shots_per_point * 6);
  }
}

TEST_CASE("noiseless constant-cosine phom is exact in one sweep") {
  for (auto kind : {ModelKind::two_plaquette, ModelKind::three_plaquette}) {
    ModelSpec m = ModelSpec::build(kind);
    std::vector<double> truth(m.num_phases());
    for (int p = 0; p < m.num_phases(); ++p) truth[p] = wrap(0.7 * (p + 1));
    PhomConfig cfg;
    cfg.noiseless = true;
    cfg.variant = PhomVariant::constant_cosine;
    RngStream rng(2, 0);
    auto r = phom(m, truth, cfg, rng);
    for (int p = 0; p < m.num_phases(); ++p)
      CHECK(std::abs(circ_diff(r.phases_est[p], truth[p])) < 1e-9);
    CHECK(r.preparations_used ==
          static_cast<long>(m.num_combos()) * cfg.scan_points * cfg.shots_per_point);
  }
}

TEST_CASE("constant-cosine shift freezes every cross cosine") {
  // A common shift on the support must cancel in all non-target terms, so the
  // support coefficients of each cross term have to sum to zero.
  for (auto kind : {ModelKind::two_plaquette, ModelKind::three_plaquette}) {
    ModelSpec m = ModelSpec::build(kind);
    for (int k = 0; k < m.num_combos(); ++k) {
      const ComboSpec& combo = m.combo(k);
      for (size_t t = 1; t < combo.full.terms.size(); ++t) {
        int sum = 0;
        for (int q : combo.support) sum += combo.full.terms[t].b[q - 1];
        CHECK(sum == 0);
      }
      // while the target term moves at rate 8
      int target_sum = 0;
      for (int q : combo.support) target_sum += combo.full.terms[0].b[q - 1];
      CHECK(target_sum == 8);
    }
  }
}

TEST_CASE("marginal bayes: checkpoints, budget accounting and adaptive targets") {
  ModelSpec m = ModelSpec::build(ModelKind::two_plaquette);
  std::vector<double> truth = {1.2, -0.4, 2.1};
  BayesConfig cfg;
  cfg.grid_bins = 256;
  cfg.budget = 400;
  cfg.record_history = true;
  RngStream rng(21, 0);
  auto r = bayes_marginal(m, truth, cfg, rng);
  CHECK(r.preparations_used == 400);
  CHECK(r.history.size() == 400u * 3u);
  CHECK(r.selection_log.size() == (400u - cfg.warmup) * 3u);
  for (const auto& s : r.selection_log)
    CHECK(std::abs(std::abs(circ_diff(s.ttilde_target, s.posterior_mean)) - kPi / 2.0) < 1e-12);
  for (int p = 0; p < 3; ++p) CHECK(std::abs(circ_diff(r.phases_est[p], truth[p])) < 0.5);

  // the curve variant agrees with the plain run at the final budget
  RngStream rng2(21, 0);
  cfg.record_history = false;
  auto curve = bayes_marginal_curve(m, truth, cfg, {100, 400}, rng2);
  REQUIRE(curve.size() == 2);
  for (int p = 0; p < 3; ++p)
    CHECK(curve[1].phases_est[p] == doctest::Approx(r.phases_est[p]).epsilon(1e-12));
}

TEST_CASE("marginal bayes posterior calibration") {
  // with a correctly specified pipeline the truth should fall within
  // 3 posterior standard deviations in the vast majority of trials
  ModelSpec m = ModelSpec::build(ModelKind::two_plaquette);
  BayesConfig cfg;
  cfg.grid_bins = 256;
  cfg.budget = 500;
  int covered = 0, total = 0;
  for (int trial = 0; trial < 100; ++trial) {
    RngStream rng(99, trial);
    std::vector<double> truth(3);
    for (double& t : truth) t = rng.uniform_angle();
    auto curve = bayes_marginal_curve(m, truth, cfg, {500}, rng);
    for (int p = 0; p < 3; ++p) {
      ++total;
      double err = std::abs(circ_diff(curve[0].phases_est[p], truth[p]));
      if (err <= 3.0 * std::sqrt(curve[0].variances[p])) ++covered;
    }
  }
  CHECK(static_cast<double>(covered) / total >= 0.93);
}

TEST_CASE("direct constant-cosine bayes converges on the two-plaquette state") {
  ModelSpec m = ModelSpec::build(ModelKind::two_plaquette);
  std::vector<double> truth = {0.9, -1.5, 0.2};
  BayesConfig cfg;
  cfg.grid_bins_2d_phase = 128;
  cfg.grid_bins_2d_offset = 32;
  RngStream rng(31, 0);
  auto curve = bayes_direct_cc_curve(m, truth, cfg, {200, 800}, rng);
  REQUIRE(curve.size() == 2);
  for (int p = 0; p < 3; ++p) {
    CHECK(std::abs(circ_diff(curve[1].phases_est[p], truth[p])) < 0.3);
    CHECK(curve[1].variances[p] < curve[0].variances[p] + 1e-12);
  }
  ModelSpec three = ModelSpec::build(ModelKind::three_plaquette);
  CHECK_THROWS_AS(bayes_direct_cc_curve(three, std::vector<double>(7, 0.0), cfg, {10}, rng),
                  std::invalid_argument);
}

TEST_CASE("estimators are deterministic under a fixed seed") {
  ModelSpec m = ModelSpec::build(ModelKind::three_plaquette);
  std::vector<double> truth(7);
  for (int p = 0; p < 7; ++p) truth[p] = wrap(1.1 * p - 2.0);
  BayesConfig cfg;
  cfg.grid_bins = 256;
  cfg.budget = 200;
  RngStream r1(55, 4), r2(55, 4);
  auto a = bayes_marginal(m, truth, cfg, r1);
  auto b = bayes_marginal(m, truth, cfg, r2);
  CHECK(a.phases_est == b.phases_est);
  CHECK(a.variances == b.variances);

  PhomConfig pcfg;
  pcfg.shots_per_point = 20;
  RngStream r3(56, 0), r4(56, 0);
  auto c = phom(m, truth, pcfg, r3);
  auto d = phom(m, truth, pcfg, r4);
  CHECK(c.phases_est == d.phases_est);
}
