#include "phaseest/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "phaseest/phasecore.hpp"

namespace phaseest {

namespace {

constexpr double kFlatAmplitude = 1e-9;

void check_checkpoints(const std::vector<long>& checkpoints) {
  if (checkpoints.empty()) throw std::invalid_argument("checkpoints must be non-empty");
  for (size_t i = 0; i + 1 < checkpoints.size(); ++i)
    if (checkpoints[i] >= checkpoints[i + 1])
      throw std::invalid_argument("checkpoints must be strictly increasing");
  if (checkpoints.front() < 1) throw std::invalid_argument("checkpoints must be >= 1");
}

std::vector<double> initial_angles_or_zero(const PhomConfig& cfg, int num_angles) {
  if (cfg.initial_angles.empty()) return std::vector<double>(num_angles, 0.0);
  if (static_cast<int>(cfg.initial_angles.size()) != num_angles)
    throw std::invalid_argument("initial_angles length mismatch");
  return cfg.initial_angles;
}

// Mean outcome of `shots` single-combo readouts at a fixed setting.
double scan_point_mean(const ModelSpec& model, const std::vector<double>& truth,
                       const std::vector<double>& theta, int combo, int shots, bool noiseless,
                       bool independent, RngStream& rng, long& preparations) {
  preparations += shots;
  if (noiseless) return 2.0 * model.full_likelihood(combo, +1, truth, theta) - 1.0;
  JointSampler sampler(model, truth, theta, independent);
  long sum = 0;
  for (int s = 0; s < shots; ++s) sum += sampler.sample_one(combo, rng);
  return static_cast<double>(sum) / shots;
}

}  // namespace

double CosineFit::amplitude() const { return std::hypot(amp_cos, amp_sin); }
double CosineFit::phase() const { return std::atan2(amp_sin, amp_cos); }

CosineFit fit_cosine(const std::vector<double>& x, const std::vector<double>& y, double frequency,
                     bool with_offset) {
  if (x.size() != y.size() || x.size() < (with_offset ? 3u : 2u))
    throw std::invalid_argument("fit_cosine: bad input sizes");
  const int n = with_offset ? 3 : 2;
  double a[3][3] = {};  // normal equations
  double rhs[3] = {};
  for (size_t m = 0; m < x.size(); ++m) {
    // with_offset: basis = {1, cos, sin}; otherwise {cos, sin}
    double c = std::cos(frequency * x[m]), s = std::sin(frequency * x[m]);
    double b[3] = {with_offset ? 1.0 : c, with_offset ? c : s, s};
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) a[i][j] += b[i] * b[j];
      rhs[i] += b[i] * y[m];
    }
  }
  // Gaussian elimination with partial pivoting
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    for (int j = 0; j < 3; ++j) std::swap(a[col][j], a[piv][j]);
    std::swap(rhs[col], rhs[piv]);
    if (std::abs(a[col][col]) < 1e-14) throw std::runtime_error("fit_cosine: singular design");
    for (int r = col + 1; r < n; ++r) {
      double f = a[r][col] / a[col][col];
      for (int j = col; j < n; ++j) a[r][j] -= f * a[col][j];
      rhs[r] -= f * rhs[col];
    }
  }
  double sol[3] = {};
  for (int r = n - 1; r >= 0; --r) {
    double s = rhs[r];
    for (int j = r + 1; j < n; ++j) s -= a[r][j] * sol[j];
    sol[r] = s / a[r][r];
  }
  CosineFit fit;
  if (with_offset) {
    fit.offset = sol[0];
    fit.amp_cos = sol[1];
    fit.amp_sin = sol[2];
  } else {
    fit.amp_cos = sol[0];
    fit.amp_sin = sol[1];
  }
  return fit;
}

RamseyScanResult ramsey_scan(double phi_true, const RamseyConfig& cfg, RngStream& rng) {
  if (cfg.scan_points < 4) throw std::invalid_argument("ramsey_scan: scan_points must be >= 4");
  if (cfg.shots_per_point < 1) throw std::invalid_argument("ramsey_scan: shots_per_point must be >= 1");
  RamseyScanResult r;
  const int m_points = cfg.scan_points, shots = cfg.shots_per_point;
  for (int m = 0; m < m_points; ++m) {
    double theta = m * kTwoPi / m_points - kPi;
    double mean;
    if (cfg.noiseless) {
      mean = std::cos(phi_true - theta);
    } else {
      long sum = 0;
      for (int s = 0; s < shots; ++s) sum += sample_single_qubit(phi_true, theta, rng);
      mean = static_cast<double>(sum) / shots;
    }
    r.thetas.push_back(theta);
    r.expectations.push_back(mean);
    r.stderrs.push_back(std::sqrt(std::max(0.0, 1.0 - mean * mean) / shots));
  }
  CosineFit fit = fit_cosine(r.thetas, r.expectations, 1.0, /*with_offset=*/false);
  r.fitted_amplitude = fit.amplitude();
  r.estimate.preparations_used = static_cast<long>(m_points) * shots;
  if (r.fitted_amplitude < kFlatAmplitude) {
    r.estimate.diffuse = true;
    r.estimate.phases_est = {0.0};
  } else {
    r.estimate.phases_est = {wrap(fit.phase())};
  }
  return r;
}

std::vector<CheckpointEstimate> bayes_single_adaptive_curve(double phi_true,
                                                            const BayesConfig& cfg,
                                                            const std::vector<long>& checkpoints,
                                                            RngStream& rng) {
  check_checkpoints(checkpoints);
  PosteriorGrid1D grid(cfg.grid_bins);
  std::vector<CheckpointEstimate> out;
  double theta = 0.0;
  size_t next_cp = 0;
  const long budget = checkpoints.back();
  for (long n = 1; n <= budget; ++n) {
    int outcome = sample_single_qubit(phi_true, theta, rng);
    grid.update_cosine(1, outcome, theta);
    theta = wrap(grid.circular_mean() + rng.coin_sign() * kPi / 2.0);
    if (n == checkpoints[next_cp]) {
      CircularMoments m = grid.moments();
      out.push_back({n, {m.mean}, {m.variance}, m.diffuse});
      ++next_cp;
    }
  }
  return out;
}

EstimateResult bayes_single_adaptive(double phi_true, const BayesConfig& cfg, RngStream& rng) {
  auto curve = bayes_single_adaptive_curve(phi_true, cfg, {cfg.budget}, rng);
  EstimateResult r;
  r.phases_est = curve.back().phases_est;
  r.variances = curve.back().variances;
  r.diffuse = curve.back().diffuse;
  r.preparations_used = cfg.budget;
  return r;
}

EstimateResult phom(const ModelSpec& model, const std::vector<double>& truth,
                    const PhomConfig& cfg, RngStream& rng) {
  if (model.kind() == ModelKind::single_qubit)
    throw std::invalid_argument("phom: plaquette models only");
  if (cfg.scan_points < 4) throw std::invalid_argument("phom: scan_points must be >= 4");
  const bool cc = cfg.variant == PhomVariant::constant_cosine;
  const int iterations = cc ? 1 : std::max(1, cfg.iterations);
  const int m_points = cfg.scan_points;

  std::vector<double> angles = initial_angles_or_zero(cfg, model.num_angles());
  EstimateResult result;
  result.phases_est.assign(model.num_phases(), 0.0);

  if (!cc) {
    for (int it = 0; it < iterations; ++it) {
      for (int k = 0; k < model.num_combos(); ++k) {
        const int q = model.combo(k).designated_angle - 1;
        const double pre_scan_angle = angles[q];
        std::vector<double> xs, ys;
        for (int m = 0; m < m_points; ++m) {
          double theta_q = m * kTwoPi / m_points - kPi;
          angles[q] = theta_q;
          xs.push_back(theta_q);
          ys.push_back(scan_point_mean(model, truth, angles, k, cfg.shots_per_point,
                                       cfg.noiseless, cfg.independent_sampling, rng,
                                       result.preparations_used));
        }
        // the scanned angle enters every cosine with coefficient +-2
        CosineFit fit = fit_cosine(xs, ys, 2.0, /*with_offset=*/true);
        if (fit.amplitude() < kFlatAmplitude) {
          angles[q] = pre_scan_angle;  // flat scan: keep the pre-scan value
          result.diffuse = true;
        } else {
          angles[q] = wrap(fit.phase() / 2.0);
        }
      }
    }
    for (int k = 0; k < model.num_combos(); ++k)
      result.phases_est[model.combo(k).target_phase] = model.theta_tilde(k, angles);
    return result;
  }

  // Constant-cosine variant: one sweep per combo. Shifting all four support
  // angles by a common delta moves theta-tilde by -8*delta while every cross
  // cosine argument (balanced signs over the support) stays fixed.
  for (int k = 0; k < model.num_combos(); ++k) {
    const ComboSpec& combo = model.combo(k);
    double ttilde0 = 0.0;
    for (int q = 0; q < model.num_angles(); ++q) ttilde0 += combo.ttilde_row[q] * angles[q];
    std::vector<double> xs, ys;
    for (int m = 0; m < m_points; ++m) {
      double delta = m * (kTwoPi / 8.0) / m_points;
      std::vector<double> theta = angles;
      for (int q : combo.support) theta[q - 1] += delta;
      xs.push_back(ttilde0 - 8.0 * delta);
      ys.push_back(scan_point_mean(model, truth, theta, k, cfg.shots_per_point, cfg.noiseless,
                                   cfg.independent_sampling, rng, result.preparations_used));
    }
    CosineFit fit = fit_cosine(xs, ys, 1.0, /*with_offset=*/true);
    if (fit.amplitude() < kFlatAmplitude) {
      result.diffuse = true;
      result.phases_est[combo.target_phase] = 0.0;
    } else {
      result.phases_est[combo.target_phase] = wrap(fit.phase());
    }
  }
  return result;
}

std::vector<CheckpointEstimate> bayes_direct_cc_curve(const ModelSpec& model,
                                                      const std::vector<double>& truth,
                                                      const BayesConfig& cfg,
                                                      const std::vector<long>& checkpoints,
                                                      RngStream& rng) {
  if (model.kind() != ModelKind::two_plaquette)
    throw std::invalid_argument("bayes_direct_cc: two_plaquette only");
  check_checkpoints(checkpoints);
  const long budget = checkpoints.back();
  std::vector<CheckpointEstimate> out(checkpoints.size());
  for (size_t c = 0; c < checkpoints.size(); ++c) {
    out[c].n = checkpoints[c];
    out[c].phases_est.assign(model.num_phases(), 0.0);
    out[c].variances.assign(model.num_phases(), 0.0);
  }
  const std::vector<double> base(model.num_angles(), 0.0);
  for (int k = 0; k < model.num_combos(); ++k) {
    const ComboSpec& combo = model.combo(k);
    const int num_cos = combo.full.num_cosines;
    PosteriorGrid2D grid(cfg.grid_bins_2d_phase, cfg.grid_bins_2d_offset);
    size_t next_cp = 0;
    for (long n = 1; n <= budget; ++n) {
      double target;
      if (n <= cfg.warmup || cfg.selection == Selection::random_angles) {
        target = rng.uniform_angle();
      } else {
        target = wrap(grid.phase_circular_mean() + rng.coin_sign() * kPi / 2.0);
      }
      // common shift on the support sweeps theta-tilde at rate -8
      double delta = -target / 8.0;
      std::vector<double> theta = base;
      for (int q : combo.support) theta[q - 1] += delta;
      JointSampler sampler(model, truth, theta, cfg.independent_sampling);
      int outcome = sampler.sample_one(k, rng);
      grid.update_cosine_offset(num_cos, outcome, target);
      if (n == checkpoints[next_cp]) {
        CircularMoments m = grid.phase_moments();
        out[next_cp].phases_est[combo.target_phase] = m.mean;
        out[next_cp].variances[combo.target_phase] = m.variance;
        out[next_cp].diffuse = out[next_cp].diffuse || m.diffuse;
        ++next_cp;
      }
    }
  }
  return out;
}

EstimateResult bayes_direct_cc(const ModelSpec& model, const std::vector<double>& truth,
                               const BayesConfig& cfg, RngStream& rng) {
  auto curve = bayes_direct_cc_curve(model, truth, cfg, {cfg.budget}, rng);
  EstimateResult r;
  r.phases_est = curve.back().phases_est;
  r.variances = curve.back().variances;
  r.diffuse = curve.back().diffuse;
  r.preparations_used = cfg.budget * model.num_combos();
  return r;
}

std::vector<CheckpointEstimate> bayes_marginal_curve(const ModelSpec& model,
                                                     const std::vector<double>& truth,
                                                     const BayesConfig& cfg,
                                                     const std::vector<long>& checkpoints,
                                                     RngStream& rng) {
  if (model.kind() == ModelKind::single_qubit)
    throw std::invalid_argument("bayes_marginal: plaquette models only");
  check_checkpoints(checkpoints);
  const long budget = checkpoints.back();
  const int num_combos = model.num_combos();
  std::vector<PosteriorGrid1D> grids(model.num_phases(), PosteriorGrid1D(cfg.grid_bins));
  std::vector<int> all_combos(num_combos);
  for (int k = 0; k < num_combos; ++k) all_combos[k] = k;
  std::vector<double> targets(num_combos, 0.0);
  std::vector<CheckpointEstimate> out;
  size_t next_cp = 0;
  for (long n = 1; n <= budget; ++n) {
    for (int k = 0; k < num_combos; ++k) {
      int phase = model.combo(k).target_phase;
      if (n <= cfg.warmup || cfg.selection == Selection::random_angles) {
        targets[k] = rng.uniform_angle();
      } else {
        targets[k] = wrap(grids[phase].circular_mean() + rng.coin_sign() * kPi / 2.0);
      }
    }
    std::vector<double> theta = model.solve_angles(targets);
    JointSampler sampler(model, truth, theta, cfg.independent_sampling);
    std::vector<int> outcomes = sampler.sample(all_combos, rng);
    for (int k = 0; k < num_combos; ++k) {
      int phase = model.combo(k).target_phase;
      double ttilde = model.theta_tilde(k, theta);
      grids[phase].update_cosine(model.combo(k).full.num_cosines, outcomes[k], ttilde);
    }
    if (next_cp < checkpoints.size() && n == checkpoints[next_cp]) {
      CheckpointEstimate cp;
      cp.n = n;
      for (auto& g : grids) {
        CircularMoments m = g.moments();
        cp.phases_est.push_back(m.mean);
        cp.variances.push_back(m.variance);
        cp.diffuse = cp.diffuse || m.diffuse;
      }
      out.push_back(std::move(cp));
      ++next_cp;
    }
  }
  return out;
}

EstimateResult bayes_marginal(const ModelSpec& model, const std::vector<double>& truth,
                              const BayesConfig& cfg, RngStream& rng) {
  // re-run with instrumentation when history is requested
  if (!cfg.record_history) {
    auto curve = bayes_marginal_curve(model, truth, cfg, {cfg.budget}, rng);
    EstimateResult r;
    r.phases_est = curve.back().phases_est;
    r.variances = curve.back().variances;
    r.diffuse = curve.back().diffuse;
    r.preparations_used = cfg.budget;
    return r;
  }
  EstimateResult r;
  const int num_combos = model.num_combos();
  std::vector<PosteriorGrid1D> grids(model.num_phases(), PosteriorGrid1D(cfg.grid_bins));
  std::vector<int> all_combos(num_combos);
  for (int k = 0; k < num_combos; ++k) all_combos[k] = k;
  PreparationCounter counter;
  for (long n = 1; n <= cfg.budget; ++n) {
    std::vector<double> targets(num_combos, 0.0);
    for (int k = 0; k < num_combos; ++k) {
      int phase = model.combo(k).target_phase;
      if (n <= cfg.warmup || cfg.selection == Selection::random_angles) {
        targets[k] = rng.uniform_angle();
      } else {
        double mean = grids[phase].circular_mean();
        targets[k] = wrap(mean + rng.coin_sign() * kPi / 2.0);
        r.selection_log.push_back({n, phase, mean, targets[k]});
      }
    }
    std::vector<double> theta = model.solve_angles(targets);
    auto records = prepare_and_measure(model, truth, theta, all_combos, rng, counter,
                                       cfg.independent_sampling);
    for (int k = 0; k < num_combos; ++k) {
      int phase = model.combo(k).target_phase;
      grids[phase].update_cosine(model.combo(k).full.num_cosines, records[k].outcome,
                                 model.theta_tilde(k, theta));
    }
    r.history.insert(r.history.end(), records.begin(), records.end());
  }
  for (auto& g : grids) {
    CircularMoments m = g.moments();
    r.phases_est.push_back(m.mean);
    r.variances.push_back(m.variance);
    r.diffuse = r.diffuse || m.diffuse;
  }
  r.preparations_used = counter.count;
  return r;
}

}  // namespace phaseest
