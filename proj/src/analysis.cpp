#include "phaseest/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace phaseest {

namespace {

void check_k(int k) {
  if (k != 1 && k != 2 && k != 4) throw std::invalid_argument("K must be 1, 2 or 4");
}

}  // namespace

double alpha_factor(const AlphaParams& p) {
  check_k(p.num_cosines);
  if (p.sigma2 < 0.0) throw std::invalid_argument("alpha_factor: negative variance");
  double e = std::exp(-p.sigma2);
  double s = std::sin(p.delta), c = std::cos(p.delta);
  double k2 = static_cast<double>(p.num_cosines) * p.num_cosines;
  return e * s * s / (k2 - e * c * c);
}

double mean_alpha(int num_cosines) {
  check_k(num_cosines);
  // midpoint rule over one period; the integrand is smooth and periodic
  const int points = 1 << 16;
  double sum = 0.0;
  for (int i = 0; i < points; ++i) {
    double delta = -kPi + (i + 0.5) * kTwoPi / points;
    sum += alpha_factor({num_cosines, 0.0, delta});
  }
  return sum / points;
}

VarianceStep variance_step_analytic(int num_cosines, double sigma2, double mean, double ttilde) {
  VarianceStep out;
  out.value = -alpha_factor({num_cosines, sigma2, circ_diff(mean, ttilde)}) * sigma2 * sigma2;
  out.in_regime = sigma2 <= 0.5;
  return out;
}

double variance_step_numeric(const PosteriorGrid1D& grid,
                             const std::function<double(double)>& lik_plus) {
  const double sigma2 = grid.moments().variance;
  double total = 0.0;
  for (int sign : {+1, -1}) {
    PosteriorGrid1D post = grid;
    // unnormalized posterior mass = outcome probability
    double p = 0.0;
    for (int i = 0; i < post.bins(); ++i) {
      double lp = lik_plus(post.center(i));
      double lik = sign > 0 ? lp : 1.0 - lp;
      post.set_density(i, post.density_at(i) * lik);
      p += post.density_at(i);
    }
    p *= post.spacing();
    if (p <= 0.0) continue;
    post.normalize();
    total += p * post.moments().variance;
  }
  return total - sigma2;
}

double variance_step_numeric(const PosteriorGrid1D& grid, int num_cosines, double ttilde) {
  check_k(num_cosines);
  const double k = num_cosines;
  return variance_step_numeric(
      grid, [&](double phi) { return (k + std::cos(phi - ttilde)) / (2.0 * k); });
}

PosteriorGrid1D make_gaussian_grid(int bins, double mean, double sigma2) {
  if (sigma2 <= 0.0) throw std::invalid_argument("make_gaussian_grid: sigma2 must be positive");
  PosteriorGrid1D g(bins);
  double inv2s = 1.0 / (2.0 * sigma2);
  for (int i = 0; i < bins; ++i) {
    double d = circ_diff(g.center(i), mean);
    double v = 0.0;
    for (int kwrap = -2; kwrap <= 2; ++kwrap) {
      double x = d + kwrap * kTwoPi;
      v += std::exp(-x * x * inv2s);
    }
    g.set_density(i, v);
  }
  g.normalize();
  return g;
}

VarianceCurve monte_carlo_curve(const TrialEstimator& estimator, const std::vector<long>& budgets,
                                int trials, std::uint64_t master_seed, int workers) {
  if (trials < 1) throw std::invalid_argument("monte_carlo_curve: trials must be >= 1");
  if (budgets.empty()) throw std::invalid_argument("monte_carlo_curve: no budgets");
  const int phases = estimator.num_phases;
  const size_t nb = budgets.size();

  // per-trial squared circular errors, [trial][budget][phase]
  std::vector<std::vector<std::vector<double>>> errors(
      trials, std::vector<std::vector<double>>(nb, std::vector<double>(phases, 0.0)));
  std::vector<char> diffuse(static_cast<size_t>(trials) * nb, 0);

  auto run_range = [&](int lo, int hi) {
    for (int t = lo; t < hi; ++t) {
      RngStream rng = spawn_rng(master_seed, static_cast<std::uint64_t>(t));
      std::vector<double> truth(phases);
      for (double& p : truth) p = rng.uniform_angle();
      auto estimates = estimator.run(truth, rng);
      if (estimates.size() != nb) throw std::runtime_error("estimator returned wrong checkpoint count");
      for (size_t b = 0; b < nb; ++b) {
        for (int p = 0; p < phases; ++p) {
          double e = circ_diff(estimates[b].phases_est[p], truth[p]);
          errors[t][b][p] = e * e;
        }
        if (estimates[b].diffuse) diffuse[static_cast<size_t>(t) * nb + b] = 1;
      }
    }
  };

  int hw = static_cast<int>(std::thread::hardware_concurrency());
  int nthreads = workers > 0 ? workers : std::max(1, hw);
  nthreads = std::min(nthreads, trials);
  if (nthreads <= 1) {
    run_range(0, trials);
  } else {
    std::vector<std::thread> pool;
    int chunk = (trials + nthreads - 1) / nthreads;
    for (int w = 0; w < nthreads; ++w) {
      int lo = w * chunk, hi = std::min(trials, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(run_range, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  // sequential reduction in trial order: independent of thread count
  VarianceCurve curve;
  for (size_t b = 0; b < nb; ++b) {
    VarianceCurve::Sample s;
    s.n = budgets[b];
    s.trials = trials;
    s.sigma2_per_phase.assign(phases, 0.0);
    double sum = 0.0, sumsq = 0.0;
    for (int t = 0; t < trials; ++t) {
      double trial_mean = 0.0;
      for (int p = 0; p < phases; ++p) {
        trial_mean += errors[t][b][p];
        s.sigma2_per_phase[p] += errors[t][b][p];
      }
      trial_mean /= phases;
      sum += trial_mean;
      sumsq += trial_mean * trial_mean;
      s.diffuse_count += diffuse[static_cast<size_t>(t) * nb + b];
    }
    for (double& v : s.sigma2_per_phase) v /= trials;
    s.sigma2 = sum / trials;
    double var = std::max(0.0, sumsq / trials - s.sigma2 * s.sigma2);
    s.stderr_sigma2 = std::sqrt(var / trials);
    curve.samples.push_back(std::move(s));
  }
  if (curve.samples.size() >= 4) curve.fitted_c = fit_inverse_n(curve.samples, &curve.fit_residual);
  return curve;
}

VarianceCurve::Sample monte_carlo_variance(const TrialEstimator& estimator, long budget,
                                           int trials, std::uint64_t master_seed, int workers) {
  return monte_carlo_curve(estimator, {budget}, trials, master_seed, workers).samples.front();
}

double fit_inverse_n(const std::vector<VarianceCurve::Sample>& samples, double* residual) {
  if (samples.size() < 4) throw std::invalid_argument("fit_inverse_n: need >= 4 samples");
  double num = 0.0, den = 0.0;
  for (const auto& s : samples) {
    if (s.n <= 0 || s.sigma2 <= 0.0)
      throw std::invalid_argument("fit_inverse_n: samples must be positive");
    double x = 1.0 / s.n;
    num += x * s.sigma2;
    den += x * x;
  }
  double c = num / den;
  if (residual) {
    double ss = 0.0;
    for (const auto& s : samples) {
      double r = s.sigma2 - c / s.n;
      ss += r * r;
    }
    *residual = std::sqrt(ss / samples.size());
  }
  return c;
}

}  // namespace phaseest
