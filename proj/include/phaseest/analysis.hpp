// analysis.hpp — alpha-factor formulas, expected one-step variance decrease
// (analytic closed form vs exact grid quadrature), Monte-Carlo variance
// estimation over trials, and c/n curve fitting.

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "phaseest/estimators.hpp"
#include "phaseest/phasecore.hpp"

namespace phaseest {

struct AlphaParams {
  int num_cosines = 1;   // K in {1, 2, 4}
  double sigma2 = 0.0;   // posterior variance
  double delta = 0.0;    // mean - ttilde
};

/// alpha = e^{-sigma^2} sin^2(delta) / (K^2 - e^{-sigma^2} cos^2(delta)).
double alpha_factor(const AlphaParams& p);

/// Quadrature average of alpha_factor over delta uniform on [-pi, pi), in the
/// sigma^2 -> 0 limit. Closed form: 1 - sqrt(K^2 - 1) / K.
double mean_alpha(int num_cosines);

struct VarianceStep {
  double value = 0.0;
  bool in_regime = true;  // false when sigma^2 exceeds the Gaussian-limit domain
};

/// Expected one-step variance change -alpha * sigma^4 in the Gaussian limit.
VarianceStep variance_step_analytic(int num_cosines, double sigma2, double mean, double ttilde);

/// Exact expected one-step variance change by grid quadrature,
/// p+ var+ + p- var- - var, for the single-cosine likelihood with amplitude
/// 1/K at angle ttilde. No Gaussian or infinite-interval approximation.
double variance_step_numeric(const PosteriorGrid1D& grid, int num_cosines, double ttilde);

/// Same quadrature for an arbitrary binary likelihood P(+|phi) = lik_plus(phi),
/// with P(-|phi) = 1 - lik_plus(phi).
double variance_step_numeric(const PosteriorGrid1D& grid,
                             const std::function<double(double)>& lik_plus);

/// Wrapped-Gaussian density on a fresh grid (quadrature/test helper).
PosteriorGrid1D make_gaussian_grid(int bins, double mean, double sigma2);

struct VarianceCurve {
  struct Sample {
    long n = 0;
    double sigma2 = 0.0;        // mean squared circular error over phases and trials
    double stderr_sigma2 = 0.0; // standard error of the mean over trials
    long trials = 0;
    long diffuse_count = 0;
    std::vector<double> sigma2_per_phase;
  };
  std::vector<Sample> samples;
  double fitted_c = 0.0;
  double fit_residual = 0.0;
};

/// Estimator hook for Monte-Carlo runs: given a hidden truth and a trial
/// stream, return estimates at each requested budget.
struct TrialEstimator {
  int num_phases = 1;
  std::function<std::vector<CheckpointEstimate>(const std::vector<double>& truth, RngStream& rng)>
      run;
};

/// Draws `trials` uniform truth vectors, runs the estimator per trial, and
/// returns the variance curve sigma^2(n) with a c/n fit. Trials are
/// distributed over `workers` threads; the reduction is per-trial
/// deterministic (independent of thread count).
VarianceCurve monte_carlo_curve(const TrialEstimator& estimator, const std::vector<long>& budgets,
                                int trials, std::uint64_t master_seed, int workers = 0);

/// Single-budget convenience wrapper.
VarianceCurve::Sample monte_carlo_variance(const TrialEstimator& estimator, long budget,
                                           int trials, std::uint64_t master_seed, int workers = 0);

/// Least-squares fit of sigma^2 = c/n through the origin (regression against
/// 1/n). Requires >= 4 samples with positive sigma^2.
double fit_inverse_n(const std::vector<VarianceCurve::Sample>& samples,
                     double* residual = nullptr);

}  // namespace phaseest
