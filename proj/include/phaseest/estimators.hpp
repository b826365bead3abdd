// estimators.hpp — the estimation protocols: Ramsey scan, PHOM (iterative and
// constant-cosine), direct constant-cosine Bayes, and marginal-likelihood
// Bayes with adaptive or random measurement selection.
//
// Every estimator consumes simulated measurements under a preparation budget
// and is a deterministic function of (config, truth, rng stream). Budgets are
// denominated in state preparations. For the scan-based (PHOM-family) methods
// each preparation is attributed to the single scanned combo; for marginal
// Bayes one preparation yields outcomes for all combos at once.

#pragma once

#include <optional>
#include <vector>

#include "phaseest/models.hpp"
#include "phaseest/simkernel.hpp"

namespace phaseest {

struct RamseyConfig {
  int scan_points = 10;     // M >= 4
  int shots_per_point = 50; // N >= 1
  bool noiseless = false;   // exact expectations instead of sampling (diagnostics)
};

enum class PhomVariant { plain, constant_cosine };

struct PhomConfig {
  int iterations = 1;       // forced to 1 for constant_cosine
  int scan_points = 10;     // M
  int shots_per_point = 100;
  std::vector<double> initial_angles;  // length 7; empty = all zero
  PhomVariant variant = PhomVariant::plain;
  bool noiseless = false;
  bool independent_sampling = false;
};

enum class Selection { adaptive, random_angles };

struct BayesConfig {
  int grid_bins = 2048;
  long budget = 500;           // preparations (per combo for the direct 2-D method)
  Selection selection = Selection::adaptive;
  long warmup = 20;            // random-angle preparations before adaptation engages
  int grid_bins_2d_phase = 512;
  int grid_bins_2d_offset = 256;
  bool independent_sampling = false;
  bool record_history = false;
};

/// One adaptive-selection event: posterior mean at selection time and the
/// theta-tilde target chosen from it.
struct SelectionStep {
  long step = 0;
  int phase = 0;
  double posterior_mean = 0.0;
  double ttilde_target = 0.0;
};

struct EstimateResult {
  std::vector<double> phases_est;
  std::vector<double> variances;  // posterior variances (empty for scan methods)
  long preparations_used = 0;
  bool diffuse = false;
  std::vector<MeasurementRecord> history;      // populated only on request
  std::vector<SelectionStep> selection_log;    // populated only on request
};

/// Estimates at intermediate budgets of a single sequential run.
struct CheckpointEstimate {
  long n = 0;
  std::vector<double> phases_est;
  std::vector<double> variances;
  bool diffuse = false;
};

// --- fitting helpers (shared by Ramsey and PHOM scans) ---

struct CosineFit {
  double offset = 0.0;
  double amp_cos = 0.0;  // coefficient of cos(f x)
  double amp_sin = 0.0;  // coefficient of sin(f x)
  double amplitude() const;
  /// Argument maximizing amp_cos*cos(f x) + amp_sin*sin(f x), i.e. the fitted
  /// phase A of r*cos(f x - A).
  double phase() const;
};

/// Least-squares fit of y ~ [offset +] amp_cos*cos(f x) + amp_sin*sin(f x).
CosineFit fit_cosine(const std::vector<double>& x, const std::vector<double>& y, double frequency,
                     bool with_offset);

// --- protocols ---

struct RamseyScanResult {
  std::vector<double> thetas, expectations, stderrs;
  EstimateResult estimate;
  double fitted_amplitude = 0.0;
};

RamseyScanResult ramsey_scan(double phi_true, const RamseyConfig& cfg, RngStream& rng);

/// Single-qubit adaptive Bayes; theta_0 = 0, afterwards theta = mean +- pi/2.
EstimateResult bayes_single_adaptive(double phi_true, const BayesConfig& cfg, RngStream& rng);
std::vector<CheckpointEstimate> bayes_single_adaptive_curve(double phi_true,
                                                            const BayesConfig& cfg,
                                                            const std::vector<long>& checkpoints,
                                                            RngStream& rng);

/// Iterative scan-and-maximize over stabilizer expectations; the
/// constant_cosine variant does one theta-tilde sweep per combo.
EstimateResult phom(const ModelSpec& model, const std::vector<double>& truth,
                    const PhomConfig& cfg, RngStream& rng);

/// Direct constant-cosine Bayes on (phase, offset) grids; two-plaquette only.
EstimateResult bayes_direct_cc(const ModelSpec& model, const std::vector<double>& truth,
                               const BayesConfig& cfg, RngStream& rng);
std::vector<CheckpointEstimate> bayes_direct_cc_curve(const ModelSpec& model,
                                                      const std::vector<double>& truth,
                                                      const BayesConfig& cfg,
                                                      const std::vector<long>& checkpoints,
                                                      RngStream& rng);

/// Marginal-likelihood Bayes: every preparation reads all combos jointly and
/// updates each phase's 1-D posterior with its single-cosine marginal.
EstimateResult bayes_marginal(const ModelSpec& model, const std::vector<double>& truth,
                              const BayesConfig& cfg, RngStream& rng);
std::vector<CheckpointEstimate> bayes_marginal_curve(const ModelSpec& model,
                                                     const std::vector<double>& truth,
                                                     const BayesConfig& cfg,
                                                     const std::vector<long>& checkpoints,
                                                     RngStream& rng);

}  // namespace phaseest
