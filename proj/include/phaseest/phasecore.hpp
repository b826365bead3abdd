// phasecore.hpp — circular arithmetic and grid-based posterior distributions.
//
// Phases are doubles in radians, kept in [-pi, pi) by wrap(). Posteriors are
// midpoint-discretized densities, either over the circle (PosteriorGrid1D) or
// over (phase, offset) on [-pi, pi) x [-1, 1] (PosteriorGrid2D). Grids are
// plain values: all operations are pure functions of their inputs and grids
// can be copied and moved freely between threads.

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace phaseest {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Reduce an angle to [-pi, pi); pi maps to -pi. Throws std::invalid_argument
/// on non-finite input.
double wrap(double angle);

/// Signed shortest angular distance a - b, in [-pi, pi).
double circ_diff(double a, double b);

struct CircularMoments {
  double mean = 0.0;      // circular mean, in [-pi, pi)
  double variance = 0.0;  // second circular moment about the mean, rad^2
  bool diffuse = false;   // resultant length < 1e-12; mean tie-broken to 0
};

/// Posterior mass collapsed below representable range; signals contradictory
/// data or a likelihood bug.
class DegeneratePosteriorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Discretized probability density over the circle. Bin i is centered at
/// -pi + (i + 1/2) * spacing. Density is kept normalized: sum * spacing = 1.
class PosteriorGrid1D {
 public:
  /// Uniform density 1/(2 pi). Requires bins >= 8.
  explicit PosteriorGrid1D(int bins);

  int bins() const { return bins_; }
  double spacing() const { return spacing_; }
  double center(int i) const { return -kPi + (i + 0.5) * spacing_; }
  const std::vector<double>& density() const { return density_; }
  double density_at(int i) const { return density_[i]; }
  /// Direct write access; call normalize() afterwards.
  void set_density(int i, double v) { density_[i] = v; }

  double mass() const;
  void normalize();

  /// Bayes update: density_i <- density_i * likelihood(center_i), then
  /// renormalize. Likelihood values must lie in [0, 1].
  template <class F>
  void update(F&& likelihood) {
    for (int i = 0; i < bins_; ++i) density_[i] *= likelihood(center(i));
    renormalize_or_throw();
  }

  /// Fast path for the single-cosine likelihood (K + sign*cos(phi - ttilde))
  /// / (2K) shared by all marginal models.
  void update_cosine(int num_cosines, int sign, double ttilde);

  /// Circular mean only (cheaper than full moments; used by adaptive rules).
  double circular_mean() const;

  CircularMoments moments() const;

 private:
  void renormalize_or_throw();

  int bins_;
  double spacing_;
  std::vector<double> density_;
  std::vector<double> cos_, sin_;  // tables at bin centers
};

/// uniform_prior(bins) is the canonical uniform starting distribution.
inline PosteriorGrid1D uniform_prior(int bins) { return PosteriorGrid1D(bins); }

/// Joint density over (phase, offset) with phase periodic on [-pi, pi) and
/// offset non-periodic on [-1, 1]. Row-major: cell (i, j) = phase bin i,
/// offset bin j.
class PosteriorGrid2D {
 public:
  PosteriorGrid2D(int bins_phase, int bins_offset);

  int bins_phase() const { return bp_; }
  int bins_offset() const { return bo_; }
  double phase_center(int i) const { return -kPi + (i + 0.5) * dphi_; }
  double offset_center(int j) const { return -1.0 + (j + 0.5) * dh_; }
  double cell_area() const { return dphi_ * dh_; }
  const std::vector<double>& density() const { return density_; }

  double mass() const;

  template <class F>
  void update(F&& likelihood) {
    for (int i = 0; i < bp_; ++i) {
      double* row = &density_[static_cast<size_t>(i) * bo_];
      for (int j = 0; j < bo_; ++j) row[j] *= likelihood(phase_center(i), offset_center(j));
    }
    renormalize_or_throw();
  }

  /// Fast path for (K + sign*h + sign*cos(phi - ttilde)) / (2K).
  void update_cosine_offset(int num_cosines, int sign, double ttilde);

  /// Marginal density over the phase axis, as a normalized 1-D grid.
  PosteriorGrid1D phase_marginal() const;
  CircularMoments phase_moments() const;
  /// Circular mean of the phase marginal without building the 1-D grid.
  double phase_circular_mean() const;
  /// Mean and variance of the offset marginal (plain, non-circular).
  std::pair<double, double> offset_moments() const;

 private:
  void renormalize_or_throw();

  int bp_, bo_;
  double dphi_, dh_;
  std::vector<double> density_;
  std::vector<double> cos_, sin_;  // phase tables
};

}  // namespace phaseest
