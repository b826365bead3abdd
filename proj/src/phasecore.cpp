#include "phaseest/phasecore.hpp"

#include <algorithm>

namespace phaseest {

double wrap(double angle) {
  if (!std::isfinite(angle)) throw std::invalid_argument("wrap: non-finite angle");
  double a = std::fmod(angle + kPi, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a - kPi;
}

double circ_diff(double a, double b) { return wrap(a - b); }

PosteriorGrid1D::PosteriorGrid1D(int bins) : bins_(bins) {
  if (bins < 8) throw std::invalid_argument("PosteriorGrid1D: bins must be >= 8");
  spacing_ = kTwoPi / bins_;
  density_.assign(bins_, 1.0 / kTwoPi);
  cos_.resize(bins_);
  sin_.resize(bins_);
  for (int i = 0; i < bins_; ++i) {
    cos_[i] = std::cos(center(i));
    sin_[i] = std::sin(center(i));
  }
}

double PosteriorGrid1D::mass() const {
  double s = 0.0;
  for (double d : density_) s += d;
  return s * spacing_;
}

void PosteriorGrid1D::normalize() { renormalize_or_throw(); }

void PosteriorGrid1D::renormalize_or_throw() {
  double m = mass();
  if (!(m > 1e-300)) throw DegeneratePosteriorError("posterior mass collapsed");
  double inv = 1.0 / m;
  for (double& d : density_) d *= inv;
}

void PosteriorGrid1D::update_cosine(int num_cosines, int sign, double ttilde) {
  const double ct = std::cos(ttilde), st = std::sin(ttilde);
  const double k = static_cast<double>(num_cosines);
  const double s = static_cast<double>(sign);
  const double inv2k = 1.0 / (2.0 * k);
  double m = 0.0;
  for (int i = 0; i < bins_; ++i) {
    // cos(phi_i - ttilde) expanded via the tables
    double lik = (k + s * (cos_[i] * ct + sin_[i] * st)) * inv2k;
    density_[i] *= lik;
    m += density_[i];
  }
  m *= spacing_;
  if (!(m > 1e-300)) throw DegeneratePosteriorError("posterior mass collapsed");
  double inv = 1.0 / m;
  for (double& d : density_) d *= inv;
}

double PosteriorGrid1D::circular_mean() const {
  double c = 0.0, s = 0.0;
  for (int i = 0; i < bins_; ++i) {
    c += density_[i] * cos_[i];
    s += density_[i] * sin_[i];
  }
  if (std::hypot(c, s) * spacing_ < 1e-12) return 0.0;
  return std::atan2(s, c);
}

CircularMoments PosteriorGrid1D::moments() const {
  double c = 0.0, s = 0.0;
  for (int i = 0; i < bins_; ++i) {
    c += density_[i] * cos_[i];
    s += density_[i] * sin_[i];
  }
  CircularMoments m;
  double resultant = std::hypot(c, s) * spacing_;
  if (resultant < 1e-12) {
    m.mean = 0.0;
    m.diffuse = true;
  } else {
    m.mean = std::atan2(s, c);
  }
  double var = 0.0;
  for (int i = 0; i < bins_; ++i) {
    double d = center(i) - m.mean;
    if (d >= kPi) d -= kTwoPi;
    if (d < -kPi) d += kTwoPi;
    var += density_[i] * d * d;
  }
  m.variance = var * spacing_;
  return m;
}

PosteriorGrid2D::PosteriorGrid2D(int bins_phase, int bins_offset)
    : bp_(bins_phase), bo_(bins_offset) {
  if (bins_phase < 8 || bins_offset < 2)
    throw std::invalid_argument("PosteriorGrid2D: grid too small");
  dphi_ = kTwoPi / bp_;
  dh_ = 2.0 / bo_;
  density_.assign(static_cast<size_t>(bp_) * bo_, 1.0 / (kTwoPi * 2.0));
  cos_.resize(bp_);
  sin_.resize(bp_);
  for (int i = 0; i < bp_; ++i) {
    cos_[i] = std::cos(phase_center(i));
    sin_[i] = std::sin(phase_center(i));
  }
}

double PosteriorGrid2D::mass() const {
  double s = 0.0;
  for (double d : density_) s += d;
  return s * cell_area();
}

void PosteriorGrid2D::renormalize_or_throw() {
  double m = mass();
  if (!(m > 1e-300)) throw DegeneratePosteriorError("posterior mass collapsed");
  double inv = 1.0 / m;
  for (double& d : density_) d *= inv;
}

void PosteriorGrid2D::update_cosine_offset(int num_cosines, int sign, double ttilde) {
  const double ct = std::cos(ttilde), st = std::sin(ttilde);
  const double k = static_cast<double>(num_cosines);
  const double s = static_cast<double>(sign);
  const double inv2k = 1.0 / (2.0 * k);
  double total = 0.0;
  for (int i = 0; i < bp_; ++i) {
    const double base = k + s * (cos_[i] * ct + sin_[i] * st);
    double* row = &density_[static_cast<size_t>(i) * bo_];
    for (int j = 0; j < bo_; ++j) {
      double h = -1.0 + (j + 0.5) * dh_;
      row[j] *= (base + s * h) * inv2k;
      total += row[j];
    }
  }
  total *= cell_area();
  if (!(total > 1e-300)) throw DegeneratePosteriorError("posterior mass collapsed");
  double inv = 1.0 / total;
  for (double& d : density_) d *= inv;
}

PosteriorGrid1D PosteriorGrid2D::phase_marginal() const {
  PosteriorGrid1D g(bp_);
  for (int i = 0; i < bp_; ++i) {
    const double* row = &density_[static_cast<size_t>(i) * bo_];
    double rm = 0.0;
    for (int j = 0; j < bo_; ++j) rm += row[j];
    g.set_density(i, rm * dh_);
  }
  g.normalize();
  return g;
}

CircularMoments PosteriorGrid2D::phase_moments() const { return phase_marginal().moments(); }

double PosteriorGrid2D::phase_circular_mean() const {
  double c = 0.0, s = 0.0;
  for (int i = 0; i < bp_; ++i) {
    const double* row = &density_[static_cast<size_t>(i) * bo_];
    double rm = 0.0;
    for (int j = 0; j < bo_; ++j) rm += row[j];
    c += rm * cos_[i];
    s += rm * sin_[i];
  }
  if (std::hypot(c, s) * cell_area() < 1e-12) return 0.0;
  return std::atan2(s, c);
}

std::pair<double, double> PosteriorGrid2D::offset_moments() const {
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (int j = 0; j < bo_; ++j) {
    double col = 0.0;
    for (int i = 0; i < bp_; ++i) col += density_[static_cast<size_t>(i) * bo_ + j];
    double h = offset_center(j);
    m0 += col;
    m1 += col * h;
    m2 += col * h * h;
  }
  double mean = m1 / m0;
  double var = m2 / m0 - mean * mean;
  return {mean, var};
}

}  // namespace phaseest
