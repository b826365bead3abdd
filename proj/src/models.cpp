#include "phaseest/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "phaseest/phasecore.hpp"

namespace phaseest {

namespace {

// Qubit j (1-based) occupies bit 7-j, so a ket string reads as binary
// most-significant-qubit first.
int qubit_bit(int qubit) { return 7 - qubit; }

int parse_ket(const char* bits) {
  int v = 0;
  for (int i = 0; i < 7; ++i) v = (v << 1) | (bits[i] - '0');
  return v;
}

int support_mask(const std::vector<int>& support) {
  int m = 0;
  for (int q : support) m |= 1 << qubit_bit(q);
  return m;
}

struct Component {
  int index;      // 7-bit basis index
  int phase;      // 0-based phase index, -1 for the reference component
};

// Basis components of the superposition state, in the order their phases are
// numbered. The two-plaquette state is the first four entries.
std::vector<Component> state_components(ModelKind kind) {
  static const std::pair<const char*, int> all[] = {
      {"0000000", -1}, {"0110110", 0}, {"1111000", 1}, {"1001110", 2},
      {"0011011", 3},  {"0101101", 4}, {"1100011", 5}, {"1010101", 6},
  };
  int count = (kind == ModelKind::two_plaquette) ? 4 : 8;
  std::vector<Component> out;
  for (int i = 0; i < count; ++i) out.push_back({parse_ket(all[i].first), all[i].second});
  return out;
}

// Invert a small dense matrix by Gauss-Jordan with partial pivoting.
std::vector<std::vector<double>> invert(std::vector<std::vector<double>> m) {
  const int n = static_cast<int>(m.size());
  std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (std::abs(m[piv][col]) < 1e-12)
      throw std::runtime_error("model construction: singular theta-tilde matrix");
    std::swap(m[piv], m[col]);
    std::swap(inv[piv], inv[col]);
    double d = 1.0 / m[col][col];
    for (int j = 0; j < n; ++j) {
      m[col][j] *= d;
      inv[col][j] *= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = m[r][col];
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        m[r][j] -= f * m[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

// One cosine per component pair (c, c xor S); the argument is the phase
// difference across the pair. Sign-canonicalized so the leading phase
// coefficient is +1, target-phase term first.
CosineSumLikelihood pair_likelihood(const std::vector<Component>& comps, int mask, int num_phases,
                                    int* target_phase) {
  std::vector<CosineTerm> terms;
  CosineTerm target_term;
  bool have_target = false;
  std::vector<char> seen(comps.size(), 0);
  for (size_t ci = 0; ci < comps.size(); ++ci) {
    if (seen[ci]) continue;
    int partner_index = comps[ci].index ^ mask;
    size_t pi = comps.size();
    for (size_t k = 0; k < comps.size(); ++k)
      if (comps[k].index == partner_index) pi = k;
    if (pi == comps.size())
      throw std::runtime_error("model construction: state not closed under stabilizer");
    seen[ci] = seen[pi] = 1;
    const Component& c = comps[ci];
    const Component& d = comps[pi];
    CosineTerm t;
    t.a.assign(num_phases, 0);
    t.b.assign(7, 0);
    if (d.phase >= 0) t.a[d.phase] += 1;
    if (c.phase >= 0) t.a[c.phase] -= 1;
    for (int q = 1; q <= 7; ++q) {
      int bit = 1 << qubit_bit(q);
      t.b[q - 1] = 2 * (((d.index & bit) ? 1 : 0) - ((c.index & bit) ? 1 : 0));
    }
    // canonical sign: first nonzero phase coefficient positive
    for (int p = 0; p < num_phases; ++p) {
      if (t.a[p] == 0) continue;
      if (t.a[p] < 0) {
        for (int& v : t.a) v = -v;
        for (int& v : t.b) v = -v;
      }
      break;
    }
    if (c.phase == -1 || d.phase == -1) {
      // pair containing the reference component: single-phase target term
      target_term = t;
      *target_phase = (c.phase == -1) ? d.phase : c.phase;
      have_target = true;
    } else {
      terms.push_back(std::move(t));
    }
  }
  if (!have_target) throw std::runtime_error("model construction: no target term");
  std::sort(terms.begin(), terms.end(), [](const CosineTerm& x, const CosineTerm& y) {
    return x.a < y.a;
  });
  CosineSumLikelihood lik;
  lik.terms.push_back(std::move(target_term));
  for (auto& t : terms) lik.terms.push_back(std::move(t));
  lik.num_cosines = static_cast<int>(lik.terms.size());
  return lik;
}

std::vector<int> symmetric_difference(std::vector<int> a, const std::vector<int>& b) {
  std::vector<int> out;
  for (int q = 1; q <= 7; ++q) {
    bool ina = std::find(a.begin(), a.end(), q) != a.end();
    bool inb = std::find(b.begin(), b.end(), q) != b.end();
    if (ina != inb) out.push_back(q);
  }
  return out;
}

}  // namespace

ModelKind parse_model_kind(const std::string& name) {
  if (name == "single_qubit") return ModelKind::single_qubit;
  if (name == "two_plaquette") return ModelKind::two_plaquette;
  if (name == "three_plaquette") return ModelKind::three_plaquette;
  throw std::invalid_argument("unknown model kind: " + name);
}

std::string model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::single_qubit: return "single_qubit";
    case ModelKind::two_plaquette: return "two_plaquette";
    case ModelKind::three_plaquette: return "three_plaquette";
  }
  return "?";
}

double CosineSumLikelihood::prob(int sign, const std::vector<double>& phi,
                                 const std::vector<double>& theta) const {
  double sum = 0.0;
  for (const CosineTerm& t : terms) {
    double arg = 0.0;
    for (size_t p = 0; p < t.a.size(); ++p)
      if (t.a[p] != 0) arg += t.a[p] * phi[p];
    for (size_t q = 0; q < t.b.size(); ++q)
      if (t.b[q] != 0) arg += t.b[q] * theta[q];
    sum += std::cos(arg);
  }
  return (num_cosines + sign * sum) / (2.0 * num_cosines);
}

ModelSpec ModelSpec::build(ModelKind kind) {
  ModelSpec m;
  m.kind_ = kind;
  if (kind == ModelKind::single_qubit) {
    m.num_phases_ = 1;
    m.num_angles_ = 1;
    ComboSpec c;
    c.id = "O";
    c.support = {1};
    c.full.num_cosines = 1;
    c.full.terms = {{{1}, {-1}}};
    c.target_phase = 0;
    c.ttilde_row = {1.0};
    c.designated_angle = 1;
    m.combos_.push_back(std::move(c));
    m.active_angles_ = {1};
    m.solve_inverse_ = {{1.0}};
    return m;
  }

  const bool three = (kind == ModelKind::three_plaquette);
  m.num_phases_ = three ? 7 : 3;
  m.num_angles_ = 7;
  const std::vector<int> s1 = {1, 2, 3, 4}, s2 = {2, 3, 5, 6}, s3 = {3, 4, 6, 7};
  struct Gen { std::string id; std::vector<int> support; int designated; };
  std::vector<Gen> gens;
  if (three) {
    gens = {{"S1", s1, 2},
            {"S2", s2, 5},
            {"S3", s3, 3},
            {"S1S2", symmetric_difference(s1, s2), 1},
            {"S1S3", symmetric_difference(s1, s3), 6},
            {"S2S3", symmetric_difference(s2, s3), 4},
            {"S1S2S3", symmetric_difference(symmetric_difference(s1, s2), s3), 7}};
    m.active_angles_ = {1, 2, 3, 4, 5, 6, 7};
  } else {
    gens = {{"S1", s1, 2}, {"S2", s2, 5}, {"S1S2", symmetric_difference(s1, s2), 1}};
    m.active_angles_ = {1, 2, 5};
  }

  auto comps = state_components(kind);
  for (const Gen& g : gens) {
    ComboSpec c;
    c.id = g.id;
    c.support = g.support;
    c.designated_angle = g.designated;
    c.full = pair_likelihood(comps, support_mask(g.support), m.num_phases_, &c.target_phase);
    c.ttilde_row.assign(7, 0.0);
    for (int q : g.support) c.ttilde_row[q - 1] = -2.0;
    m.combos_.push_back(std::move(c));
  }

  // solve matrix restricted to the active angle columns
  const int n = static_cast<int>(m.combos_.size());
  std::vector<std::vector<double>> mat(n, std::vector<double>(n, 0.0));
  for (int r = 0; r < n; ++r)
    for (int col = 0; col < n; ++col)
      mat[r][col] = m.combos_[r].ttilde_row[m.active_angles_[col] - 1];
  m.solve_inverse_ = invert(std::move(mat));
  return m;
}

double ModelSpec::full_likelihood(int combo, int sign, const std::vector<double>& phi,
                                  const std::vector<double>& theta) const {
  if (static_cast<int>(phi.size()) != num_phases_ ||
      static_cast<int>(theta.size()) != num_angles_)
    throw std::invalid_argument("full_likelihood: dimension mismatch");
  return combos_.at(combo).full.prob(sign, phi, theta);
}

double ModelSpec::marginal_likelihood(int combo, int sign, double phi_target,
                                      double ttilde) const {
  int k = combos_.at(combo).full.num_cosines;
  return (k + sign * std::cos(phi_target - ttilde)) / (2.0 * k);
}

double ModelSpec::theta_tilde(int combo, const std::vector<double>& theta) const {
  const auto& row = combos_.at(combo).ttilde_row;
  if (theta.size() != row.size()) throw std::invalid_argument("theta_tilde: dimension mismatch");
  double v = 0.0;
  for (size_t q = 0; q < row.size(); ++q) v += row[q] * theta[q];
  return wrap(v);
}

std::vector<double> ModelSpec::solve_angles(const std::vector<double>& targets) const {
  const int n = static_cast<int>(combos_.size());
  if (static_cast<int>(targets.size()) != n)
    throw std::invalid_argument("solve_angles: expected one target per combo");
  std::vector<double> theta(num_angles_, 0.0);
  for (int col = 0; col < n; ++col) {
    double v = 0.0;
    for (int r = 0; r < n; ++r) v += solve_inverse_[col][r] * targets[r];
    theta[active_angles_[col] - 1] = v;
  }
  return theta;
}

StatevectorOracle statevector_build(const ModelSpec& model, const std::vector<double>& phi,
                                    const std::vector<double>& theta) {
  if (model.kind() == ModelKind::single_qubit)
    throw std::invalid_argument("statevector oracle: plaquette models only");
  if (static_cast<int>(phi.size()) != model.num_phases() || theta.size() != 7)
    throw std::invalid_argument("statevector_build: dimension mismatch");
  auto comps = state_components(model.kind());
  StatevectorOracle sv;
  const double amp = 1.0 / std::sqrt(static_cast<double>(comps.size()));
  for (const Component& c : comps) {
    double arg = (c.phase >= 0) ? phi[c.phase] : 0.0;
    for (int q = 1; q <= 7; ++q)
      if (c.index & (1 << qubit_bit(q))) arg += 2.0 * theta[q - 1];
    sv.amplitudes[c.index] = std::polar(amp, arg);
  }
  return sv;
}

std::vector<double> statevector_expectations(const StatevectorOracle& state,
                                             const ModelSpec& model) {
  std::vector<double> out;
  out.reserve(model.num_combos());
  for (int k = 0; k < model.num_combos(); ++k) {
    int mask = support_mask(model.combo(k).support);
    std::complex<double> acc = 0.0;
    for (int z = 0; z < 128; ++z) acc += std::conj(state.amplitudes[z]) * state.amplitudes[z ^ mask];
    out.push_back(acc.real());
  }
  return out;
}

}  // namespace phaseest
