// models.hpp — likelihood models for the one-qubit, two-plaquette and
// three-plaquette (Steane code) configurations.
//
// Every outcome likelihood is a normalized sum of K unit cosines,
//   P(+|phi, theta) = (K + sum_j cos(a_j . phi + b_j . theta)) / (2K),
// with integer coefficient vectors a_j (over phases) and b_j (over rotation
// angles). The tables are generated from the underlying superposition state,
// not hand-coded: for an X-type stabilizer combination with support S, the
// expectation pairs up basis components c and c xor S, and each pair
// contributes one cosine whose argument is the phase difference of the pair.
//
// An exact 7-qubit statevector oracle (build + expectations) provides an
// independent route to the same numbers for cross-checking.

#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace phaseest {

enum class ModelKind { single_qubit, two_plaquette, three_plaquette };

ModelKind parse_model_kind(const std::string& name);
std::string model_kind_name(ModelKind kind);

struct CosineTerm {
  std::vector<int> a;  // phase coefficients, entries in {-1, 0, +1}
  std::vector<int> b;  // angle coefficients, entries in {-2, 0, +2} (or -1 for single qubit)
};

struct CosineSumLikelihood {
  int num_cosines = 1;  // K
  std::vector<CosineTerm> terms;

  /// P(sign | phi, theta) with sign = +1 or -1.
  double prob(int sign, const std::vector<double>& phi, const std::vector<double>& theta) const;
};

struct ComboSpec {
  std::string id;               // e.g. "S1S2"
  std::vector<int> support;     // qubit indices, 1-based
  CosineSumLikelihood full;     // full likelihood over all phases
  int target_phase = 0;         // 0-based index of the phase this combo pins
  std::vector<double> ttilde_row;  // theta_tilde = ttilde_row . theta
  int designated_angle = 0;     // 1-based qubit whose rotation the plain PHOM scans
};

/// 7-qubit statevector (128 amplitudes), qubit 1 is the most significant bit.
struct StatevectorOracle {
  std::array<std::complex<double>, 128> amplitudes{};
};

class ModelSpec {
 public:
  static ModelSpec build(ModelKind kind);

  ModelKind kind() const { return kind_; }
  int num_phases() const { return num_phases_; }
  int num_angles() const { return num_angles_; }
  int num_combos() const { return static_cast<int>(combos_.size()); }
  const ComboSpec& combo(int k) const { return combos_.at(k); }
  const std::vector<ComboSpec>& combos() const { return combos_; }
  /// Angle slots actually used by solve_angles (1-based qubits).
  const std::vector<int>& active_angles() const { return active_angles_; }

  double full_likelihood(int combo, int sign, const std::vector<double>& phi,
                         const std::vector<double>& theta) const;

  /// (K + sign * cos(phi_target - ttilde)) / (2K).
  double marginal_likelihood(int combo, int sign, double phi_target, double ttilde) const;

  /// Wrapped value of the combo's theta-tilde linear form.
  double theta_tilde(int combo, const std::vector<double>& theta) const;

  /// Rotation angles such that theta_tilde(combo_k, theta) == targets_k
  /// (mod 2 pi). Inactive angle slots are returned as 0.
  std::vector<double> solve_angles(const std::vector<double>& targets) const;

 private:
  ModelKind kind_;
  int num_phases_ = 0;
  int num_angles_ = 0;
  std::vector<ComboSpec> combos_;
  std::vector<int> active_angles_;
  // Inverse of the ttilde matrix restricted to active angle columns.
  std::vector<std::vector<double>> solve_inverse_;
  friend ModelSpec build_plaquette_model(ModelKind kind);
};

inline ModelSpec build_model(ModelKind kind) { return ModelSpec::build(kind); }

/// State with per-component phase shifts phi plus the Z-rotation-induced
/// angles theta (length 7). Plaquette models only; the two-plaquette state
/// has 4 components, the three-plaquette (logical zero) state has 8.
StatevectorOracle statevector_build(const ModelSpec& model, const std::vector<double>& phi,
                                    const std::vector<double>& theta);

/// <S_combo> for every combo by direct X-operator application on the state.
std::vector<double> statevector_expectations(const StatevectorOracle& state,
                                             const ModelSpec& model);

}  // namespace phaseest
