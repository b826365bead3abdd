#include "phaseest/simkernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "phaseest/phasecore.hpp"

namespace phaseest {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

int qubit_bit(int qubit) { return 7 - qubit; }

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_seed_(master_seed),
      stream_index_(stream_index),
      engine_(splitmix64(splitmix64(master_seed) ^ splitmix64(stream_index + 1))) {}

double RngStream::uniform() { return (engine_() >> 11) * 0x1.0p-53; }

double RngStream::uniform_angle() { return -kPi + kTwoPi * uniform(); }

int RngStream::coin_sign() { return (engine_() & 1ull) ? 1 : -1; }

int sample_single_qubit(double phi_true, double theta, RngStream& rng) {
  double p_plus = 0.5 * (1.0 + std::cos(phi_true - theta));
  return rng.uniform() < p_plus ? 1 : -1;
}

JointSampler::JointSampler(const ModelSpec& model, const std::vector<double>& phi_true,
                           const std::vector<double>& theta, bool independent)
    : model_(&model), independent_(independent) {
  support_masks_.reserve(model.num_combos());
  for (int k = 0; k < model.num_combos(); ++k) {
    int mask = 0;
    for (int q : model.combo(k).support) mask |= 1 << qubit_bit(q);
    support_masks_.push_back(mask);
  }
  if (independent_ || model.kind() == ModelKind::single_qubit) {
    for (int k = 0; k < model.num_combos(); ++k)
      prob_plus_.push_back(model.full_likelihood(k, +1, phi_true, theta));
    return;
  }
  // X-basis probabilities: Hadamard on all seven qubits, then |.|^2
  StatevectorOracle sv = statevector_build(model, phi_true, theta);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int bit = 0; bit < 7; ++bit) {
    int stride = 1 << bit;
    for (int base = 0; base < 128; base += stride << 1) {
      for (int i = base; i < base + stride; ++i) {
        auto lo = sv.amplitudes[i];
        auto hi = sv.amplitudes[i + stride];
        sv.amplitudes[i] = (lo + hi) * inv_sqrt2;
        sv.amplitudes[i + stride] = (lo - hi) * inv_sqrt2;
      }
    }
  }
  cdf_.resize(128);
  double acc = 0.0;
  for (int z = 0; z < 128; ++z) {
    acc += std::norm(sv.amplitudes[z]);
    cdf_[z] = acc;
  }
  cdf_.back() = 1.0;  // guard against rounding at the top
}

std::vector<int> JointSampler::sample(const std::vector<int>& combos, RngStream& rng) const {
  if (combos.empty()) throw std::invalid_argument("JointSampler: no combos requested");
  std::vector<int> out;
  out.reserve(combos.size());
  if (!cdf_.empty()) {
    double u = rng.uniform();
    int z = static_cast<int>(std::lower_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
    for (int k : combos) {
      int parity = __builtin_popcount(static_cast<unsigned>(z & support_masks_[k])) & 1;
      out.push_back(parity ? -1 : 1);
    }
  } else {
    for (int k : combos) out.push_back(rng.uniform() < prob_plus_[k] ? 1 : -1);
  }
  return out;
}

int JointSampler::sample_one(int combo, RngStream& rng) const {
  if (!cdf_.empty()) {
    double u = rng.uniform();
    int z = static_cast<int>(std::lower_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
    int parity = __builtin_popcount(static_cast<unsigned>(z & support_masks_[combo])) & 1;
    return parity ? -1 : 1;
  }
  return rng.uniform() < prob_plus_[combo] ? 1 : -1;
}

std::vector<MeasurementRecord> prepare_and_measure(const ModelSpec& model,
                                                   const std::vector<double>& truth,
                                                   const std::vector<double>& theta,
                                                   const std::vector<int>& combos, RngStream& rng,
                                                   PreparationCounter& counter,
                                                   bool independent) {
  JointSampler sampler(model, truth, theta, independent);
  std::vector<int> outcomes = sampler.sample(combos, rng);
  long prep = counter.count++;
  std::vector<MeasurementRecord> records;
  records.reserve(combos.size());
  for (size_t i = 0; i < combos.size(); ++i)
    records.push_back({combos[i], theta, outcomes[i], prep});
  return records;
}

}  // namespace phaseest
