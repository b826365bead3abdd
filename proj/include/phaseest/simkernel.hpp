// simkernel.hpp — seeded stochastic measurement generation.
//
// Outcomes for commuting stabilizer combinations are drawn jointly: the
// rotated statevector is taken to the simultaneous X eigenbasis (Hadamard on
// every qubit), one of the 128 basis outcomes is sampled from its exact
// probability, and each combo's outcome is the parity over its support.
// An independent per-combo Bernoulli mode exists behind a flag for ablation.
//
// PRNG: mt19937_64, one engine per stream, seeded by splitmix64 mixing of
// (master_seed, stream_index). Every downstream number is a deterministic
// function of (model, truth, seed, config).

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "phaseest/models.hpp"

namespace phaseest {

inline constexpr const char* kRngAlgorithm = "mt19937_64/splitmix64-streams";

class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform angle in [-pi, pi).
  double uniform_angle();
  /// +1 or -1 with equal probability.
  int coin_sign();

 private:
  std::uint64_t master_seed_, stream_index_;
  std::mt19937_64 engine_;
};

inline RngStream spawn_rng(std::uint64_t master_seed, std::uint64_t trial_index) {
  return RngStream(master_seed, trial_index);
}

struct MeasurementRecord {
  int combo = 0;
  std::vector<double> theta;
  int outcome = 0;  // +1 or -1
  long preparation_index = 0;
};

/// Preparation budget accounting: one increment per state preparation or per
/// single-qubit sample, regardless of how many combos are read out.
struct PreparationCounter {
  long count = 0;
};

/// +1 with probability (1 + cos(phi_true - theta)) / 2.
int sample_single_qubit(double phi_true, double theta, RngStream& rng);

/// Exact joint outcome distribution for one (truth, theta) preparation
/// setting. Building the sampler is free of randomness; each sample() is one
/// preparation.
class JointSampler {
 public:
  JointSampler(const ModelSpec& model, const std::vector<double>& phi_true,
               const std::vector<double>& theta, bool independent = false);

  /// Outcomes (+1/-1) for the requested combos from a single preparation.
  std::vector<int> sample(const std::vector<int>& combos, RngStream& rng) const;
  /// Convenience: single-combo readout.
  int sample_one(int combo, RngStream& rng) const;

 private:
  const ModelSpec* model_;
  bool independent_;
  std::vector<double> cdf_;            // joint mode: CDF over 128 X-basis outcomes
  std::vector<int> support_masks_;     // per combo
  std::vector<double> prob_plus_;      // independent mode: per-combo P(+)
};

/// One preparation; outcomes for all requested combos drawn jointly.
std::vector<MeasurementRecord> prepare_and_measure(const ModelSpec& model,
                                                   const std::vector<double>& truth,
                                                   const std::vector<double>& theta,
                                                   const std::vector<int>& combos, RngStream& rng,
                                                   PreparationCounter& counter,
                                                   bool independent = false);

}  // namespace phaseest
