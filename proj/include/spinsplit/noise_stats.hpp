#pragma once

#include <optional>

#include "spinsplit/witness_opt.hpp"

namespace spinsplit {

struct NoiseConfig {
  double p_white = 1.0;  // survival probability of the prepared state
  double sigma_p = 0.0;  // phase-noise std, radians
  double sigma_c = 0.0;  // atom-counting noise std, atoms

  void validate() const;
};

// Measured-moment table under Gaussian counting noise: each local spin
// component reading carries an independent N(0, sigma_c^2 / 2) offset (two
// counters of variance sigma_c^2 per component). First moments and A x B
// cross moments are unchanged; every squared local component gains
// +sigma_c^2/2; degree-4 entries gain the matching Gaussian-moment terms
// (3 (sigma_c^2/2)^2 for fourth powers).
MixedMoments coarse_grain_moments(const MixedMoments& moments, double sigma_c);

// Noise pipeline: white-noise mixing, then phase averaging (the white-noise
// part is rotation invariant, so the order only fixes bookkeeping), then
// counting noise on top for the measured table.
struct NoisePipeline {
  int n_atoms = 0;
  NoiseConfig noise;
  MixedMoments corrected;  // true moments of the noisy state (value table)
  MixedMoments measured;   // + counting-noise corrections (variance table)
};

NoisePipeline build_noise_pipeline(const SymmetricState& state, const NoiseConfig& noise,
                                   Backend backend, int max_degree = 4);

enum class WitnessKind { S, D, Custom };

// value/threshold pair with the violation orientation resolved:
// S and Custom violate above the threshold, D violates below it.
struct WitnessUnderNoise {
  WitnessKind kind = WitnessKind::S;
  double value = 0.0;
  double threshold = 0.0;
  bool violated = false;
  double margin = 0.0;  // distance past the threshold in the violating direction
};

// S = <JxJx> + <JyJy> - <JzJz> vs N(N-1)/16 (counting-noise insensitive).
WitnessUnderNoise evaluate_s(const NoisePipeline& pipe);

// D = <(Jy^A-Jy^B)^2> + <(Jz^A+Jz^B)^2> - <Jx^A+Jx^B> vs -2 sigma_c^2: the
// threshold absorbs a worst-case counting-noise calibration, which is what
// makes D lose to S under detection noise.
WitnessUnderNoise evaluate_d(const NoisePipeline& pipe);

// Custom specs: value on the corrected table vs the binomial separable bound
// (counting noise affects only the estimator statistics).
WitnessUnderNoise evaluate_custom(const NoisePipeline& pipe, const WitnessSpec& spec,
                                  int bound_restarts = 32, std::uint64_t seed = 1);

// Per-setting estimator variances from the measured (degree-4) table.
// S settings measure Jx^A Jx^B, Jy^A Jy^B, Jz^A Jz^B; D settings measure
// -(Jx^A + Jx^B), (Jy^A - Jy^B)^2 and (Jz^A + Jz^B)^2.
Vec3 estimator_variance(WitnessKind kind, const MixedMoments& measured);

struct EstimatorReport {
  WitnessUnderNoise witness;
  Vec3 setting_variance{};  // sigma^2 per setting
  double k_sigma = 3.0;
  std::optional<long long> required_runs;  // absent when there is no violation
};

// Least N_m with |value - threshold| >= k_sigma sqrt(sum sigma^2) / sqrt(N_m),
// each of the three settings measured N_m times, runs i.i.d.
EstimatorReport required_runs(WitnessKind kind, const WitnessSpec* custom,
                              const SymmetricState& state, const NoiseConfig& noise,
                              Backend backend, double k_sigma = 3.0);

// Phase-noise level at which the witness violation vanishes (bisection on the
// margin); other noise fields of the config are kept.
double phase_noise_threshold(WitnessKind kind, const SymmetricState& state, NoiseConfig noise,
                             Backend backend, double sigma_hi = 0.2);

}  // namespace spinsplit
