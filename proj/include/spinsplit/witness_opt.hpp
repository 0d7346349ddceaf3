#pragma once

#include "spinsplit/moment_map.hpp"
#include "spinsplit/sep_bounds.hpp"

namespace spinsplit {

// Degree <= 2 moment data in the form the rotation optimizer consumes.
struct WitnessMoments {
  Vec3 mean_a{}, mean_b{};
  Mat3 cross = mat3_zero();     // <J_i^A J_j^B>
  Mat3 second_a = mat3_zero();  // Re<J_i^A J_j^A>, symmetrized
  Mat3 second_b = mat3_zero();
};

WitnessMoments extract_witness_moments(const MixedMoments& moments);

// Witness expectation after independent SO(3) rotations of the two sites
// (rotations act linearly on the moment data).
double eval_witness_rotated(const WitnessSpec& spec, const WitnessMoments& wm, const Mat3& rot_a,
                            const Mat3& rot_b);

struct RotationPair {
  std::array<double, 3> euler_a{0, 0, 0};  // z-y-z
  std::array<double, 3> euler_b{0, 0, 0};
};

struct RotationOptimum {
  double value = 0.0;
  RotationPair rotation;
};

// Maximize the witness expectation over local rotations by multistart
// Nelder-Mead over the six Euler angles.
RotationOptimum optimize_rotations(const WitnessSpec& spec, const MixedMoments& state_moments,
                                   int restarts = 8, std::uint64_t seed = 1,
                                   int max_iterations = 400);

struct RobustnessResult {
  double p_star = 1.0;       // minimal survival probability still detecting
  bool violation = false;    // false -> p_star reported as 1
  WitnessSpec spec;
  RotationPair rotation;
  double witness_value_opt = 0.0;
  double separable_bound = 0.0;
  double noise_value = 0.0;  // witness value on the white-noise state
};

struct RobustnessOptions {
  Backend backend = Backend::Auto;
  int rotation_restarts = 8;
  int rotation_iterations = 400;
  int bound_restarts = 32;
  double bound_tail_eps = 1e-12;
  std::uint64_t seed = 1;
  // skip the numeric bound when the caller knows the closed value
  bool use_bound_override = false;
  double bound_override = 0.0;
};

// White-noise robustness p* of one witness: solves
// p W_opt + (1-p) W_noise = w for p.
RobustnessResult robustness(const WitnessSpec& spec, const SymmetricState& state,
                            const RobustnessOptions& opts = {});

// Same, starting from precomputed split-state moments.
RobustnessResult robustness_from_moments(const WitnessSpec& spec, const MixedMoments& moments,
                                         const RobustnessOptions& opts = {});

struct SearchOptions {
  int restarts = 200;
  std::uint64_t seed = 1;
  bool symmetric = false;  // restrict to party-exchange-symmetric specs
  int threads = 1;
  // budgets for the inner evaluations during the search; the returned best
  // spec is re-evaluated with the (stronger) RobustnessOptions defaults
  int search_bound_restarts = 2;
  int search_rotation_restarts = 2;
  int simplex_iterations = 160;
};

// Minimize p* over the witness-coefficient direction (and local rotations):
// multistart Nelder-Mead over unit-normalized spec vectors.
RobustnessResult search_optimal(const SymmetricState& state, int order,
                                const SearchOptions& opts = {});

}  // namespace spinsplit
