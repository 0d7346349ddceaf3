#pragma once

#include "spinsplit/fock4.hpp"

namespace spinsplit {

using MomentTable = std::map<Word, cplx>;

// Symmetric k-body correlators <s_{c1} x ... x s_{ck}> over distinct atoms of
// the pre-split state. Permutation symmetry makes the value depend only on
// the multiset of components, so keys are sorted words of length 1..4.
struct KBodyCorrelators {
  int n_atoms = 0;
  int max_order = 0;
  std::map<Word, cplx> values;

  cplx at(const Word& sorted_multiset) const;
};

// All collective words up to max_degree, exact sparse evaluation.
MomentTable presplit_moments(const SymmetricState& state, int max_degree = 4);

// Solve the triangular relations between collective moments and symmetric
// k-body correlators, e.g. <s_z s_z> = (<Jz^2> - N/4) / (N (N-1)).
KBodyCorrelators kbody_from_collective(const MomentTable& moments, int n_atoms,
                                       int max_degree = 4);

// Inverse direction, used for round-trip validation.
cplx collective_from_kbody(const Word& word, const KBodyCorrelators& corr);

// Post-split LCSO moment from pre-split correlators: expectation over the
// independent fair-coin assignment of atoms to the two wells.
cplx postsplit_moment(const LcsoMonomial& mono, const KBodyCorrelators& corr, int n_atoms);

// Same with Gaussian phase noise of std sigma_p on independent local z
// rotations, as exact per-harmonic damping exp(-k^2 sigma_p^2 / 2).
cplx phase_damped_postsplit(const LcsoMonomial& mono, const KBodyCorrelators& corr, int n_atoms,
                            double sigma_p);

// Full monomial table through this backend (phase damping applied when
// sigma_p > 0). The scalable counterpart of fock4's state pipeline.
MixedMoments postsplit_moments_table(const SymmetricState& state, double sigma_p = 0.0,
                                     int max_degree = 4);

enum class Backend { Oracle, MomentMap, Auto };

// Auto picks the exact four-mode oracle up to N = 20 and this module beyond.
bool backend_uses_oracle(Backend backend, int n_atoms);

// Moments of the split (and optionally phase-averaged) state through the
// requested backend. The oracle route goes embed -> split -> quadrature;
// the scalable route goes correlators -> assignment average -> damping.
MixedMoments split_state_moments(const SymmetricState& state, double sigma_p, Backend backend,
                                 int max_degree = 4);

}  // namespace spinsplit
