#pragma once

#include "spinsplit/common.hpp"

namespace spinsplit {

// N-atom permutation-symmetric state in the Dicke basis. Amplitude index n1
// counts atoms in internal state 1, so Jz eigenvalue is m = n1 - N/2.
struct SymmetricState {
  int n_atoms = 0;
  std::vector<cplx> amplitudes;  // length n_atoms + 1

  double norm2() const;
  void check_valid() const;  // throws std::invalid_argument on bad shape/norm
};

struct SqueezingReport {
  double xi2 = 1.0;
  double xi2_db = 0.0;
  double squeezing_angle = 0.0;  // in (-pi/2, pi/2]
  Vec3 mean_spin{0, 0, 0};
};

// Coherent spin state pointing along +x: c_{n1} = 2^{-N/2} sqrt(C(N, n1)).
SymmetricState coherent_state_x(int n_atoms);

// exp(-i chi_t Jz^2) applied to the state.
SymmetricState one_axis_twist(const SymmetricState& state, double chi_t);

// Active rotation exp(-i angle J_axis). Convention pinned by the single-spin
// test: rotate(coherent_state_x, y, pi/2) gives <Jz> = -N/2.
SymmetricState rotate(const SymmetricState& state, Axis axis, double angle);

// <J_{c1} J_{c2} ... J_{ck}> for an ordered word, degree <= 4.
cplx collective_moment(const SymmetricState& state, const Word& word);

// Apply a single collective component in place: out = J_axis * in.
void apply_collective(const SymmetricState& state, Axis axis, const std::vector<cplx>& in,
                      std::vector<cplx>& out);

// Wineland parameter from moments: mean spin + minimal orthogonal variance via
// closed-form diagonalization of the 2x2 transverse covariance.
SqueezingReport xi2_numeric(const SymmetricState& state);

// Closed-form xi^2 for the one-axis-twisted coherent state.
double xi2_closed_form(int n_atoms, double chi_t);

// One-axis-twisted state rotated about x so z is the minimal-variance
// direction (the frame used by the S and D criteria).
SymmetricState framed_squeezed_state(int n_atoms, double chi_t);

// Solves 10 log10(xi2_closed_form(N, chi)) = target_db for the smallest
// nonnegative chi. Throws std::domain_error when the target is unreachable.
double chi_t_for_target_db(int n_atoms, double target_db);

}  // namespace spinsplit
