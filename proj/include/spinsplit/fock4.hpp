#pragma once

#include <map>

#include "spinsplit/dicke.hpp"

namespace spinsplit {

// Exact four-mode post-split representation. Amplitudes are indexed by
// occupation triples (n_a1, n_a2, n_b1); n_b2 = N - n_a1 - n_a2 - n_b1.
// This is the ground-truth oracle; dimension C(N+3, 3) caps it at N <= 30.
inline constexpr int kOracleMaxAtoms = 30;

struct Basis4 {
  explicit Basis4(int n_atoms);

  int n_atoms = 0;
  int dim = 0;

  int index(int n_a1, int n_a2, int n_b1) const;
  std::array<int, 4> occupations(int index) const;  // (n_a1, n_a2, n_b1, n_b2)

 private:
  std::vector<int> offset_a1_;
  std::vector<std::array<int, 3>> states_;
};

struct FourModeState {
  int n_atoms = 0;
  std::vector<cplx> amplitudes;  // length C(N+3, 3)

  double norm2() const;
  void check_valid() const;
};

enum class Provenance { Pure, WhiteMixed, PhaseAveraged, CoarseGrained };

// Table of expectation values of LCSO monomials.
struct MixedMoments {
  int n_atoms = 0;
  Provenance tag = Provenance::Pure;
  std::map<LcsoMonomial, cplx> values;

  // <1> = 1 for the empty monomial; unknown entries throw std::out_of_range.
  cplx at(const LcsoMonomial& m) const;
  bool has(const LcsoMonomial& m) const;
};

// Pre-split state placed entirely at site A (internal modes a1/a2, B empty).
FourModeState embed_in_A(const SymmetricState& state);

// 50/50 state-independent beamsplitter on both internal modes. Convention:
// a_i^dag -> (a_i^dag + b_i^dag)/sqrt 2, b_i^dag -> (b_i^dag - a_i^dag)/sqrt 2,
// so applying it twice maps a^dag -> b^dag and b^dag -> -a^dag.
FourModeState split_half(const FourModeState& state);

// Local rotation exp(-i angle J_axis^site), same sign convention as
// dicke rotate (checked against it through embed_in_A).
FourModeState rotate_site(const FourModeState& state, Site site, Axis axis, double angle);

// Exact expectation of one monomial, degree <= 4.
cplx lcso_moment(const FourModeState& state, const LcsoMonomial& mono);

// All monomial expectations up to max_degree in one pass.
MixedMoments all_lcso_moments(const FourModeState& state, int max_degree = 4);

// Normalized trace of a collective-component word on the spin-j irrep,
// tr(J_{c1}...J_{ck}) / (2j+1), with two_j = 2j. Closed form via ladder
// decomposition; exact for degree <= 4 at any j.
double spin_word_normalized_trace(int two_j, const Word& word);

// Moment of one monomial on the binomially weighted local white-noise state
// (maximally mixed on each local symmetric subspace).
double white_noise_moment(int n_atoms, const LcsoMonomial& mono);

// The per-component second-moment value <(J_i^X)^2> on that state, computed
// by the k-summation (not a trusted closed form).
double white_noise_second_moment_coeff(int n_atoms);

// Mix pure moments with the local white-noise state: p*pure + (1-p)*noise.
MixedMoments white_noise_moments(int n_atoms, double p, const MixedMoments& pure);

// Gaussian average over independent local z rotations by tensor-product
// Gauss-Hermite quadrature; node count doubled until stable to 1e-10.
MixedMoments phase_noise_moments(const FourModeState& state, double sigma_p,
                                 const std::vector<LcsoMonomial>& monomials);

struct MeasurementSetting {
  Axis site_a = Axis::Z;
  Axis site_b = Axis::Z;
};

struct MeasurementRecord {
  int n_a1 = 0, n_a2 = 0, n_b1 = 0, n_b2 = 0;

  double jz_a() const { return 0.5 * (n_a1 - n_a2); }
  double jz_b() const { return 0.5 * (n_b1 - n_b2); }
};

// i.i.d. Born-rule samples of the four occupation numbers after rotating each
// site so the requested component is mapped onto z. Deterministic given seed.
std::vector<MeasurementRecord> sample_measurements(const FourModeState& state,
                                                   const MeasurementSetting& setting, int n_runs,
                                                   std::uint64_t seed);

// Gauss-Hermite nodes/weights for weight exp(-x^2) (used by the quadrature;
// exposed for tests).
void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace spinsplit
