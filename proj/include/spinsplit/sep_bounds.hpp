#pragma once

#include "spinsplit/common.hpp"

namespace spinsplit {

// Witness coefficient vector. Order 1 uses (m, alpha_bar, alpha): 15 entries.
// Order 2 adds per-site second-moment coefficients: 21 entries. Bounds are
// maxima, so builtin D is stored negated (violation = value above bound).
struct WitnessSpec {
  int order = 1;
  Mat3 m = mat3_zero();   // alpha_ij, i = A component, j = B component
  Vec3 alpha_bar{};       // linear in <J^A>
  Vec3 alpha{};           // linear in <J^B>
  Vec3 alpha2_bar{};      // <(J_i^A)^2> coefficients (order 2)
  Vec3 alpha2{};          // <(J_i^B)^2> coefficients (order 2)

  static WitnessSpec s_criterion();        // <JxJx> + <JyJy> - <JzJz>
  static WitnessSpec minus_d_criterion();  // -D, so the separable bound is 0

  std::vector<double> flat() const;  // 15 or 21 entries
  static WitnessSpec from_flat(const std::vector<double>& v, int order);

  double norm() const;
  WitnessSpec scaled(double factor) const;
  bool is_party_symmetric(double tol = 1e-12) const;
  void validate() const;  // finite entries, at least one nonzero
};

struct SeparableBound {
  double value = 0.0;
  int n_a = 0, n_b = 0;
  Vec3 u_a{}, u_b{};  // maximizer mean spins
  Vec3 s_a{}, s_b{};  // maximizer second moments (order 2 only)
};

// Objective at a explicit per-site configuration.
double witness_objective(const WitnessSpec& spec, const Vec3& u_a, const Vec3& u_b,
                         const Vec3& s_a, const Vec3& s_b);

// max of u M v + alpha_bar.u + alpha.v over ||u|| <= r_a, ||v|| <= r_b by
// multistart alternating ascent.
SeparableBound bound_first_order(const WitnessSpec& spec, double r_a, double r_b,
                                 int restarts = 64, std::uint64_t seed = 1);

// Order-2 bound over the moment relaxation: ||u|| <= n/2,
// sum_i s_i <= (n/2)(n/2+1), s_i >= u_i^2, and
// (s_i - u_i^2) + (s_j - u_j^2) >= |u_k| for all permutations. The inner
// problem in s is a 3-variable LP solved exactly by vertex enumeration; the
// outer problem uses multistart projected pattern search.
SeparableBound bound_second_order(const WitnessSpec& spec, int n_a, int n_b, int restarts = 64,
                                  std::uint64_t seed = 1);

// Binomially averaged separable bound over atom-number partitions.
double bound_binomial(const WitnessSpec& spec, int n_atoms, double tail_eps = 1e-12,
                      int restarts = 64, std::uint64_t seed = 1);

namespace detail {

// One ascent run from the given v direction; returns the objective and fills
// u, v with the maximizer. Appends the objective after each sweep to trace.
double alternating_ascent(const WitnessSpec& spec, double r_a, double r_b, Vec3& u, Vec3& v,
                          Rng& rng, std::vector<double>* trace = nullptr);

// Exact inner LP: maximize c . s over the order-2 s-polytope for fixed u.
double lp_max_s(const Vec3& c, const Vec3& u, double n_half, Vec3& s_out);

bool second_order_feasible(const Vec3& u, const Vec3& s, double n_half, double tol = 1e-8);

}  // namespace detail

}  // namespace spinsplit
