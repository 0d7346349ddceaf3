#include <doctest.h>

#include <cmath>

#include "spinsplit/witness_opt.hpp"

using namespace spinsplit;

TEST_SUITE_BEGIN("witness_opt");

TEST_CASE("S on the framed squeezed state is optimal at the identity") {
  SymmetricState s = framed_squeezed_state(20, 0.0058);
  MixedMoments mm = split_state_moments(s, 0.0, Backend::Oracle, 2);
  const WitnessSpec spec = WitnessSpec::s_criterion();

  const WitnessMoments wm = extract_witness_moments(mm);
  const double at_identity = eval_witness_rotated(spec, wm, mat3_identity(), mat3_identity());
  const RotationOptimum opt = optimize_rotations(spec, mm, 6, 3);
  CHECK(opt.value >= at_identity - 1e-10);
  CHECK(opt.value == doctest::Approx(at_identity).epsilon(1e-6));
}

TEST_CASE("isotropic moments give zero optimum for order-1 specs") {
  SymmetricState s = framed_squeezed_state(10, 0.05);
  MixedMoments pure = split_state_moments(s, 0.0, Backend::Oracle, 2);
  MixedMoments noise = white_noise_moments(10, 0.0, pure);
  const RotationOptimum opt = optimize_rotations(WitnessSpec::s_criterion(), noise, 4, 7);
  CHECK(std::abs(opt.value) < 1e-9);
}

TEST_CASE("rotating the state does not change the optimum") {
  SymmetricState s = framed_squeezed_state(12, 0.04);
  SymmetricState r = rotate(rotate(s, Axis::Z, 0.9), Axis::Y, 0.4);
  const WitnessSpec spec = WitnessSpec::s_criterion();
  const double w1 = optimize_rotations(spec, split_state_moments(s, 0, Backend::Oracle, 2), 8, 1).value;
  const double w2 = optimize_rotations(spec, split_state_moments(r, 0, Backend::Oracle, 2), 8, 1).value;
  CHECK(w1 == doctest::Approx(w2).epsilon(1e-6));
}

TEST_CASE("robustness of S and D on a squeezed state") {
  SymmetricState s = framed_squeezed_state(20, 0.0058);

  RobustnessOptions opts;
  opts.backend = Backend::Oracle;
  RobustnessResult rs = robustness(WitnessSpec::s_criterion(), s, opts);
  CHECK(rs.violation);
  CHECK(rs.p_star < 1.0);
  CHECK(rs.p_star > 0.9);
  // invariant: p* W_opt = bound for order 1
  CHECK(rs.p_star * rs.witness_value_opt == doctest::Approx(rs.separable_bound).epsilon(1e-8));
  CHECK(rs.separable_bound == doctest::Approx(20.0 * 19.0 / 16.0).epsilon(1e-9));

  RobustnessOptions dopts = opts;
  dopts.use_bound_override = true;
  dopts.bound_override = 0.0;
  RobustnessResult rd = robustness(WitnessSpec::minus_d_criterion(), s, dopts);
  CHECK(rd.violation);
  CHECK(rd.noise_value == doctest::Approx(-4.0 * 20.0 * 25.0 / 48.0).epsilon(1e-12));
  // order-2 solution satisfies p W_opt + (1-p) W_noise = w
  CHECK(rd.p_star * rd.witness_value_opt + (1.0 - rd.p_star) * rd.noise_value ==
        doctest::Approx(0.0).epsilon(1e-9));

  // coherent state: no violation for either witness
  SymmetricState c = coherent_state_x(20);
  CHECK_FALSE(robustness(WitnessSpec::s_criterion(), c, opts).violation);
  CHECK_FALSE(robustness(WitnessSpec::minus_d_criterion(), c, dopts).violation);
}

TEST_CASE("D tolerates more white noise than S at chi t = 0.0058, N = 60") {
  SymmetricState s = framed_squeezed_state(60, 0.0058);
  RobustnessOptions opts;  // moment-map backend via Auto
  RobustnessResult rs = robustness(WitnessSpec::s_criterion(), s, opts);
  RobustnessOptions dopts = opts;
  dopts.use_bound_override = true;
  dopts.bound_override = 0.0;
  RobustnessResult rd = robustness(WitnessSpec::minus_d_criterion(), s, dopts);
  CHECK(rs.violation);
  CHECK(rd.violation);
  CHECK(rd.p_star < rs.p_star);
}

TEST_CASE("p_star invariances") {
  SymmetricState s = framed_squeezed_state(14, 0.03);
  MixedMoments mm = split_state_moments(s, 0.0, Backend::Oracle, 2);

  WitnessSpec spec = WitnessSpec::s_criterion();
  RobustnessOptions opts;
  const double p1 = robustness_from_moments(spec, mm, opts).p_star;
  const double p2 = robustness_from_moments(spec.scaled(3.7), mm, opts).p_star;
  CHECK(p1 == doctest::Approx(p2).epsilon(1e-9));

  // rotating the input state leaves p* unchanged within optimizer tolerance
  SymmetricState r = rotate(rotate(s, Axis::X, 0.7), Axis::Z, 1.3);
  MixedMoments mr = split_state_moments(r, 0.0, Backend::Oracle, 2);
  const double p3 = robustness_from_moments(spec, mr, opts).p_star;
  CHECK(std::abs(p1 - p3) < 1e-4);

  // order 2 with zero second-moment coefficients reduces to the order-1 formula
  WitnessSpec as2;
  as2.order = 2;
  as2.m = spec.m;
  const double p4 = robustness_from_moments(as2, mm, opts).p_star;
  CHECK(p4 == doctest::Approx(p1).epsilon(1e-9));
}

TEST_CASE("search determinism with one restart") {
  SymmetricState s = framed_squeezed_state(8, 0.1);
  SearchOptions opts;
  opts.restarts = 1;
  opts.seed = 5;
  opts.simplex_iterations = 40;
  RobustnessResult a = search_optimal(s, 1, opts);
  RobustnessResult b = search_optimal(s, 1, opts);
  CHECK(a.p_star == b.p_star);
  CHECK(a.spec.flat() == b.spec.flat());
}

TEST_CASE("order-1 symmetric search approaches the S robustness") {
  SymmetricState s = framed_squeezed_state(10, 0.08);
  RobustnessOptions ref_opts;
  ref_opts.backend = Backend::Oracle;
  const double p_s = robustness(WitnessSpec::s_criterion(), s, ref_opts).p_star;

  SearchOptions opts;
  opts.restarts = 24;
  opts.symmetric = true;
  opts.seed = 11;
  opts.threads = 2;
  opts.simplex_iterations = 120;
  RobustnessResult best = search_optimal(s, 1, opts);
  CHECK(best.p_star <= p_s + 1e-3);
  CHECK(best.p_star >= p_s - 5e-3);  // nothing substantially better should exist
}

TEST_SUITE_END();
