#include <doctest.h>

#include <cmath>

#include "spinsplit/noise_stats.hpp"

using namespace spinsplit;

TEST_SUITE_BEGIN("noise_stats");

TEST_CASE("noise config validation") {
  CHECK_THROWS_AS((NoiseConfig{1.2, 0.0, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((NoiseConfig{0.5, -0.1, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((NoiseConfig{0.5, 0.0, -1.0}.validate()), std::invalid_argument);
  NoiseConfig ok{0.99, 0.01, 2.0};
  ok.validate();
}

TEST_CASE("coarse graining corrections") {
  SymmetricState s = framed_squeezed_state(12, 0.05);
  MixedMoments mm = split_state_moments(s, 0.0, Backend::Oracle, 4);

  MixedMoments same = coarse_grain_moments(mm, 0.0);
  for (const auto& [k, val] : mm.values) CHECK(std::abs(same.at(k) - val) < 1e-14);

  const double sigma_c = 1.7;
  const double v = 0.5 * sigma_c * sigma_c;
  MixedMoments cg = coarse_grain_moments(mm, sigma_c);

  const LcsoMonomial first{word_from_string("x"), {}};
  const LcsoMonomial cross{word_from_string("y"), word_from_string("y")};
  const LcsoMonomial local2{word_from_string("zz"), {}};
  const LcsoMonomial local4{word_from_string("yyyy"), {}};
  const LcsoMonomial mixed4{word_from_string("yy"), word_from_string("yy")};

  CHECK(std::abs(cg.at(first) - mm.at(first)) < 1e-13);
  CHECK(std::abs(cg.at(cross) - mm.at(cross)) < 1e-13);
  CHECK(cg.at(local2).real() == doctest::Approx(mm.at(local2).real() + v).epsilon(1e-12));
  // (X + d)^4: X^4 + 6 v X^2 + 3 v^2
  CHECK(cg.at(local4).real() ==
        doctest::Approx(mm.at(local4).real() + 6.0 * v * mm.at({word_from_string("yy"), {}}).real() +
                        3.0 * v * v)
            .epsilon(1e-12));
  // (X+d)^2 (Y+d')^2: adds v<X^2> + v<Y^2> + v^2
  CHECK(cg.at(mixed4).real() ==
        doctest::Approx(mm.at(mixed4).real() + v * mm.at({word_from_string("yy"), {}}).real() +
                        v * mm.at({{}, word_from_string("yy")}).real() + v * v)
            .epsilon(1e-12));

  // additivity in sigma_c^2 for second moments
  MixedMoments cg2 = coarse_grain_moments(mm, 2.0 * sigma_c);
  const double d1 = cg.at(local2).real() - mm.at(local2).real();
  const double d2 = cg2.at(local2).real() - mm.at(local2).real();
  CHECK(d2 == doctest::Approx(4.0 * d1).epsilon(1e-12));
}

TEST_CASE("S value is insensitive to coarse graining") {
  SymmetricState s = framed_squeezed_state(16, 0.03);
  for (double sc : {0.0, 2.0, 10.0}) {
    NoisePipeline pipe = build_noise_pipeline(s, {1.0, 0.0, sc}, Backend::Oracle, 2);
    WitnessUnderNoise w = evaluate_s(pipe);
    NoisePipeline clean = build_noise_pipeline(s, {1.0, 0.0, 0.0}, Backend::Oracle, 2);
    CHECK(w.value == doctest::Approx(evaluate_s(clean).value).epsilon(1e-12));
    CHECK(w.threshold == doctest::Approx(16.0 * 15.0 / 16.0).epsilon(1e-12));
  }
}

TEST_CASE("D threshold shifts by -2 sigma_c^2") {
  SymmetricState s = framed_squeezed_state(16, 0.03);
  NoisePipeline pipe = build_noise_pipeline(s, {1.0, 0.0, 3.0}, Backend::Oracle, 2);
  WitnessUnderNoise w = evaluate_d(pipe);
  CHECK(w.threshold == doctest::Approx(-18.0).epsilon(1e-12));
}

TEST_CASE("witness values agree between backends under full noise") {
  SymmetricState s = framed_squeezed_state(12, 0.06);
  const NoiseConfig noise{0.97, 0.08, 1.3};
  NoisePipeline oracle = build_noise_pipeline(s, noise, Backend::Oracle, 4);
  NoisePipeline mapped = build_noise_pipeline(s, noise, Backend::MomentMap, 4);
  CHECK(std::abs(evaluate_s(oracle).value - evaluate_s(mapped).value) < 1e-9);
  CHECK(std::abs(evaluate_d(oracle).value - evaluate_d(mapped).value) < 1e-9);
  // saturation at zero noise on the coherent state
  SymmetricState c = coherent_state_x(12);
  NoisePipeline cp = build_noise_pipeline(c, {1.0, 0.0, 0.0}, Backend::Oracle, 2);
  CHECK(std::abs(evaluate_s(cp).value - evaluate_s(cp).threshold) < 1e-9);
  CHECK(std::abs(evaluate_d(cp).value - evaluate_d(cp).threshold) < 1e-9);
  CHECK_FALSE(evaluate_s(cp).violated);
  CHECK_FALSE(evaluate_d(cp).violated);
}

TEST_CASE("custom spec evaluation matches builtin S") {
  SymmetricState s = framed_squeezed_state(10, 0.08);
  NoisePipeline pipe = build_noise_pipeline(s, {1.0, 0.0, 0.0}, Backend::Oracle, 2);
  WitnessUnderNoise ws = evaluate_s(pipe);
  WitnessUnderNoise wc = evaluate_custom(pipe, WitnessSpec::s_criterion(), 24, 3);
  CHECK(wc.value == doctest::Approx(ws.value).epsilon(1e-10));
  CHECK(wc.threshold == doctest::Approx(ws.threshold).epsilon(1e-8));
}

TEST_CASE("estimator variances: deterministic outcomes at N=1") {
  SymmetricState one = coherent_state_x(1);
  NoisePipeline pipe = build_noise_pipeline(one, {1.0, 0.0, 0.0}, Backend::Oracle, 4);
  Vec3 var = estimator_variance(WitnessKind::S, pipe.measured);
  // a single atom sits in one well, so every cross product J_i^A J_i^B is 0
  for (int i = 0; i < 3; ++i) CHECK(std::abs(var[i]) < 1e-12);
}

TEST_CASE("estimator variances match Monte Carlo sampling") {
  SymmetricState s = framed_squeezed_state(10, 0.05);
  FourModeState f = split_half(embed_in_A(s));
  NoisePipeline pipe = build_noise_pipeline(s, {1.0, 0.0, 0.0}, Backend::Oracle, 4);

  const Vec3 var_s = estimator_variance(WitnessKind::S, pipe.measured);
  const int runs = 200000;
  const Axis axes[3] = {Axis::X, Axis::Y, Axis::Z};
  for (int i = 0; i < 3; ++i) {
    auto rec = sample_measurements(f, {axes[i], axes[i]}, runs, 101 + i);
    double m1 = 0.0, m2 = 0.0, m4 = 0.0;
    for (const auto& r : rec) {
      const double x = r.jz_a() * r.jz_b();
      m1 += x;
      m2 += x * x;
      m4 += x * x * x * x;
    }
    m1 /= runs;
    m2 /= runs;
    m4 /= runs;
    const double emp_var = m2 - m1 * m1;
    // std error of the sample variance ~ sqrt((m4 - m2^2)/runs)
    const double se = std::sqrt(std::max(0.0, m4 - m2 * m2) / runs);
    CHECK(std::abs(emp_var - var_s[i]) < 5.0 * se + 1e-9);
  }

  // D settings: Ybar = (Jy^A - Jy^B)^2
  const Vec3 var_d = estimator_variance(WitnessKind::D, pipe.measured);
  auto rec = sample_measurements(f, {Axis::Y, Axis::Y}, runs, 202);
  double m1 = 0.0, m2 = 0.0, m4 = 0.0;
  for (const auto& r : rec) {
    const double x = std::pow(r.jz_a() - r.jz_b(), 2);
    m1 += x;
    m2 += x * x;
    m4 += x * x * x * x;
  }
  m1 /= runs;
  m2 /= runs;
  m4 /= runs;
  const double se = std::sqrt(std::max(0.0, m4 - m2 * m2) / runs);
  CHECK(std::abs((m2 - m1 * m1) - var_d[1]) < 5.0 * se + 1e-9);
}

TEST_CASE("coarse graining increases the D z-variance monotonically") {
  SymmetricState s = framed_squeezed_state(12, 0.05);
  double prev = -1.0;
  for (double sc : {0.0, 1.0, 2.0, 4.0}) {
    NoisePipeline pipe = build_noise_pipeline(s, {1.0, 0.0, sc}, Backend::Oracle, 4);
    const double vz = estimator_variance(WitnessKind::D, pipe.measured)[2];
    CHECK(vz > prev);
    prev = vz;
  }
}

TEST_CASE("required runs") {
  SymmetricState s = framed_squeezed_state(14, 0.05);
  EstimatorReport rep = required_runs(WitnessKind::S, nullptr, s, {1.0, 0.0, 0.0},
                                      Backend::Oracle, 3.0);
  REQUIRE(rep.witness.violated);
  REQUIRE(rep.required_runs.has_value());
  CHECK(*rep.required_runs >= 1);

  // k-sigma scaling: N_m grows by k^2
  EstimatorReport rep6 = required_runs(WitnessKind::S, nullptr, s, {1.0, 0.0, 0.0},
                                       Backend::Oracle, 6.0);
  CHECK(*rep6.required_runs ==
        doctest::Approx(4.0 * *rep.required_runs).epsilon(2.0 / *rep.required_runs));

  // no violation on the coherent state
  EstimatorReport none = required_runs(WitnessKind::S, nullptr, coherent_state_x(14),
                                       {1.0, 0.0, 0.0}, Backend::Oracle, 3.0);
  CHECK_FALSE(none.required_runs.has_value());

  // 1/gap^2 scaling, checked through the formula's ingredients
  const double gap = rep.witness.margin;
  const double var_sum = rep.setting_variance[0] + rep.setting_variance[1] + rep.setting_variance[2];
  CHECK(*rep.required_runs == static_cast<long long>(std::ceil(9.0 * var_sum / (gap * gap) - 1e-12)));
}

TEST_CASE("phase noise threshold: S and D vanish together at oracle scale") {
  SymmetricState s = framed_squeezed_state(20, 0.02);
  const double sig_s = phase_noise_threshold(WitnessKind::S, s, {1.0, 0.0, 0.0}, Backend::MomentMap);
  const double sig_d = phase_noise_threshold(WitnessKind::D, s, {1.0, 0.0, 0.0}, Backend::MomentMap);
  CHECK(sig_s > 0.0);
  CHECK(sig_d > 0.0);
  // margins really change sign there
  NoisePipeline below = build_noise_pipeline(s, {1.0, sig_s * 0.99, 0.0}, Backend::MomentMap, 2);
  NoisePipeline above = build_noise_pipeline(s, {1.0, sig_s * 1.01, 0.0}, Backend::MomentMap, 2);
  CHECK(evaluate_s(below).violated);
  CHECK_FALSE(evaluate_s(above).violated);
  (void)sig_d;
}

TEST_SUITE_END();
