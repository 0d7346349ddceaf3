#include <doctest.h>

#include <chrono>
#include <cmath>

#include "spinsplit/moment_map.hpp"

using namespace spinsplit;

namespace {

SymmetricState random_symmetric(int n, Rng& rng) {
  SymmetricState s;
  s.n_atoms = n;
  s.amplitudes.resize(n + 1);
  for (auto& a : s.amplitudes) a = cplx(rng.normal(), rng.normal());
  const double nn = std::sqrt(s.norm2());
  for (auto& a : s.amplitudes) a /= nn;
  return s;
}

SymmetricState random_rotated_squeezed(int n, Rng& rng) {
  SymmetricState s = one_axis_twist(coherent_state_x(n), rng.uniform(0.0, 0.3));
  s = rotate(s, Axis::Z, rng.uniform(0.0, 2.0 * kPi));
  s = rotate(s, Axis::Y, rng.uniform(0.0, kPi));
  s = rotate(s, Axis::X, rng.uniform(0.0, 2.0 * kPi));
  return s;
}

}  // namespace

TEST_SUITE_BEGIN("moment_map");

TEST_CASE("presplit moments match collective_moment") {
  Rng rng(31);
  SymmetricState s = random_symmetric(7, rng);
  MomentTable table = presplit_moments(s, 4);
  CHECK(table.size() == 3 + 9 + 27 + 81);
  for (const Word& w :
       {word_from_string("y"), word_from_string("xz"), word_from_string("zzy"),
        word_from_string("xyzx")})
    CHECK(std::abs(table.at(w) - collective_moment(s, w)) < 1e-12);
}

TEST_CASE("kbody correlators of the coherent state") {
  SymmetricState s = coherent_state_x(10);
  KBodyCorrelators corr = kbody_from_collective(presplit_moments(s), 10);
  CHECK(corr.at(word_from_string("x")).real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(corr.at(word_from_string("y"))) < 1e-12);
  CHECK(std::abs(corr.at(word_from_string("zz"))) < 1e-12);
  // product state of x-aligned spins: <s_x s_x> = 1/4
  CHECK(corr.at(word_from_string("xx")).real() == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("two-body correlator bound") {
  Rng rng(37);
  for (int t = 0; t < 20; ++t) {
    SymmetricState s = random_symmetric(6, rng);
    KBodyCorrelators corr = kbody_from_collective(presplit_moments(s), 6);
    const double v = corr.at(word_from_string("zz")).real();
    CHECK(v >= -0.25 - 1e-10);
    CHECK(v <= 0.25 + 1e-10);
  }
}

TEST_CASE("round trip collective -> kbody -> collective") {
  Rng rng(41);
  for (int n : {4, 7, 12}) {
    SymmetricState s = random_symmetric(n, rng);
    MomentTable table = presplit_moments(s, 4);
    KBodyCorrelators corr = kbody_from_collective(table, n, 4);
    for (const auto& [w, v] : table)
      CHECK(std::abs(collective_from_kbody(w, corr) - v) < 1e-10);
  }
}

TEST_CASE("kbody rejects too-small N") {
  SymmetricState s = coherent_state_x(3);
  CHECK_THROWS_AS(kbody_from_collective(presplit_moments(s), 3, 4), std::invalid_argument);
}

TEST_CASE("postsplit closed identities") {
  Rng rng(43);
  for (int n : {4, 9, 15}) {
    SymmetricState s = random_symmetric(n, rng);
    MomentTable pre = presplit_moments(s, 4);
    KBodyCorrelators corr = kbody_from_collective(pre, n, 4);

    // <Jz^A Jz^B> = (<Jz^2> - N/4) / 4
    const cplx zz = postsplit_moment({word_from_string("z"), word_from_string("z")}, corr, n);
    CHECK(std::abs(zz - (pre.at(word_from_string("zz")) - 0.25 * n) / 4.0) < 1e-10);

    // S = (<Jx^2> + <Jy^2> - <Jz^2>)/4 - N/16
    const double s_val =
        postsplit_moment({word_from_string("x"), word_from_string("x")}, corr, n).real() +
        postsplit_moment({word_from_string("y"), word_from_string("y")}, corr, n).real() -
        postsplit_moment({word_from_string("z"), word_from_string("z")}, corr, n).real();
    const double s_pre = (pre.at(word_from_string("xx")).real() +
                          pre.at(word_from_string("yy")).real() -
                          pre.at(word_from_string("zz")).real()) /
                             4.0 -
                         n / 16.0;
    CHECK(s_val == doctest::Approx(s_pre).epsilon(1e-10));

    // D = N/4 + <Jz^2> - <Jx>  (so D >= 0 iff <Jz^2> >= <Jx> - N/4)
    const double d_val =
        postsplit_moment({word_from_string("yy"), {}}, corr, n).real() +
        postsplit_moment({{}, word_from_string("yy")}, corr, n).real() -
        2.0 * postsplit_moment({word_from_string("y"), word_from_string("y")}, corr, n).real() +
        postsplit_moment({word_from_string("zz"), {}}, corr, n).real() +
        postsplit_moment({{}, word_from_string("zz")}, corr, n).real() +
        2.0 * postsplit_moment({word_from_string("z"), word_from_string("z")}, corr, n).real() -
        postsplit_moment({word_from_string("x"), {}}, corr, n).real() -
        postsplit_moment({{}, word_from_string("x")}, corr, n).real();
    const double d_pre =
        0.25 * n + pre.at(word_from_string("zz")).real() - pre.at(word_from_string("x")).real();
    CHECK(d_val == doctest::Approx(d_pre).epsilon(1e-9));
  }
}

TEST_CASE("backend equivalence on random states") {
  Rng rng(47);
  const auto monomials = all_lcso_monomials(4);
  for (int n : {2, 3, 5, 8}) {
    for (int t = 0; t < 3; ++t) {
      SymmetricState s = random_rotated_squeezed(n, rng);
      FourModeState f = split_half(embed_in_A(s));
      MixedMoments oracle = all_lcso_moments(f, 4);
      MixedMoments mapped = postsplit_moments_table(s, 0.0, 4);
      double worst = 0.0;
      for (const auto& mono : monomials)
        worst = std::max(worst, std::abs(oracle.at(mono) - mapped.at(mono)));
      CHECK(worst < 1e-9);
    }
  }
}

TEST_CASE("total-spin identity") {
  Rng rng(53);
  const int n = 6;
  SymmetricState s = random_symmetric(n, rng);
  MomentTable pre = presplit_moments(s, 4);
  KBodyCorrelators corr = kbody_from_collective(pre, n, 4);
  for (const Word& w : {word_from_string("z"), word_from_string("xy"), word_from_string("zyx"),
                        word_from_string("xxzz")}) {
    cplx total(0.0);
    const int k = static_cast<int>(w.size());
    for (int mask = 0; mask < (1 << k); ++mask) {
      LcsoMonomial mono;
      for (int i = 0; i < k; ++i)
        ((mask >> i) & 1 ? mono.b : mono.a).push_back(w[i]);
      total += postsplit_moment(mono, corr, n);
    }
    CHECK(std::abs(total - pre.at(w)) < 1e-10);
  }
}

TEST_CASE("postsplit is linear in the correlator table") {
  Rng rng(59);
  const int n = 8;
  KBodyCorrelators c1 = kbody_from_collective(presplit_moments(random_symmetric(n, rng)), n);
  KBodyCorrelators c2 = kbody_from_collective(presplit_moments(random_symmetric(n, rng)), n);
  KBodyCorrelators sum = c1, zero = c1;
  for (auto& [k, v] : sum.values) v += c2.at(k);
  for (auto& [k, v] : zero.values) v = cplx(0.0);

  const LcsoMonomial mono{word_from_string("xy"), word_from_string("zx")};
  const cplx lhs = postsplit_moment(mono, sum, n);
  const cplx rhs = postsplit_moment(mono, c1, n) + postsplit_moment(mono, c2, n) -
                   postsplit_moment(mono, zero, n);
  CHECK(std::abs(lhs - rhs) < 1e-10);
}

TEST_CASE("phase damping: identity, z invariance, fock4 agreement") {
  Rng rng(61);
  const int n = 8;
  SymmetricState s = random_rotated_squeezed(n, rng);
  KBodyCorrelators corr = kbody_from_collective(presplit_moments(s), n);

  const LcsoMonomial zz{word_from_string("z"), word_from_string("z")};
  const LcsoMonomial xx{word_from_string("x"), word_from_string("x")};
  const LcsoMonomial mixed{word_from_string("xzy"), word_from_string("y")};

  for (const auto& m : {zz, xx, mixed})
    CHECK(std::abs(phase_damped_postsplit(m, corr, n, 0.0) - postsplit_moment(m, corr, n)) <
          1e-12);

  const double sigma = 0.31;
  CHECK(std::abs(phase_damped_postsplit(zz, corr, n, sigma) - postsplit_moment(zz, corr, n)) <
        1e-12);

  FourModeState f = split_half(embed_in_A(s));
  MixedMoments quad = phase_noise_moments(f, sigma, {zz, xx, mixed});
  CHECK(std::abs(phase_damped_postsplit(xx, corr, n, sigma) - quad.at(xx)) < 1e-9);
  CHECK(std::abs(phase_damped_postsplit(mixed, corr, n, sigma) - quad.at(mixed)) < 1e-9);
}

TEST_CASE("phase damping agrees with direct tensor quadrature on moments") {
  // Independent quadrature route: rotate the monomial's x/y components by
  // Gauss-Hermite node angles and average postsplit moments of the rotated
  // expansion.
  Rng rng(67);
  const int n = 7;
  SymmetricState s = random_rotated_squeezed(n, rng);
  KBodyCorrelators corr = kbody_from_collective(presplit_moments(s), n);
  const double sigma = 0.4;

  const LcsoMonomial mono{word_from_string("xy"), word_from_string("x")};

  std::vector<double> x, w;
  gauss_hermite(40, x, w);
  const double isp = 1.0 / std::sqrt(kPi);
  cplx avg(0.0);
  for (int ia = 0; ia < 40; ++ia) {
    const double ta = std::sqrt(2.0) * sigma * x[ia];
    for (int ib = 0; ib < 40; ++ib) {
      const double tb = std::sqrt(2.0) * sigma * x[ib];
      // expand each factor J_x -> cos t J_x - sin t J_y, J_y -> cos t J_y + sin t J_x
      struct Term {
        cplx c;
        LcsoMonomial m;
      };
      std::vector<Term> terms = {{cplx(1.0), LcsoMonomial{}}};
      auto extend = [&](Site site, Axis ax, double t) {
        std::vector<Term> next;
        for (const auto& term : terms) {
          auto push = [&](Axis a2, double c2) {
            Term nt = term;
            nt.c *= c2;
            (site == Site::A ? nt.m.a : nt.m.b).push_back(a2);
            next.push_back(nt);
          };
          if (ax == Axis::Z)
            push(Axis::Z, 1.0);
          else if (ax == Axis::X) {
            push(Axis::X, std::cos(t));
            push(Axis::Y, -std::sin(t));
          } else {
            push(Axis::Y, std::cos(t));
            push(Axis::X, std::sin(t));
          }
        }
        terms = std::move(next);
      };
      for (Axis a : mono.a) extend(Site::A, a, ta);
      for (Axis a : mono.b) extend(Site::B, a, tb);
      cplx val(0.0);
      for (const auto& term : terms) val += term.c * postsplit_moment(term.m, corr, n);
      avg += w[ia] * w[ib] * isp * isp * val;
    }
  }
  CHECK(std::abs(phase_damped_postsplit(mono, corr, n, sigma) - avg) < 1e-9);
}

TEST_CASE("N=500 full degree-4 table is fast") {
  SymmetricState s = one_axis_twist(coherent_state_x(500), 0.0058);
  const auto t0 = std::chrono::steady_clock::now();
  MixedMoments table = postsplit_moments_table(s, 0.01, 4);
  const auto t1 = std::chrono::steady_clock::now();
  const double secs = std::chrono::duration<double>(t1 - t0).count();
  CHECK(secs < 10.0);
  CHECK(table.values.size() == size_t(546 + 1));
  // sanity: Hermitian monomials real
  CHECK(std::abs(table.at({word_from_string("x"), word_from_string("x")}).imag()) < 1e-9);
}

TEST_SUITE_END();
