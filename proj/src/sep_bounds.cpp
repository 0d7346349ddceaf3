#include "spinsplit/sep_bounds.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace spinsplit {

WitnessSpec WitnessSpec::s_criterion() {
  WitnessSpec s;
  s.order = 1;
  s.m[0][0] = 1.0;
  s.m[1][1] = 1.0;
  s.m[2][2] = -1.0;
  return s;
}

WitnessSpec WitnessSpec::minus_d_criterion() {
  // D = <(Jy^A - Jy^B)^2> + <(Jz^A + Jz^B)^2> - <Jx^A + Jx^B>; stored as -D.
  WitnessSpec s;
  s.order = 2;
  s.m[1][1] = 2.0;
  s.m[2][2] = -2.0;
  s.alpha_bar[0] = 1.0;
  s.alpha[0] = 1.0;
  s.alpha2_bar = {0.0, -1.0, -1.0};
  s.alpha2 = {0.0, -1.0, -1.0};
  return s;
}

std::vector<double> WitnessSpec::flat() const {
  std::vector<double> v;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) v.push_back(m[i][j]);
  for (int i = 0; i < 3; ++i) v.push_back(alpha_bar[i]);
  for (int i = 0; i < 3; ++i) v.push_back(alpha[i]);
  if (order == 2) {
    for (int i = 0; i < 3; ++i) v.push_back(alpha2_bar[i]);
    for (int i = 0; i < 3; ++i) v.push_back(alpha2[i]);
  }
  return v;
}

WitnessSpec WitnessSpec::from_flat(const std::vector<double>& v, int order) {
  if (order != 1 && order != 2) throw std::invalid_argument("WitnessSpec: order must be 1 or 2");
  const size_t want = order == 1 ? 15 : 21;
  if (v.size() != want) throw std::invalid_argument("WitnessSpec: wrong flat vector length");
  WitnessSpec s;
  s.order = order;
  size_t k = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s.m[i][j] = v[k++];
  for (int i = 0; i < 3; ++i) s.alpha_bar[i] = v[k++];
  for (int i = 0; i < 3; ++i) s.alpha[i] = v[k++];
  if (order == 2) {
    for (int i = 0; i < 3; ++i) s.alpha2_bar[i] = v[k++];
    for (int i = 0; i < 3; ++i) s.alpha2[i] = v[k++];
  }
  return s;
}

double WitnessSpec::norm() const {
  double acc = 0.0;
  for (double x : flat()) acc += x * x;
  return std::sqrt(acc);
}

WitnessSpec WitnessSpec::scaled(double factor) const {
  WitnessSpec s = *this;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) s.m[i][j] *= factor;
    s.alpha_bar[i] *= factor;
    s.alpha[i] *= factor;
    s.alpha2_bar[i] *= factor;
    s.alpha2[i] *= factor;
  }
  return s;
}

bool WitnessSpec::is_party_symmetric(double tol) const {
  for (int i = 0; i < 3; ++i) {
    if (std::abs(alpha_bar[i] - alpha[i]) > tol) return false;
    if (order == 2 && std::abs(alpha2_bar[i] - alpha2[i]) > tol) return false;
    for (int j = 0; j < 3; ++j)
      if (std::abs(m[i][j] - m[j][i]) > tol) return false;
  }
  return true;
}

void WitnessSpec::validate() const {
  double acc = 0.0;
  for (double x : flat()) {
    if (!std::isfinite(x)) throw std::invalid_argument("WitnessSpec: non-finite entry");
    acc += std::abs(x);
  }
  if (acc == 0.0) throw std::invalid_argument("WitnessSpec: all-zero coefficient vector");
}

double witness_objective(const WitnessSpec& spec, const Vec3& u_a, const Vec3& u_b,
                         const Vec3& s_a, const Vec3& s_b) {
  double val = dot(u_a, mat_vec(spec.m, u_b)) + dot(spec.alpha_bar, u_a) + dot(spec.alpha, u_b);
  if (spec.order == 2) val += dot(spec.alpha2_bar, s_a) + dot(spec.alpha2, s_b);
  return val;
}

namespace detail {

double alternating_ascent(const WitnessSpec& spec, double r_a, double r_b, Vec3& u, Vec3& v,
                          Rng& rng, std::vector<double>* trace) {
  auto objective = [&] {
    return dot(u, mat_vec(spec.m, v)) + dot(spec.alpha_bar, u) + dot(spec.alpha, v);
  };
  auto step = [&](Vec3& target, double radius, const Vec3& gradient) {
    const double g = norm(gradient);
    if (g < 1e-300) {
      // degenerate gradient: keep the point, nudge once to escape the saddle
      Vec3 pert{rng.normal(), rng.normal(), rng.normal()};
      const double pn = norm(pert);
      if (pn > 0.0 && radius > 0.0) target = (radius / pn) * pert;
      return;
    }
    target = (radius / g) * gradient;
  };
  if (r_a <= 0.0) u = Vec3{0, 0, 0};
  if (r_b <= 0.0) v = Vec3{0, 0, 0};

  double prev = objective();
  if (trace) trace->push_back(prev);
  for (int iter = 0; iter < 500; ++iter) {
    if (r_a > 0.0) step(u, r_a, mat_vec(spec.m, v) + spec.alpha_bar);
    if (r_b > 0.0) step(v, r_b, mat_tvec(spec.m, u) + spec.alpha);
    const double cur = objective();
    if (trace) trace->push_back(cur);
    if (std::abs(cur - prev) < 1e-12 * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  return prev;
}

namespace {

// Fixed constraint planes of the s-polytope (A s <= b): the sum cap, the
// three lower bounds and the three pair bounds. Only b depends on u, so the
// nonsingular 3x3 triple inverses are tabulated once.
constexpr double kLpRows[7][3] = {{1, 1, 1},   {-1, 0, 0},  {0, -1, 0}, {0, 0, -1},
                                  {-1, -1, 0}, {-1, 0, -1}, {0, -1, -1}};

struct LpVertexBasis {
  int rows[3];
  double inv[3][3];  // inverse of the selected row triple
};

const std::vector<LpVertexBasis>& lp_vertex_bases() {
  static const std::vector<LpVertexBasis> bases = [] {
    std::vector<LpVertexBasis> out;
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 6; ++j)
        for (int k = j + 1; k < 7; ++k) {
          const double* r0 = kLpRows[i];
          const double* r1 = kLpRows[j];
          const double* r2 = kLpRows[k];
          const double det = r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) -
                             r0[1] * (r1[0] * r2[2] - r1[2] * r2[0]) +
                             r0[2] * (r1[0] * r2[1] - r1[1] * r2[0]);
          if (std::abs(det) < 1e-12) continue;
          LpVertexBasis b{};
          b.rows[0] = i;
          b.rows[1] = j;
          b.rows[2] = k;
          const double id = 1.0 / det;
          b.inv[0][0] = (r1[1] * r2[2] - r1[2] * r2[1]) * id;
          b.inv[0][1] = (r0[2] * r2[1] - r0[1] * r2[2]) * id;
          b.inv[0][2] = (r0[1] * r1[2] - r0[2] * r1[1]) * id;
          b.inv[1][0] = (r1[2] * r2[0] - r1[0] * r2[2]) * id;
          b.inv[1][1] = (r0[0] * r2[2] - r0[2] * r2[0]) * id;
          b.inv[1][2] = (r0[2] * r1[0] - r0[0] * r1[2]) * id;
          b.inv[2][0] = (r1[0] * r2[1] - r1[1] * r2[0]) * id;
          b.inv[2][1] = (r0[1] * r2[0] - r0[0] * r2[1]) * id;
          b.inv[2][2] = (r0[0] * r1[1] - r0[1] * r1[0]) * id;
          out.push_back(b);
        }
    return out;
  }();
  return bases;
}

}  // namespace

double lp_max_s(const Vec3& c, const Vec3& u, double n_half, Vec3& s_out) {
  const double smax = n_half * (n_half + 1.0);
  const Vec3 l{u[0] * u[0], u[1] * u[1], u[2] * u[2]};
  const double b[7] = {smax,
                       -l[0],
                       -l[1],
                       -l[2],
                       -(l[0] + l[1] + std::abs(u[2])),
                       -(l[0] + l[2] + std::abs(u[1])),
                       -(l[1] + l[2] + std::abs(u[0]))};

  const double scale = std::max(1.0, smax);
  const double tol = 1e-11 * scale;
  double best = -1e300;
  Vec3 best_s{};
  for (const LpVertexBasis& vb : lp_vertex_bases()) {
    const double r0 = b[vb.rows[0]], r1 = b[vb.rows[1]], r2 = b[vb.rows[2]];
    Vec3 s;
    s[0] = vb.inv[0][0] * r0 + vb.inv[0][1] * r1 + vb.inv[0][2] * r2;
    s[1] = vb.inv[1][0] * r0 + vb.inv[1][1] * r1 + vb.inv[1][2] * r2;
    s[2] = vb.inv[2][0] * r0 + vb.inv[2][1] * r1 + vb.inv[2][2] * r2;
    const double val = dot(c, s);
    if (val <= best) continue;  // feasibility is the expensive part
    bool feasible = true;
    for (int row = 0; row < 7 && feasible; ++row)
      if (kLpRows[row][0] * s[0] + kLpRows[row][1] * s[1] + kLpRows[row][2] * s[2] >
          b[row] + tol)
        feasible = false;
    if (feasible) {
      best = val;
      best_s = s;
    }
  }
  if (best < -1e299) {
    // Should not happen for ||u|| <= n/2; fall back to a feasible allocation.
    Vec3 e{0.5 * (std::abs(u[1]) + std::abs(u[2])), 0.5 * (std::abs(u[0]) + std::abs(u[2])),
           0.5 * (std::abs(u[0]) + std::abs(u[1]))};
    best_s = l + e;
    best = dot(c, best_s);
  }
  s_out = best_s;
  return best;
}

bool second_order_feasible(const Vec3& u, const Vec3& s, double n_half, double tol) {
  if (norm(u) > n_half + tol) return false;
  if (s[0] + s[1] + s[2] > n_half * (n_half + 1.0) + tol) return false;
  for (int i = 0; i < 3; ++i)
    if (s[i] < u[i] * u[i] - tol) return false;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    if ((s[i] - u[i] * u[i]) + (s[j] - u[j] * u[j]) < std::abs(u[k]) - tol) return false;
  }
  return true;
}

}  // namespace detail

SeparableBound bound_first_order(const WitnessSpec& spec, double r_a, double r_b, int restarts,
                                 std::uint64_t seed) {
  spec.validate();
  if (spec.order != 1) throw std::invalid_argument("bound_first_order: spec.order must be 1");
  if (r_a < 0.0 || r_b < 0.0) throw std::invalid_argument("bound_first_order: negative radius");
  restarts = std::max(1, restarts);

  Rng base(seed);
  SeparableBound best;
  best.value = -1e300;
  for (int r = 0; r < restarts; ++r) {
    Vec3 v = r_b * fibonacci_sphere_point(r, restarts);
    Vec3 u{0, 0, 0};
    Rng rng = base.substream(r);
    const double val = detail::alternating_ascent(spec, r_a, r_b, u, v, rng);
    if (val > best.value) {
      best.value = val;
      best.u_a = u;
      best.u_b = v;
    }
  }
  return best;
}

namespace {

// 26-direction stencil (axes, face and corner diagonals): the inner LP value
// has kinks in u, where axis-only probes stall.
const std::vector<Vec3>& stencil26() {
  static const std::vector<Vec3> dirs = [] {
    std::vector<Vec3> d;
    for (int ix = -1; ix <= 1; ++ix)
      for (int iy = -1; iy <= 1; ++iy)
        for (int iz = -1; iz <= 1; ++iz) {
          if (ix == 0 && iy == 0 && iz == 0) continue;
          Vec3 v{static_cast<double>(ix), static_cast<double>(iy), static_cast<double>(iz)};
          d.push_back((1.0 / norm(v)) * v);
        }
    return d;
  }();
  return dirs;
}

// Projected pattern search of g over the ball of the given radius.
template <typename F>
double pattern_search_ball(const F& g, Vec3& x, double radius, double scale,
                           double step_floor = 1e-6) {
  auto project = [&](Vec3 p) {
    const double n = norm(p);
    if (n > radius && n > 0.0) p = (radius / n) * p;
    return p;
  };
  x = project(x);
  double fx = g(x);
  double step = std::max(radius * 0.5, 1e-6);
  const double min_step = std::max(1e-8, step_floor * radius);
  (void)scale;
  while (step > min_step) {
    bool improved = false;
    for (const Vec3& dir : stencil26()) {
      Vec3 probe = project(x + step * dir);
      const double fp = g(probe);
      if (fp > fx + 1e-15) {
        fx = fp;
        x = probe;
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
  return fx;
}

}  // namespace

SeparableBound bound_second_order(const WitnessSpec& spec, int n_a, int n_b, int restarts,
                                  std::uint64_t seed) {
  spec.validate();
  if (spec.order != 2) throw std::invalid_argument("bound_second_order: spec.order must be 2");
  if (n_a < 0 || n_b < 0) throw std::invalid_argument("bound_second_order: negative atom number");
  restarts = std::max(1, restarts);
  (void)seed;  // search is fully deterministic; seed kept for interface parity

  const double ra = 0.5 * n_a, rb = 0.5 * n_b;
  const double scale = std::max({1.0, ra * (ra + 1.0), rb * (rb + 1.0)});

  Vec3 sa{}, sb{};
  auto f_a = [&](const Vec3& ua) { return detail::lp_max_s(spec.alpha2_bar, ua, ra, sa); };
  auto f_b = [&](const Vec3& ub) { return detail::lp_max_s(spec.alpha2, ub, rb, sb); };

  auto total = [&](const Vec3& ua, const Vec3& ub) {
    return dot(ua, mat_vec(spec.m, ub)) + dot(spec.alpha_bar, ua) + dot(spec.alpha, ub) +
           f_a(ua) + f_b(ub);
  };

  // Global seeding: per-site candidate points with exact inner-LP values,
  // then every pair ranked by the resulting closed objective. The best pairs
  // become the starts of the projected local searches. Low restart budgets
  // shrink the scan as well (caching layers re-evaluate winners strongly).
  const bool cheap = restarts < 8;
  const int scan_dirs = cheap ? 24 : 48;
  auto site_candidates = [&](double radius) {
    std::vector<Vec3> pts;
    pts.push_back({0, 0, 0});
    for (int d = 0; d < 3; ++d)
      for (double sgn : {1.0, -1.0}) {
        Vec3 c{0, 0, 0};
        c[d] = sgn * radius;
        pts.push_back(c);
      }
    for (int r = 0; r < scan_dirs; ++r)
      for (double f : {1.0, 0.6, 0.3})
        pts.push_back((f * radius) * fibonacci_sphere_point(r, scan_dirs));
    return pts;
  };
  const std::vector<Vec3> pa = site_candidates(ra), pb = site_candidates(rb);
  std::vector<double> lpa(pa.size()), lpb(pb.size());
  Vec3 sdump{};
  for (size_t i = 0; i < pa.size(); ++i) lpa[i] = detail::lp_max_s(spec.alpha2_bar, pa[i], ra, sdump);
  for (size_t i = 0; i < pb.size(); ++i) lpb[i] = detail::lp_max_s(spec.alpha2, pb[i], rb, sdump);

  struct Seed {
    double value = -1e300;
    Vec3 ua{}, ub{};
  };
  // keep only the best few seeds per pass instead of materializing the full
  // candidate product (the scan runs once per bound evaluation)
  const int keep = std::min(8 * restarts + 8, 128);
  std::vector<Seed> seeds(keep);
  for (size_t i = 0; i < pa.size(); ++i) {
    const Vec3 mua = mat_tvec(spec.m, pa[i]);
    const double base_a = dot(spec.alpha_bar, pa[i]) + lpa[i];
    for (size_t j = 0; j < pb.size(); ++j) {
      const double v = base_a + dot(mua, pb[j]) + dot(spec.alpha, pb[j]) + lpb[j];
      if (v <= seeds.back().value) continue;
      Seed s{v, pa[i], pb[j]};
      auto pos = std::upper_bound(seeds.begin(), seeds.end(), v,
                                  [](double val, const Seed& x) { return val > x.value; });
      seeds.pop_back();
      seeds.insert(pos, s);
    }
  }

  // polish the top seeds, skipping near-duplicates
  SeparableBound best;
  best.value = -1e300;
  best.n_a = n_a;
  best.n_b = n_b;
  std::vector<std::pair<Vec3, Vec3>> taken;
  const double dedupe = 0.05 * (ra + rb + 1.0);
  int polished = 0;
  for (const Seed& seed : seeds) {
    if (polished >= restarts) break;
    if (seed.value < -1e299) break;
    bool dup = false;
    for (const auto& [qa, qb] : taken)
      if (norm(seed.ua - qa) + norm(seed.ub - qb) < dedupe) dup = true;
    if (dup) continue;
    taken.push_back({seed.ua, seed.ub});
    ++polished;

    Vec3 ua = seed.ua, ub = seed.ub;
    double va_cur = f_a(ua), vb_cur = f_b(ub);
    double cur = total(ua, ub);
    const double round_tol = (cheap ? 1e-5 : 1e-9) * scale;
    const double step_floor = cheap ? 3e-4 : 1e-6;
    const int max_rounds = cheap ? 3 : 12;
    for (int round = 0; round < max_rounds; ++round) {
      const double before = cur;
      // only the moving site's LP is re-solved per probe
      auto ga = [&](const Vec3& p) {
        Vec3 st{};
        return dot(p, mat_vec(spec.m, ub)) + dot(spec.alpha_bar, p) + dot(spec.alpha, ub) +
               detail::lp_max_s(spec.alpha2_bar, p, ra, st) + vb_cur;
      };
      pattern_search_ball(ga, ua, ra, scale, step_floor);
      va_cur = f_a(ua);
      auto gb = [&](const Vec3& p) {
        Vec3 st{};
        return dot(ua, mat_vec(spec.m, p)) + dot(spec.alpha_bar, ua) + dot(spec.alpha, p) +
               detail::lp_max_s(spec.alpha2, p, rb, st) + va_cur;
      };
      cur = pattern_search_ball(gb, ub, rb, scale, step_floor);
      vb_cur = f_b(ub);
      if (cur - before < round_tol) break;
    }
    if (cur > best.value) {
      best.value = cur;
      best.u_a = ua;
      best.u_b = ub;
    }
  }
  f_a(best.u_a);
  f_b(best.u_b);
  best.s_a = sa;
  best.s_b = sb;
  return best;
}

double bound_binomial(const WitnessSpec& spec, int n_atoms, double tail_eps, int restarts,
                      std::uint64_t seed) {
  spec.validate();
  if (n_atoms < 1) throw std::invalid_argument("bound_binomial: n_atoms must be >= 1");
  const bool symmetric = spec.is_party_symmetric();

  std::map<std::pair<int, int>, double> cache;
  Rng base(seed);
  double acc = 0.0;
  for (int na = 0; na <= n_atoms; ++na) {
    const double w = binomial_weight(n_atoms, na);
    if (w < tail_eps) continue;
    const int nb = n_atoms - na;
    std::pair<int, int> key{na, nb};
    if (symmetric && na > nb) key = {nb, na};
    auto it = cache.find(key);
    double val;
    if (it != cache.end()) {
      val = it->second;
    } else {
      const std::uint64_t sub = base.substream(static_cast<std::uint64_t>(key.first)).seed();
      val = spec.order == 1
                ? bound_first_order(spec, 0.5 * key.first, 0.5 * key.second, restarts, sub).value
                : bound_second_order(spec, key.first, key.second, restarts, sub).value;
      cache[key] = val;
    }
    acc += w * val;
  }
  return acc;
}

}  // namespace spinsplit
