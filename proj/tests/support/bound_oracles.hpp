// Test-only brute-force separable-bound oracles (grid searches, kept
// independent of the alternating-ascent / pattern-search implementations).
#pragma once

#include <cmath>
#include <vector>

#include "spinsplit/sep_bounds.hpp"

namespace oracles {

using spinsplit::kPi;
using spinsplit::Vec3;
using spinsplit::WitnessSpec;
using spinsplit::operator+;
using spinsplit::operator-;
using spinsplit::operator*;

inline Vec3 sphere_dir(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

// Dense grid search over both spheres with two refinement passes around the
// best cell. Mesh is in degrees.
inline double first_order_grid_bound(const WitnessSpec& spec, double r_a, double r_b,
                                     double mesh_deg = 2.0) {
  auto value = [&](const Vec3& ua, const Vec3& ub) {
    return spinsplit::dot(ua, spinsplit::mat_vec(spec.m, ub)) + spinsplit::dot(spec.alpha_bar, ua) +
           spinsplit::dot(spec.alpha, ub);
  };

  double t_a = 0, p_a = 0, t_b = 0, p_b = 0;
  double best = -1e300;
  double step = mesh_deg * kPi / 180.0;
  double lo_ta = 0, hi_ta = kPi, lo_pa = 0, hi_pa = 2 * kPi;
  double lo_tb = 0, hi_tb = kPi, lo_pb = 0, hi_pb = 2 * kPi;

  for (int pass = 0; pass < 3; ++pass) {
    best = -1e300;
    for (double ta = lo_ta; ta <= hi_ta + 1e-12; ta += step)
      for (double pa = lo_pa; pa <= hi_pa + 1e-12; pa += step) {
        const Vec3 ua = r_a * sphere_dir(ta, pa);
        for (double tb = lo_tb; tb <= hi_tb + 1e-12; tb += step)
          for (double pb = lo_pb; pb <= hi_pb + 1e-12; pb += step) {
            const double v = value(ua, r_b * sphere_dir(tb, pb));
            if (v > best) {
              best = v;
              t_a = ta;
              p_a = pa;
              t_b = tb;
              p_b = pb;
            }
          }
      }
    lo_ta = t_a - 2 * step;
    hi_ta = t_a + 2 * step;
    lo_pa = p_a - 2 * step;
    hi_pa = p_a + 2 * step;
    lo_tb = t_b - 2 * step;
    hi_tb = t_b + 2 * step;
    lo_pb = p_b - 2 * step;
    hi_pb = p_b + 2 * step;
    step /= 10.0;
  }
  return best;
}

// Max of c2 . s over the discretized order-2 s-set for fixed u, via the
// excess grid e_i = s_i - u_i^2 with two refinement passes. Returns -1e300
// when u itself is infeasible.
inline double site_grid_max(const Vec3& u, const Vec3& c2, double n_half) {
  const double smax = n_half * (n_half + 1.0);
  const Vec3 l{u[0] * u[0], u[1] * u[1], u[2] * u[2]};
  const double budget = smax - (l[0] + l[1] + l[2]);
  if (budget < -1e-12) return -1e300;
  const Vec3 need{std::abs(u[0]), std::abs(u[1]), std::abs(u[2])};

  const int grid = 20;
  double best = -1e300;
  Vec3 best_e{0, 0, 0};
  // Repair a grid candidate onto the exact feasible set: lift pair-constraint
  // deficits, then reject if the sum budget is exceeded. Keeps the oracle a
  // strict lower bound on the true maximum.
  auto repaired = [&](Vec3 e) -> std::pair<bool, Vec3> {
    for (int i = 0; i < 3; ++i) e[i] = std::max(e[i], 0.0);
    for (int pass = 0; pass < 4; ++pass) {
      for (int k = 0; k < 3; ++k) {
        const int i = (k + 1) % 3, j = (k + 2) % 3;
        const double deficit = need[k] - (e[i] + e[j]);
        if (deficit > 0) {
          e[i] += 0.5 * deficit;
          e[j] += 0.5 * deficit;
        }
      }
    }
    for (int k = 0; k < 3; ++k) {
      const int i = (k + 1) % 3, j = (k + 2) % 3;
      if (e[i] + e[j] < need[k] - 1e-12) return {false, e};
    }
    if (e[0] + e[1] + e[2] > budget + 1e-12) return {false, e};
    return {true, e};
  };
  auto scan = [&](const Vec3& lo, const Vec3& hi) {
    const Vec3 d{(hi[0] - lo[0]) / grid, (hi[1] - lo[1]) / grid, (hi[2] - lo[2]) / grid};
    for (int i0 = 0; i0 <= grid; ++i0)
      for (int i1 = 0; i1 <= grid; ++i1)
        for (int i2 = 0; i2 <= grid; ++i2) {
          const auto [ok, e] =
              repaired(Vec3{lo[0] + i0 * d[0], lo[1] + i1 * d[1], lo[2] + i2 * d[2]});
          if (!ok) continue;
          const double v = c2[0] * (l[0] + e[0]) + c2[1] * (l[1] + e[1]) + c2[2] * (l[2] + e[2]);
          if (v > best) {
            best = v;
            best_e = e;
          }
        }
  };
  scan({0, 0, 0}, {budget, budget, budget});
  double span = budget / grid;
  for (int pass = 0; pass < 2 && best > -1e299; ++pass) {
    scan({std::max(0.0, best_e[0] - span), std::max(0.0, best_e[1] - span),
          std::max(0.0, best_e[2] - span)},
         {best_e[0] + span, best_e[1] + span, best_e[2] + span});
    span = 2.5 * span / grid;
  }
  return best;
}

// Brute force over discretized feasible sets for the order-2 bound: coarse
// product scan over both u-balls followed by alternating box refinement.
inline double second_order_discretized_bound(const WitnessSpec& spec, int n_a, int n_b) {
  const double ra = 0.5 * n_a, rb = 0.5 * n_b;
  auto pair_value = [&](const Vec3& ua, const Vec3& ub) {
    const double va = site_grid_max(ua, spec.alpha2_bar, ra);
    const double vb = site_grid_max(ub, spec.alpha2, rb);
    if (va < -1e299 || vb < -1e299) return -1e300;
    return spinsplit::dot(ua, spinsplit::mat_vec(spec.m, ub)) +
           spinsplit::dot(spec.alpha_bar, ua) + spinsplit::dot(spec.alpha, ub) + va + vb;
  };

  // coarse product scan
  const int dirs = 64, radii = 4;
  std::vector<Vec3> ua_pts{{0, 0, 0}}, ub_pts{{0, 0, 0}};
  for (int d = 0; d < dirs; ++d)
    for (int r = 1; r <= radii; ++r) {
      const double f = static_cast<double>(r) / radii;
      ua_pts.push_back((f * ra) * spinsplit::fibonacci_sphere_point(d, dirs));
      ub_pts.push_back((f * rb) * spinsplit::fibonacci_sphere_point(d, dirs));
    }
  std::vector<double> va(ua_pts.size()), vb(ub_pts.size());
  for (size_t i = 0; i < ua_pts.size(); ++i) va[i] = site_grid_max(ua_pts[i], spec.alpha2_bar, ra);
  for (size_t i = 0; i < ub_pts.size(); ++i) vb[i] = site_grid_max(ub_pts[i], spec.alpha2, rb);

  double best = -1e300;
  Vec3 bua{0, 0, 0}, bub{0, 0, 0};
  for (size_t i = 0; i < ua_pts.size(); ++i) {
    if (va[i] < -1e299) continue;
    for (size_t j = 0; j < ub_pts.size(); ++j) {
      if (vb[j] < -1e299) continue;
      const double v = spinsplit::dot(ua_pts[i], spinsplit::mat_vec(spec.m, ub_pts[j])) +
                       spinsplit::dot(spec.alpha_bar, ua_pts[i]) +
                       spinsplit::dot(spec.alpha, ub_pts[j]) + va[i] + vb[j];
      if (v > best) {
        best = v;
        bua = ua_pts[i];
        bub = ub_pts[j];
      }
    }
  }

  // alternating box refinement around the winner; the fixed site's
  // contribution is cached so each candidate costs one grid maximization
  auto refine_site = [&](Vec3& u, const Vec3& other, bool first_site, double h, double radius) {
    const Vec3 other_c2 = first_site ? spec.alpha2 : spec.alpha2_bar;
    const double other_r = first_site ? rb : ra;
    const double other_val = site_grid_max(other, other_c2, other_r);
    if (other_val < -1e299) return;
    const int steps = 5;
    Vec3 center = u;
    for (int i0 = -steps; i0 <= steps; ++i0)
      for (int i1 = -steps; i1 <= steps; ++i1)
        for (int i2 = -steps; i2 <= steps; ++i2) {
          Vec3 cand{center[0] + i0 * h / steps, center[1] + i1 * h / steps,
                    center[2] + i2 * h / steps};
          const double nn = spinsplit::norm(cand);
          if (nn > radius) cand = (radius / nn) * cand;
          const double vown =
              site_grid_max(cand, first_site ? spec.alpha2_bar : spec.alpha2, radius);
          if (vown < -1e299) continue;
          const Vec3& ua_c = first_site ? cand : other;
          const Vec3& ub_c = first_site ? other : cand;
          const double v = spinsplit::dot(ua_c, spinsplit::mat_vec(spec.m, ub_c)) +
                           spinsplit::dot(spec.alpha_bar, ua_c) +
                           spinsplit::dot(spec.alpha, ub_c) + vown + other_val;
          if (v > best) {
            best = v;
            u = cand;
          }
        }
  };
  double ha = 0.35 * std::max(ra, 1e-3), hb = 0.35 * std::max(rb, 1e-3);
  for (int round = 0; round < 7; ++round) {
    refine_site(bua, bub, true, ha, ra);
    refine_site(bub, bua, false, hb, rb);
    ha *= 0.45;
    hb *= 0.45;
  }
  return best;
}

}  // namespace oracles
