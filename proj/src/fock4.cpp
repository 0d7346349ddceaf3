#include "spinsplit/fock4.hpp"

#include <algorithm>

namespace spinsplit {

namespace {

double factorial_table(int n) {
  static const std::vector<double> table = [] {
    std::vector<double> t(41);
    t[0] = 1.0;
    for (int i = 1; i <= 40; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  return table[n];
}

double choose_small(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return factorial_table(n) / (factorial_table(k) * factorial_table(n - k));
}

}  // namespace

Basis4::Basis4(int n_atoms) : n_atoms(n_atoms) {
  if (n_atoms < 1) throw std::invalid_argument("Basis4: n_atoms must be >= 1");
  if (n_atoms > kOracleMaxAtoms)
    throw std::invalid_argument("Basis4: oracle backend supports N <= 30");
  offset_a1_.assign(n_atoms + 2, 0);
  for (int na1 = 0; na1 <= n_atoms; ++na1) {
    const int rem = n_atoms - na1;
    offset_a1_[na1 + 1] = offset_a1_[na1] + (rem + 1) * (rem + 2) / 2;
  }
  dim = offset_a1_[n_atoms + 1];
  states_.reserve(dim);
  for (int na1 = 0; na1 <= n_atoms; ++na1)
    for (int na2 = 0; na2 + na1 <= n_atoms; ++na2)
      for (int nb1 = 0; nb1 + na1 + na2 <= n_atoms; ++nb1) states_.push_back({na1, na2, nb1});
}

int Basis4::index(int n_a1, int n_a2, int n_b1) const {
  const int r1 = n_atoms - n_a1;
  return offset_a1_[n_a1] + n_a2 * (r1 + 1) - n_a2 * (n_a2 - 1) / 2 + n_b1;
}

std::array<int, 4> Basis4::occupations(int index) const {
  const auto& s = states_[index];
  return {s[0], s[1], s[2], n_atoms - s[0] - s[1] - s[2]};
}

double FourModeState::norm2() const {
  double s = 0.0;
  for (const cplx& a : amplitudes) s += std::norm(a);
  return s;
}

void FourModeState::check_valid() const {
  if (n_atoms < 1) throw std::invalid_argument("FourModeState: n_atoms must be >= 1");
  const Basis4 basis(n_atoms);
  if (static_cast<int>(amplitudes.size()) != basis.dim)
    throw std::invalid_argument("FourModeState: wrong amplitude vector length");
  if (std::abs(norm2() - 1.0) > 1e-10)
    throw std::invalid_argument("FourModeState: state is not normalized");
}

FourModeState embed_in_A(const SymmetricState& state) {
  state.check_valid();
  const int n = state.n_atoms;
  const Basis4 basis(n);
  FourModeState out;
  out.n_atoms = n;
  out.amplitudes.assign(basis.dim, cplx(0.0));
  for (int n1 = 0; n1 <= n; ++n1) out.amplitudes[basis.index(n1, n - n1, 0)] = state.amplitudes[n1];
  return out;
}

namespace {

enum class ModePair { A1A2, B1B2, A1B1, A2B2 };

// Unitary substitution c1^dag -> u00 c1^dag + u10 c2^dag,
//                      c2^dag -> u01 c1^dag + u11 c2^dag
// applied within every conserved sector of the chosen mode pair.
void apply_two_mode(FourModeState& state, ModePair pair, const std::array<cplx, 4>& u) {
  const int n = state.n_atoms;
  const Basis4 basis(n);
  const cplx u00 = u[0], u01 = u[1], u10 = u[2], u11 = u[3];

  // sector transform matrices built once per total occupation T
  for (int T = n; T >= 0; --T) {
    std::vector<cplx> p00(T + 1), p01(T + 1), p10(T + 1), p11(T + 1);
    p00[0] = p01[0] = p10[0] = p11[0] = 1.0;
    for (int k = 1; k <= T; ++k) {
      p00[k] = p00[k - 1] * u00;
      p01[k] = p01[k - 1] * u01;
      p10[k] = p10[k - 1] * u10;
      p11[k] = p11[k - 1] * u11;
    }
    std::vector<std::vector<cplx>> m(T + 1, std::vector<cplx>(T + 1, cplx(0.0)));
    for (int in = 0; in <= T; ++in) {
      for (int k = 0; k <= T; ++k) {
        cplx acc(0.0);
        const int pmin = std::max(0, k - (T - in));
        const int pmax = std::min(in, k);
        for (int p = pmin; p <= pmax; ++p) {
          acc += choose_small(in, p) * choose_small(T - in, k - p) * p00[p] * p10[in - p] *
                 p01[k - p] * p11[T - in - k + p];
        }
        m[k][in] = acc * std::sqrt(factorial_table(k) * factorial_table(T - k) /
                                   (factorial_table(in) * factorial_table(T - in)));
      }
    }

    // gather each sector with this T, transform, scatter back
    std::vector<cplx> vec(T + 1), res(T + 1);
    auto transform = [&](auto index_of) {
      for (int k = 0; k <= T; ++k) vec[k] = state.amplitudes[index_of(k)];
      for (int k = 0; k <= T; ++k) {
        cplx acc(0.0);
        for (int in = 0; in <= T; ++in) acc += m[k][in] * vec[in];
        res[k] = acc;
      }
      for (int k = 0; k <= T; ++k) state.amplitudes[index_of(k)] = res[k];
    };

    const int rest = n - T;
    for (int f1 = 0; f1 <= rest; ++f1) {
      const int f2 = rest - f1;
      switch (pair) {
        case ModePair::A1A2:  // fixed (n_b1, n_b2) = (f1, f2)
          transform([&](int k) { return basis.index(k, T - k, f1); });
          break;
        case ModePair::B1B2:  // fixed (n_a1, n_a2) = (f1, f2)
          transform([&](int k) { return basis.index(f1, f2, k); });
          break;
        case ModePair::A1B1:  // fixed (n_a2, n_b2) = (f1, f2)
          transform([&](int k) { return basis.index(k, f1, T - k); });
          break;
        case ModePair::A2B2:  // fixed (n_a1, n_b1) = (f1, f2)
          transform([&](int k) { return basis.index(f1, k, f2); });
          break;
      }
    }
  }
}

std::array<cplx, 4> su2_rotation(Axis axis, double angle) {
  const double c = std::cos(0.5 * angle), s = std::sin(0.5 * angle);
  switch (axis) {
    case Axis::X: return {cplx(c, 0), cplx(0, -s), cplx(0, -s), cplx(c, 0)};
    case Axis::Y: return {cplx(c, 0), cplx(-s, 0), cplx(s, 0), cplx(c, 0)};
    case Axis::Z: return {cplx(c, -s), cplx(0, 0), cplx(0, 0), cplx(c, s)};
  }
  throw std::invalid_argument("su2_rotation: bad axis");
}

}  // namespace

FourModeState split_half(const FourModeState& state) {
  state.check_valid();
  FourModeState out = state;
  const double s = 1.0 / std::sqrt(2.0);
  const std::array<cplx, 4> u = {cplx(s), cplx(-s), cplx(s), cplx(s)};
  apply_two_mode(out, ModePair::A1B1, u);
  apply_two_mode(out, ModePair::A2B2, u);
  return out;
}

FourModeState rotate_site(const FourModeState& state, Site site, Axis axis, double angle) {
  state.check_valid();
  FourModeState out = state;
  apply_two_mode(out, site == Site::A ? ModePair::A1A2 : ModePair::B1B2, su2_rotation(axis, angle));
  return out;
}

namespace {

// out = J_axis^site * in
void apply_lcso_op(const Basis4& basis, Site site, Axis axis, const std::vector<cplx>& in,
                   std::vector<cplx>& out) {
  std::fill(out.begin(), out.end(), cplx(0.0));
  for (int i = 0; i < basis.dim; ++i) {
    const cplx a = in[i];
    if (a == cplx(0.0)) continue;
    const auto occ = basis.occupations(i);
    const int n1 = site == Site::A ? occ[0] : occ[2];
    const int n2 = site == Site::A ? occ[1] : occ[3];
    if (axis == Axis::Z) {
      out[i] += 0.5 * (n1 - n2) * a;
      continue;
    }
    // J+ = c1^dag c2 : (n1, n2) -> (n1+1, n2-1) with sqrt((n1+1) n2)
    if (n2 > 0) {
      const double cp = 0.5 * std::sqrt(static_cast<double>(n1 + 1) * n2);
      const int k = site == Site::A ? basis.index(occ[0] + 1, occ[1] - 1, occ[2])
                                    : basis.index(occ[0], occ[1], occ[2] + 1);
      out[k] += (axis == Axis::X ? cplx(cp, 0) : cplx(0, -cp)) * a;
    }
    if (n1 > 0) {
      const double cm = 0.5 * std::sqrt(static_cast<double>(n1) * (n2 + 1));
      const int k = site == Site::A ? basis.index(occ[0] - 1, occ[1] + 1, occ[2])
                                    : basis.index(occ[0], occ[1], occ[2] - 1);
      out[k] += (axis == Axis::X ? cplx(cm, 0) : cplx(0, cm)) * a;
    }
  }
}

cplx inner(const std::vector<cplx>& bra, const std::vector<cplx>& ket) {
  cplx acc(0.0);
  for (size_t i = 0; i < bra.size(); ++i) acc += std::conj(bra[i]) * ket[i];
  return acc;
}

cplx moment_on(const Basis4& basis, const std::vector<cplx>& psi, const LcsoMonomial& mono) {
  std::vector<cplx> cur = psi, next(basis.dim);
  // apply B factors (rightmost) first, then A factors
  for (auto it = mono.b.rbegin(); it != mono.b.rend(); ++it) {
    apply_lcso_op(basis, Site::B, *it, cur, next);
    cur.swap(next);
  }
  for (auto it = mono.a.rbegin(); it != mono.a.rend(); ++it) {
    apply_lcso_op(basis, Site::A, *it, cur, next);
    cur.swap(next);
  }
  return inner(psi, cur);
}

void collect_moments(const Basis4& basis, const std::vector<cplx>& psi, int max_degree,
                     MixedMoments& out) {
  // Depth-first over words: each node reuses the parent's applied vector.
  out.values[LcsoMonomial{}] = cplx(1.0);
  struct Frame {
    LcsoMonomial mono;
    std::vector<cplx> vec;
  };
  std::vector<cplx> scratch(basis.dim);
  auto rec = [&](auto&& self, const Frame& f) -> void {
    if (f.mono.degree() >= max_degree) return;
    // Words grow by prepending factors (operators apply right to left), so
    // each child is one application away from its parent. B factors may only
    // be prepended while the A word is still empty; this builds every
    // canonical monomial exactly once.
    for (int site = 1; site >= 0; --site) {
      for (int ax = 0; ax < 3; ++ax) {
        LcsoMonomial child = f.mono;
        if (site == 0)
          child.a.insert(child.a.begin(), static_cast<Axis>(ax));
        else {
          if (!f.mono.a.empty()) continue;  // B factors are added before any A
          child.b.insert(child.b.begin(), static_cast<Axis>(ax));
        }
        Frame cf;
        cf.mono = child;
        cf.vec.resize(basis.dim);
        apply_lcso_op(basis, site == 0 ? Site::A : Site::B, static_cast<Axis>(ax), f.vec, cf.vec);
        out.values[child] = inner(psi, cf.vec);
        self(self, cf);
      }
    }
  };
  Frame root;
  root.vec = psi;
  rec(rec, root);
}

}  // namespace

cplx MixedMoments::at(const LcsoMonomial& m) const {
  if (m.degree() == 0) return cplx(1.0);
  auto it = values.find(m);
  if (it == values.end())
    throw std::out_of_range("MixedMoments: missing entry " + monomial_to_string(m));
  return it->second;
}

bool MixedMoments::has(const LcsoMonomial& m) const {
  return m.degree() == 0 || values.count(m) > 0;
}

cplx lcso_moment(const FourModeState& state, const LcsoMonomial& mono) {
  state.check_valid();
  if (mono.degree() < 1 || mono.degree() > 4)
    throw std::invalid_argument("lcso_moment: monomial degree must be 1..4");
  const Basis4 basis(state.n_atoms);
  return moment_on(basis, state.amplitudes, mono);
}

MixedMoments all_lcso_moments(const FourModeState& state, int max_degree) {
  state.check_valid();
  if (max_degree < 1 || max_degree > 4)
    throw std::invalid_argument("all_lcso_moments: max_degree must be 1..4");
  const Basis4 basis(state.n_atoms);
  MixedMoments out;
  out.n_atoms = state.n_atoms;
  out.tag = Provenance::Pure;
  collect_moments(basis, state.amplitudes, max_degree, out);
  return out;
}

// ---------------------------------------------------------------------------
// Normalized irrep traces via ladder decomposition.
//
// A word over {x,y,z} expands into 2^(#x + #y) ladder words over {+,-,z}.
// A ladder word has nonzero trace only if it returns to the starting weight;
// every up/down crossing of an edge (m, m+1) then pairs up, so the diagonal
// matrix element is a polynomial in m, and the trace is a closed power sum.
// ---------------------------------------------------------------------------

namespace {

struct Poly {  // polynomial in m, degree <= 8
  std::array<double, 9> c{};

  static Poly one() {
    Poly p;
    p.c[0] = 1.0;
    return p;
  }
  void mul_linear(double a0, double a1) {  // *= (a0 + a1 m)
    std::array<double, 9> r{};
    for (int i = 0; i < 8; ++i) {
      r[i] += a0 * c[i];
      r[i + 1] += a1 * c[i];
    }
    r[8] += a0 * c[8];
    c = r;
  }
  void mul_quadratic(double a0, double a1, double a2) {  // *= (a0 + a1 m + a2 m^2)
    std::array<double, 9> r{};
    for (int i = 0; i <= 6; ++i) {
      r[i] += a0 * c[i];
      r[i + 1] += a1 * c[i];
      r[i + 2] += a2 * c[i];
    }
    r[7] += a0 * c[7];
    r[8] += a1 * c[7] + a0 * c[8];
    c = r;
  }
};

// sum_{i=0}^{n} i^s for s <= 8
double faulhaber(int s, double n) {
  const double n2 = n * n, n3 = n2 * n, n4 = n3 * n, n5 = n4 * n, n6 = n5 * n, n7 = n6 * n,
               n8 = n7 * n, n9 = n8 * n;
  switch (s) {
    case 0: return n + 1.0;
    case 1: return (n2 + n) / 2.0;
    case 2: return (2.0 * n3 + 3.0 * n2 + n) / 6.0;
    case 3: return (n4 + 2.0 * n3 + n2) / 4.0;
    case 4: return (6.0 * n5 + 15.0 * n4 + 10.0 * n3 - n) / 30.0;
    case 5: return (2.0 * n6 + 6.0 * n5 + 5.0 * n4 - n2) / 12.0;
    case 6: return (6.0 * n7 + 21.0 * n6 + 21.0 * n5 - 7.0 * n3 + n) / 42.0;
    case 7: return (3.0 * n8 + 12.0 * n7 + 14.0 * n6 - 7.0 * n4 + 2.0 * n2) / 24.0;
    case 8: return (10.0 * n9 + 45.0 * n8 + 60.0 * n7 - 42.0 * n5 + 20.0 * n3 - 3.0 * n) / 90.0;
  }
  throw std::invalid_argument("faulhaber: power too large");
}

// sum over m = -j, -j+1, ..., j of poly(m)
double sum_over_weights(const Poly& p, double j) {
  // m = i - j with i = 0..2j integer
  double total = 0.0;
  for (int r = 0; r <= 8; ++r) {
    if (p.c[r] == 0.0) continue;
    double term = 0.0;
    double binom = 1.0;
    for (int s = 0; s <= r; ++s) {
      term += binom * std::pow(-j, r - s) * faulhaber(s, 2.0 * j);
      binom = binom * (r - s) / (s + 1.0);
    }
    total += p.c[r] * term;
  }
  return total;
}

}  // namespace

double spin_word_normalized_trace(int two_j, const Word& word) {
  if (word.size() > 4) throw std::invalid_argument("spin_word_normalized_trace: degree > 4");
  const double j = 0.5 * two_j;
  if (word.empty()) return 1.0;
  if (two_j == 0) return 0.0;  // all components vanish on the trivial irrep

  const int n = static_cast<int>(word.size());
  double total = 0.0;
  // Choice bits select J+/J- for each x or y factor.
  std::vector<int> xy_pos;
  for (int i = 0; i < n; ++i)
    if (word[i] != Axis::Z) xy_pos.push_back(i);
  const int combos = 1 << xy_pos.size();

  for (int mask = 0; mask < combos; ++mask) {
    cplx coeff(1.0, 0.0);
    int offset = 0;
    std::array<int, 9> edge_up{}, edge_dn{};  // edge (m+o, m+o+1) indexed o+4
    Poly poly = Poly::one();
    bool dead = false;

    // apply factors right to left
    int bit = static_cast<int>(xy_pos.size());
    for (int i = n - 1; i >= 0 && !dead; --i) {
      const Axis ax = word[i];
      if (ax == Axis::Z) {
        poly.mul_linear(offset, 1.0);  // multiply by (m + offset)
        continue;
      }
      --bit;
      const bool plus = (mask >> bit) & 1;
      if (ax == Axis::X)
        coeff *= 0.5;
      else
        coeff *= plus ? cplx(0.0, -0.5) : cplx(0.0, 0.5);  // y = (J+ - J-) / 2i
      if (plus) {
        if (offset + 4 > 8) { dead = true; break; }
        edge_up[offset + 4] += 1;
        offset += 1;
      } else {
        if (offset + 3 < 0) { dead = true; break; }
        edge_dn[offset + 3] += 1;
        offset -= 1;
      }
    }
    if (dead || offset != 0) continue;
    bool balanced = true;
    for (int e = 0; e < 9; ++e)
      if (edge_up[e] != edge_dn[e]) balanced = false;
    if (!balanced) continue;  // cannot happen for a closed walk; kept as a guard

    for (int e = 0; e < 9; ++e) {
      const double o = e - 4.0;
      for (int rep = 0; rep < edge_up[e]; ++rep) {
        // w(m) = (j - m - o)(j + m + o + 1)
        const double c0 = (j - o) * (j + o + 1.0);
        const double c1 = (j - o) - (j + o + 1.0);
        poly.mul_quadratic(c0, c1, -1.0);
      }
    }
    total += (coeff * sum_over_weights(poly, j)).real();
  }
  return total / (two_j + 1.0);
}

double white_noise_moment(int n_atoms, const LcsoMonomial& mono) {
  if (mono.degree() == 0) return 1.0;
  double acc = 0.0;
  for (int k = 0; k <= n_atoms; ++k) {
    const double w = binomial_weight(n_atoms, k);
    if (w == 0.0) continue;
    const double ta = mono.a.empty() ? 1.0 : spin_word_normalized_trace(k, mono.a);
    if (ta == 0.0) continue;
    const double tb = mono.b.empty() ? 1.0 : spin_word_normalized_trace(n_atoms - k, mono.b);
    acc += w * ta * tb;
  }
  return acc;
}

double white_noise_second_moment_coeff(int n_atoms) {
  return white_noise_moment(n_atoms, {word_from_string("xx"), {}});
}

MixedMoments white_noise_moments(int n_atoms, double p, const MixedMoments& pure) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("white_noise_moments: p must be in [0, 1]");
  MixedMoments out;
  out.n_atoms = n_atoms;
  out.tag = Provenance::WhiteMixed;
  for (const auto& [mono, value] : pure.values)
    out.values[mono] = p * value + (1.0 - p) * white_noise_moment(n_atoms, mono);
  out.values[LcsoMonomial{}] = cplx(1.0);
  return out;
}

void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const double pim4 = 0.7511255444649425;  // pi^(-1/4)
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    else if (i == 1)
      z -= 1.14 * std::pow(n, 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * nodes[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * nodes[1];
    else
      z = 2.0 * z - nodes[i - 2];

    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = pim4, p2 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (k + 1.0)) * p2 - std::sqrt(static_cast<double>(k) / (k + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    nodes[i] = z;
    nodes[n - 1 - i] = -z;
    weights[i] = 2.0 / (pp * pp);
    weights[n - 1 - i] = weights[i];
  }
}

MixedMoments phase_noise_moments(const FourModeState& state, double sigma_p,
                                 const std::vector<LcsoMonomial>& monomials) {
  state.check_valid();
  if (sigma_p < 0.0) throw std::invalid_argument("phase_noise_moments: sigma_p must be >= 0");
  const Basis4 basis(state.n_atoms);

  auto evaluate = [&](int n_nodes) {
    std::map<LcsoMonomial, cplx> acc;
    for (const auto& m : monomials) acc[m] = cplx(0.0);
    if (sigma_p == 0.0) {
      for (const auto& m : monomials) acc[m] = moment_on(basis, state.amplitudes, m);
      return acc;
    }
    std::vector<double> x, w;
    gauss_hermite(n_nodes, x, w);
    const double inv_sqrt_pi = 1.0 / std::sqrt(kPi);
    std::vector<cplx> rotated(basis.dim);
    for (int ia = 0; ia < n_nodes; ++ia) {
      const double ta = std::sqrt(2.0) * sigma_p * x[ia];
      for (int ib = 0; ib < n_nodes; ++ib) {
        const double tb = std::sqrt(2.0) * sigma_p * x[ib];
        for (int i = 0; i < basis.dim; ++i) {
          const auto occ = basis.occupations(i);
          const double ma = 0.5 * (occ[0] - occ[1]), mb = 0.5 * (occ[2] - occ[3]);
          rotated[i] = state.amplitudes[i] * std::exp(cplx(0.0, -(ta * ma + tb * mb)));
        }
        const double weight = w[ia] * w[ib] * inv_sqrt_pi * inv_sqrt_pi;
        for (const auto& m : monomials) acc[m] += weight * moment_on(basis, rotated, m);
      }
    }
    return acc;
  };

  int n_nodes = 8;
  auto prev = evaluate(n_nodes);
  while (true) {
    if (sigma_p == 0.0) break;
    auto next = evaluate(2 * n_nodes);
    double max_diff = 0.0;
    for (const auto& [m, v] : next) max_diff = std::max(max_diff, std::abs(v - prev.at(m)));
    prev = std::move(next);
    n_nodes *= 2;
    if (max_diff < 1e-10 || n_nodes >= 128) break;
  }

  MixedMoments out;
  out.n_atoms = state.n_atoms;
  out.tag = Provenance::PhaseAveraged;
  out.values = std::move(prev);
  out.values[LcsoMonomial{}] = cplx(1.0);
  return out;
}

std::vector<MeasurementRecord> sample_measurements(const FourModeState& state,
                                                   const MeasurementSetting& setting, int n_runs,
                                                   std::uint64_t seed) {
  state.check_valid();
  if (n_runs < 1) throw std::invalid_argument("sample_measurements: n_runs must be >= 1");

  // Rotate so that the requested component maps onto z:
  //   x: exp(+i pi/2 Jy), y: exp(-i pi/2 Jx), z: identity.
  FourModeState rotated = state;
  auto apply_setting = [&](Site site, Axis ax) {
    if (ax == Axis::X)
      rotated = rotate_site(rotated, site, Axis::Y, -0.5 * kPi);
    else if (ax == Axis::Y)
      rotated = rotate_site(rotated, site, Axis::X, 0.5 * kPi);
  };
  apply_setting(Site::A, setting.site_a);
  apply_setting(Site::B, setting.site_b);

  const Basis4 basis(state.n_atoms);
  std::vector<double> cdf(basis.dim);
  double run = 0.0;
  for (int i = 0; i < basis.dim; ++i) {
    run += std::norm(rotated.amplitudes[i]);
    cdf[i] = run;
  }

  Rng rng(seed);
  std::vector<MeasurementRecord> out;
  out.reserve(n_runs);
  for (int r = 0; r < n_runs; ++r) {
    const double u = rng.uniform() * run;
    const int idx = static_cast<int>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    const auto occ = basis.occupations(std::min(idx, basis.dim - 1));
    out.push_back({occ[0], occ[1], occ[2], occ[3]});
  }
  return out;
}

}  // namespace spinsplit
