#include "spinsplit/moment_map.hpp"

#include <algorithm>

namespace spinsplit {

namespace {

// 2x2 complex matrices, row major.
using Mat2 = std::array<cplx, 4>;

Mat2 mat2_mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}

Mat2 single_spin(Axis a) {
  switch (a) {
    case Axis::X: return {cplx(0), cplx(0.5), cplx(0.5), cplx(0)};
    case Axis::Y: return {cplx(0), cplx(0, -0.5), cplx(0, 0.5), cplx(0)};
    case Axis::Z: return {cplx(0.5), cplx(0), cplx(0), cplx(-0.5)};
  }
  throw std::invalid_argument("single_spin: bad axis");
}

const Mat2 kLadderPlus = {cplx(0), cplx(1), cplx(0), cplx(0)};   // s+ = sx + i sy
const Mat2 kLadderMinus = {cplx(0), cplx(0), cplx(1), cplx(0)};  // s- = sx - i sy

// Decompose M = c_I + c_x s_x + c_y s_y + c_z s_z (s_i = sigma_i / 2).
std::array<cplx, 4> pauli_decompose(const Mat2& m) {
  return {0.5 * (m[0] + m[3]),        // I
          m[1] + m[2],                // 2 tr(M s_x)
          cplx(0, 1) * (m[1] - m[2]), // 2 tr(M s_y)
          m[0] - m[3]};               // 2 tr(M s_z)
}

// Set partitions of {0..k-1} as blocks of ascending slot indices.
const std::vector<std::vector<std::vector<int>>>& set_partitions(int k) {
  static const auto table = [] {
    std::vector<std::vector<std::vector<std::vector<int>>>> t(5);
    for (int n = 1; n <= 4; ++n) {
      // restricted growth strings
      std::vector<int> rgs(n, 0);
      while (true) {
        int nblocks = 1 + *std::max_element(rgs.begin(), rgs.end());
        std::vector<std::vector<int>> part(nblocks);
        for (int i = 0; i < n; ++i) part[rgs[i]].push_back(i);
        t[n].push_back(part);
        // next rgs
        int i = n - 1;
        for (; i > 0; --i) {
          int maxprev = *std::max_element(rgs.begin(), rgs.begin() + i);
          if (rgs[i] <= maxprev) {
            ++rgs[i];
            std::fill(rgs.begin() + i + 1, rgs.end(), 0);
            break;
          }
        }
        if (i == 0) break;
      }
    }
    return t;
  }();
  return table[k];
}

struct Slot {
  int site;  // 0 = A, 1 = B, -1 = pre-split (no site filter)
  Mat2 mat;
};

// Recursively expand the product over blocks of (c_I + c . s) into symmetric
// correlators of the chosen components.
cplx contract_choices(const std::vector<std::array<cplx, 4>>& coeffs, size_t b, cplx prefactor,
                      Word& chosen, const KBodyCorrelators& corr) {
  if (prefactor == cplx(0.0)) return cplx(0.0);
  if (b == coeffs.size()) {
    if (chosen.empty()) return prefactor;
    Word key = chosen;
    std::sort(key.begin(), key.end());
    return prefactor * corr.at(key);
  }
  cplx acc = contract_choices(coeffs, b + 1, prefactor * coeffs[b][0], chosen, corr);
  for (int c = 0; c < 3; ++c) {
    if (coeffs[b][c + 1] == cplx(0.0)) continue;
    chosen.push_back(static_cast<Axis>(c));
    acc += contract_choices(coeffs, b + 1, prefactor * coeffs[b][c + 1], chosen, corr);
    chosen.pop_back();
  }
  return acc;
}

// Expectation of a product of single-atom operators summed over atoms,
// optionally restricted by the independent fair-coin well assignment.
// split = false: <prod_t sum_p op_t^(p)> on the pre-split state.
// split = true : wells enter as a (1/2)^r factor and mixed-site blocks vanish.
cplx expectation_from_correlators(const std::vector<Slot>& slots, const KBodyCorrelators& corr,
                                  int n_atoms, bool split) {
  const int k = static_cast<int>(slots.size());
  if (k == 0) return cplx(1.0);
  cplx total(0.0);
  for (const auto& part : set_partitions(k)) {
    const int r = static_cast<int>(part.size());
    if (r > n_atoms) continue;  // falling factorial vanishes
    double weight = falling_factorial(n_atoms, r);
    bool ok = true;
    std::vector<std::array<cplx, 4>> coeffs;
    coeffs.reserve(r);
    for (const auto& block : part) {
      if (split) {
        for (size_t i = 1; i < block.size(); ++i)
          if (slots[block[i]].site != slots[block[0]].site) ok = false;
        if (!ok) break;
        weight *= 0.5;
      }
      Mat2 m = slots[block[0]].mat;
      for (size_t i = 1; i < block.size(); ++i) m = mat2_mul(m, slots[block[i]].mat);
      coeffs.push_back(pauli_decompose(m));
    }
    if (!ok) continue;
    Word chosen;
    total += weight * contract_choices(coeffs, 0, cplx(1.0), chosen, corr);
  }
  return total;
}

std::vector<Slot> slots_for(const LcsoMonomial& mono) {
  std::vector<Slot> slots;
  for (Axis a : mono.a) slots.push_back({0, single_spin(a)});
  for (Axis a : mono.b) slots.push_back({1, single_spin(a)});
  return slots;
}

}  // namespace

cplx KBodyCorrelators::at(const Word& key) const {
  auto it = values.find(key);
  if (it == values.end())
    throw std::out_of_range("KBodyCorrelators: missing entry " + word_to_string(key));
  return it->second;
}

MomentTable presplit_moments(const SymmetricState& state, int max_degree) {
  state.check_valid();
  if (max_degree < 1 || max_degree > 4)
    throw std::invalid_argument("presplit_moments: max_degree must be 1..4");
  MomentTable table;
  const int dim = state.n_atoms + 1;
  std::vector<cplx> cur(dim), next(dim);
  for (const Word& w : all_words(max_degree)) {
    cur = state.amplitudes;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      apply_collective(state, *it, cur, next);
      cur.swap(next);
    }
    cplx acc(0.0);
    for (int i = 0; i < dim; ++i) acc += std::conj(state.amplitudes[i]) * cur[i];
    table[w] = acc;
  }
  return table;
}

KBodyCorrelators kbody_from_collective(const MomentTable& moments, int n_atoms, int max_degree) {
  if (max_degree < 1 || max_degree > 4)
    throw std::invalid_argument("kbody_from_collective: max_degree must be 1..4");
  if (n_atoms < max_degree)
    throw std::invalid_argument("kbody_from_collective: N too small for requested degree");

  KBodyCorrelators corr;
  corr.n_atoms = n_atoms;
  corr.max_order = max_degree;

  for (int d = 1; d <= max_degree; ++d) {
    // sorted multisets of size d
    std::vector<Word> keys;
    for (const Word& w : all_words(d)) {
      if (static_cast<int>(w.size()) != d) continue;
      if (std::is_sorted(w.begin(), w.end())) keys.push_back(w);
    }
    for (const Word& key : keys) corr.values[key] = cplx(0.0);
    for (const Word& key : keys) {
      auto it = moments.find(key);
      if (it == moments.end())
        throw std::invalid_argument("kbody_from_collective: moment table lacks " +
                                    word_to_string(key));
      // With corr[key] = 0 the all-singleton partition drops out and every
      // other partition references lower orders only.
      std::vector<Slot> slots;
      for (Axis a : key) slots.push_back({-1, single_spin(a)});
      const cplx rest = expectation_from_correlators(slots, corr, n_atoms, false);
      corr.values[key] = (it->second - rest) / falling_factorial(n_atoms, d);
    }
  }
  return corr;
}

cplx collective_from_kbody(const Word& word, const KBodyCorrelators& corr) {
  std::vector<Slot> slots;
  for (Axis a : word) slots.push_back({-1, single_spin(a)});
  return expectation_from_correlators(slots, corr, corr.n_atoms, false);
}

cplx postsplit_moment(const LcsoMonomial& mono, const KBodyCorrelators& corr, int n_atoms) {
  if (mono.degree() > 4) throw std::invalid_argument("postsplit_moment: degree must be <= 4");
  return expectation_from_correlators(slots_for(mono), corr, n_atoms, true);
}

cplx phase_damped_postsplit(const LcsoMonomial& mono, const KBodyCorrelators& corr, int n_atoms,
                            double sigma_p) {
  if (sigma_p < 0.0) throw std::invalid_argument("phase_damped_postsplit: sigma_p must be >= 0");
  if (mono.degree() > 4) throw std::invalid_argument("phase_damped_postsplit: degree must be <= 4");
  if (sigma_p == 0.0) return postsplit_moment(mono, corr, n_atoms);

  // Expand x/y factors in the ladder basis; a term with net ladder charge k at
  // a site picks up exp(-k^2 sigma^2 / 2) under the Gaussian z-rotation
  // average. z factors are unaffected.
  struct Factor {
    int site;
    Axis axis;
  };
  std::vector<Factor> factors;
  for (Axis a : mono.a) factors.push_back({0, a});
  for (Axis a : mono.b) factors.push_back({1, a});

  std::vector<int> xy_idx;
  for (size_t i = 0; i < factors.size(); ++i)
    if (factors[i].axis != Axis::Z) xy_idx.push_back(static_cast<int>(i));

  cplx total(0.0);
  const int combos = 1 << xy_idx.size();
  for (int mask = 0; mask < combos; ++mask) {
    cplx coeff(1.0);
    int charge[2] = {0, 0};
    std::vector<Slot> slots;
    slots.reserve(factors.size());
    int bit = 0;
    for (const Factor& f : factors) {
      if (f.axis == Axis::Z) {
        slots.push_back({f.site, single_spin(Axis::Z)});
        continue;
      }
      const bool plus = (mask >> bit++) & 1;
      // x = (s+ + s-)/2,  y = (s+ - s-)/2i
      if (f.axis == Axis::X)
        coeff *= 0.5;
      else
        coeff *= plus ? cplx(0, -0.5) : cplx(0, 0.5);
      charge[f.site] += plus ? 1 : -1;
      slots.push_back({f.site, plus ? kLadderPlus : kLadderMinus});
    }
    const double damp = std::exp(-0.5 * sigma_p * sigma_p *
                                 (charge[0] * charge[0] + charge[1] * charge[1]));
    total += coeff * damp * expectation_from_correlators(slots, corr, n_atoms, true);
  }
  return total;
}

bool backend_uses_oracle(Backend backend, int n_atoms) {
  switch (backend) {
    case Backend::Oracle:
      if (n_atoms > kOracleMaxAtoms)
        throw std::invalid_argument("oracle backend supports N <= 30");
      return true;
    case Backend::MomentMap: return false;
    case Backend::Auto: return n_atoms <= 20;
  }
  throw std::invalid_argument("bad backend");
}

MixedMoments split_state_moments(const SymmetricState& state, double sigma_p, Backend backend,
                                 int max_degree) {
  if (!backend_uses_oracle(backend, state.n_atoms))
    return postsplit_moments_table(state, sigma_p, max_degree);
  const FourModeState split = split_half(embed_in_A(state));
  if (sigma_p <= 0.0) return all_lcso_moments(split, max_degree);
  return phase_noise_moments(split, sigma_p, all_lcso_monomials(max_degree));
}

MixedMoments postsplit_moments_table(const SymmetricState& state, double sigma_p, int max_degree) {
  const MomentTable pre = presplit_moments(state, max_degree);
  const KBodyCorrelators corr =
      kbody_from_collective(pre, state.n_atoms, std::min(max_degree, state.n_atoms));
  MixedMoments out;
  out.n_atoms = state.n_atoms;
  out.tag = sigma_p > 0.0 ? Provenance::PhaseAveraged : Provenance::Pure;
  out.values[LcsoMonomial{}] = cplx(1.0);
  for (const LcsoMonomial& mono : all_lcso_monomials(max_degree))
    out.values[mono] = sigma_p > 0.0 ? phase_damped_postsplit(mono, corr, state.n_atoms, sigma_p)
                                     : postsplit_moment(mono, corr, state.n_atoms);
  return out;
}

}  // namespace spinsplit
