#include "spinsplit/dicke.hpp"

#include <algorithm>

namespace spinsplit {

namespace {

// J+ |m> = sqrt((j - m)(j + m + 1)) |m + 1> with j = N/2, m = n1 - N/2.
// In Dicke indices: raising n1 by one carries sqrt((n1 + 1)(N - n1)).
void apply_jplus(int n, const std::vector<cplx>& in, std::vector<cplx>& out) {
  std::fill(out.begin(), out.end(), cplx(0.0));
  for (int n1 = 0; n1 + 1 <= n; ++n1)
    out[n1 + 1] += std::sqrt(static_cast<double>(n1 + 1) * (n - n1)) * in[n1];
}

void apply_jminus(int n, const std::vector<cplx>& in, std::vector<cplx>& out) {
  std::fill(out.begin(), out.end(), cplx(0.0));
  for (int n1 = 1; n1 <= n; ++n1)
    out[n1 - 1] += std::sqrt(static_cast<double>(n1) * (n - n1 + 1)) * in[n1];
}

void apply_axis(int n, Axis axis, const std::vector<cplx>& in, std::vector<cplx>& out) {
  const int dim = n + 1;
  switch (axis) {
    case Axis::Z: {
      out.resize(dim);
      for (int n1 = 0; n1 < dim; ++n1) out[n1] = (n1 - 0.5 * n) * in[n1];
      return;
    }
    case Axis::X: {
      std::vector<cplx> up(dim), dn(dim);
      apply_jplus(n, in, up);
      apply_jminus(n, in, dn);
      out.resize(dim);
      for (int i = 0; i < dim; ++i) out[i] = 0.5 * (up[i] + dn[i]);
      return;
    }
    case Axis::Y: {
      std::vector<cplx> up(dim), dn(dim);
      apply_jplus(n, in, up);
      apply_jminus(n, in, dn);
      out.resize(dim);
      const cplx half_over_i(0.0, -0.5);
      for (int i = 0; i < dim; ++i) out[i] = half_over_i * (up[i] - dn[i]);
      return;
    }
  }
  throw std::invalid_argument("apply_axis: bad axis");
}

// Bessel functions J_0..J_kmax(x) by Miller's downward recurrence.
std::vector<double> bessel_j_array(double x, int kmax) {
  std::vector<double> j(kmax + 1, 0.0);
  if (x == 0.0) {
    j[0] = 1.0;
    return j;
  }
  const int start = kmax + 16 + static_cast<int>(2.0 * std::cbrt(std::abs(x)));
  double jp1 = 0.0, jc = 1e-300;
  double norm_acc = 0.0;
  for (int k = start; k >= 1; --k) {
    const double jm1 = (2.0 * k / x) * jc - jp1;
    jp1 = jc;
    jc = jm1;
    if (k - 1 <= kmax) j[k - 1] = jc;
    if (((k - 1) & 1) == 0 && k - 1 > 0) norm_acc += 2.0 * jc;
    if (std::abs(jc) > 1e250) {  // rescale to avoid overflow
      const double s = 1e-250;
      jc *= s;
      jp1 *= s;
      norm_acc *= s;
      for (double& v : j) v *= s;
    }
  }
  norm_acc += j[0];
  for (double& v : j) v /= norm_acc;
  return j;
}

// exp(-i angle J_axis) |psi> via Chebyshev expansion with Bessel coefficients.
// The spectrum of J_axis is exactly [-N/2, N/2], so the scaled operator is
// T = J/R with R = N/2 and exp(-i phi R T) = sum_k c_k T_k(T),
// c_k = (2 - delta_k0) (-i)^k J_k(phi R).
std::vector<cplx> chebyshev_rotate(int n, Axis axis, double angle, const std::vector<cplx>& psi) {
  const int dim = n + 1;
  const double radius = 0.5 * n;
  const double phi = angle * radius;
  if (phi == 0.0) return psi;

  const double aphi = std::abs(phi);
  int kmax = static_cast<int>(aphi + 14.0 * std::cbrt(aphi + 1.0) + 30.0);
  std::vector<double> bes = bessel_j_array(aphi, kmax);
  while (kmax > 8 && std::abs(bes[kmax]) < 1e-18 && std::abs(bes[kmax - 1]) < 1e-18) --kmax;

  // c_k for negative phi via J_k(-x) = (-1)^k J_k(x)
  const double sign = phi < 0.0 ? -1.0 : 1.0;

  std::vector<cplx> t_prev = psi;  // T_0 psi
  std::vector<cplx> t_cur(dim), scratch(dim);
  apply_axis(n, axis, psi, t_cur);  // J psi
  for (int i = 0; i < dim; ++i) t_cur[i] /= radius;

  std::vector<cplx> acc(dim);
  const cplx mi(0.0, -1.0);
  cplx phase(1.0, 0.0);  // (-i)^k, updated per term
  for (int i = 0; i < dim; ++i) acc[i] = bes[0] * t_prev[i];
  double sgn_k = sign;
  phase *= mi;
  for (int i = 0; i < dim; ++i) acc[i] += 2.0 * phase * (sgn_k * bes[1]) * t_cur[i];

  for (int k = 2; k <= kmax; ++k) {
    apply_axis(n, axis, t_cur, scratch);
    for (int i = 0; i < dim; ++i) scratch[i] = 2.0 * scratch[i] / radius - t_prev[i];
    t_prev.swap(t_cur);
    t_cur.swap(scratch);
    phase *= mi;
    sgn_k *= sign;
    const double ck = 2.0 * sgn_k * bes[k];
    if (ck != 0.0)
      for (int i = 0; i < dim; ++i) acc[i] += phase * ck * t_cur[i];
  }
  return acc;
}

}  // namespace

double SymmetricState::norm2() const {
  double s = 0.0;
  for (const cplx& a : amplitudes) s += std::norm(a);
  return s;
}

void SymmetricState::check_valid() const {
  if (n_atoms < 1) throw std::invalid_argument("SymmetricState: n_atoms must be >= 1");
  if (static_cast<int>(amplitudes.size()) != n_atoms + 1)
    throw std::invalid_argument("SymmetricState: amplitude vector must have length N+1");
  if (std::abs(norm2() - 1.0) > 1e-10)
    throw std::invalid_argument("SymmetricState: state is not normalized");
}

SymmetricState coherent_state_x(int n_atoms) {
  if (n_atoms < 1) throw std::invalid_argument("coherent_state_x: n_atoms must be >= 1");
  SymmetricState s;
  s.n_atoms = n_atoms;
  s.amplitudes.resize(n_atoms + 1);
  for (int n1 = 0; n1 <= n_atoms; ++n1)
    s.amplitudes[n1] = std::exp(0.5 * (ln_choose(n_atoms, n1) - n_atoms * std::log(2.0)));
  return s;
}

SymmetricState one_axis_twist(const SymmetricState& state, double chi_t) {
  state.check_valid();
  SymmetricState out = state;
  const double half = 0.5 * state.n_atoms;
  for (int n1 = 0; n1 <= state.n_atoms; ++n1) {
    const double m = n1 - half;
    out.amplitudes[n1] *= std::exp(cplx(0.0, -chi_t * m * m));
  }
  return out;
}

SymmetricState rotate(const SymmetricState& state, Axis axis, double angle) {
  state.check_valid();
  SymmetricState out = state;
  if (axis == Axis::Z) {
    const double half = 0.5 * state.n_atoms;
    for (int n1 = 0; n1 <= state.n_atoms; ++n1)
      out.amplitudes[n1] *= std::exp(cplx(0.0, -angle * (n1 - half)));
    return out;
  }
  out.amplitudes = chebyshev_rotate(state.n_atoms, axis, angle, state.amplitudes);
  return out;
}

cplx collective_moment(const SymmetricState& state, const Word& word) {
  state.check_valid();
  if (word.empty() || word.size() > 4)
    throw std::invalid_argument("collective_moment: word degree must be 1..4");
  std::vector<cplx> cur = state.amplitudes, next(state.n_atoms + 1);
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    apply_axis(state.n_atoms, *it, cur, next);
    cur.swap(next);
  }
  cplx acc(0.0);
  for (int i = 0; i <= state.n_atoms; ++i) acc += std::conj(state.amplitudes[i]) * cur[i];
  return acc;
}

void apply_collective(const SymmetricState& state, Axis axis, const std::vector<cplx>& in,
                      std::vector<cplx>& out) {
  apply_axis(state.n_atoms, axis, in, out);
}

SqueezingReport xi2_numeric(const SymmetricState& state) {
  state.check_valid();
  const int n = state.n_atoms;

  Vec3 mean{};
  Mat3 second = mat3_zero();  // symmetrized Re<J_i J_j>
  for (int i = 0; i < 3; ++i) {
    mean[i] = collective_moment(state, {static_cast<Axis>(i)}).real();
    for (int j = i; j < 3; ++j) {
      const cplx v = collective_moment(state, {static_cast<Axis>(i), static_cast<Axis>(j)});
      second[i][j] = second[j][i] = v.real();  // real part symmetrizes the product
    }
  }

  const double jlen = norm(mean);
  if (jlen < 1e-9 * n) throw std::domain_error("xi2_numeric: zero mean spin (degenerate state)");

  // Orthonormal frame (nhat, e1, e2); e2 is as close to lab z as possible so
  // that for a +x mean spin the frame is exactly (x, y, z).
  const Vec3 nhat = (1.0 / jlen) * mean;
  Vec3 e2{0, 0, 1};
  e2 = e2 - dot(e2, nhat) * nhat;
  if (norm(e2) < 1e-8) {
    e2 = Vec3{0, 1, 0} - dot(Vec3{0, 1, 0}, nhat) * nhat;
  }
  e2 = (1.0 / norm(e2)) * e2;
  const Vec3 e1 = cross(e2, nhat);

  auto quad = [&](const Vec3& u, const Vec3& v) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s += u[i] * second[i][j] * v[j];
    return s;
  };
  const double v11 = quad(e1, e1);
  const double v22 = quad(e2, e2);
  const double v12 = quad(e1, e2);

  const double avg = 0.5 * (v11 + v22);
  const double dif = 0.5 * (v11 - v22);
  const double rad = std::sqrt(dif * dif + v12 * v12);
  const double vmin = avg - rad;

  // Direction of minimal variance: d = cos(psi) e1 + sin(psi) e2.
  double psi = 0.0;
  if (rad > 1e-12 * std::max(1.0, avg)) {
    psi = 0.5 * std::atan2(2.0 * v12, v11 - v22);
    const double at_psi = avg + dif * std::cos(2 * psi) + v12 * std::sin(2 * psi);
    const double at_perp = avg - dif * std::cos(2 * psi) - v12 * std::sin(2 * psi);
    if (at_perp < at_psi) psi += 0.5 * kPi;
  }

  // Rotating the state by exp(-i beta Jx) measures the direction
  // sin(beta) e1 + cos(beta) e2 along z, so beta = pi/2 - psi maps the minimal
  // direction onto z. Coherent states (rad = 0) report 0.
  double beta = 0.0;
  if (rad > 1e-12 * std::max(1.0, avg)) {
    beta = 0.5 * kPi - psi;
    while (beta > 0.5 * kPi) beta -= kPi;
    while (beta <= -0.5 * kPi) beta += kPi;
  }

  SqueezingReport rep;
  rep.mean_spin = mean;
  rep.xi2 = n * vmin / (jlen * jlen);
  rep.xi2_db = 10.0 * std::log10(rep.xi2);
  rep.squeezing_angle = beta;
  return rep;
}

double xi2_closed_form(int n_atoms, double chi_t) {
  if (n_atoms < 2) throw std::invalid_argument("xi2_closed_form: n_atoms must be >= 2");
  const double n = n_atoms;
  const double c2 = std::pow(std::cos(2.0 * chi_t), n - 2.0);
  const double a = 1.0 - c2;
  const double b2 = 16.0 * std::pow(std::cos(chi_t), 2.0 * n - 4.0) * std::sin(chi_t) * std::sin(chi_t);
  const double root = std::sqrt(a * a + b2);
  return 0.25 * std::pow(std::cos(chi_t), 2.0 - 2.0 * n) * (3.0 + n - (n - 1.0) * (c2 + root));
}

SymmetricState framed_squeezed_state(int n_atoms, double chi_t) {
  SymmetricState s = one_axis_twist(coherent_state_x(n_atoms), chi_t);
  const SqueezingReport rep = xi2_numeric(s);
  return rotate(s, Axis::X, rep.squeezing_angle);
}

double chi_t_for_target_db(int n_atoms, double target_db) {
  if (target_db >= 0.0) {
    if (target_db == 0.0) return 0.0;
    throw std::domain_error("chi_t_for_target_db: target must be <= 0 dB");
  }
  auto db_at = [&](double chi) { return 10.0 * std::log10(xi2_closed_form(n_atoms, chi)); };

  // Coarse scan for the minimum of the dB curve, then bisect on [0, argmin].
  double best_chi = 0.0, best_db = 0.0;
  for (int i = 1; i <= 400; ++i) {
    const double chi = std::pow(10.0, -6.0 + 6.0 * i / 400.0) * 0.5;  // up to 0.5
    const double v = db_at(chi);
    if (v < best_db) {
      best_db = v;
      best_chi = chi;
    }
  }
  if (target_db < best_db)
    throw std::domain_error("chi_t_for_target_db: target squeezing unreachable at this N");

  double lo = 0.0, hi = best_chi;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (db_at(mid) > target_db)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace spinsplit
