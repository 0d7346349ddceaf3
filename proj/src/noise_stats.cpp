#include "spinsplit/noise_stats.hpp"

#include <algorithm>

namespace spinsplit {

void NoiseConfig::validate() const {
  if (p_white < 0.0 || p_white > 1.0)
    throw std::invalid_argument("NoiseConfig: p_white must be in [0, 1]");
  if (sigma_p < 0.0) throw std::invalid_argument("NoiseConfig: sigma_p must be >= 0");
  if (sigma_c < 0.0) throw std::invalid_argument("NoiseConfig: sigma_c must be >= 0");
}

MixedMoments coarse_grain_moments(const MixedMoments& moments, double sigma_c) {
  if (sigma_c < 0.0) throw std::invalid_argument("coarse_grain_moments: sigma_c must be >= 0");
  if (sigma_c == 0.0) return moments;
  const double v = 0.5 * sigma_c * sigma_c;  // variance per component reading

  MixedMoments out;
  out.n_atoms = moments.n_atoms;
  out.tag = Provenance::CoarseGrained;
  for (const auto& [mono, value] : moments.values) {
    const int d = mono.degree();
    if (d == 0) {
      out.values[mono] = value;
      continue;
    }
    // factor list: (site, axis) in canonical order
    std::vector<std::pair<int, Axis>> f;
    for (Axis a : mono.a) f.push_back({0, a});
    for (Axis a : mono.b) f.push_back({1, a});

    cplx acc(0.0);
    for (int mask = 0; mask < (1 << d); ++mask) {
      // counts per (site, axis) of the positions replaced by noise
      int counts[6] = {0, 0, 0, 0, 0, 0};
      for (int i = 0; i < d; ++i)
        if ((mask >> i) & 1) ++counts[3 * f[i].first + static_cast<int>(f[i].second)];
      double gmom = 1.0;
      bool ok = true;
      for (int c : counts) {
        if (c == 0) continue;
        if (c == 2)
          gmom *= v;
        else if (c == 4)
          gmom *= 3.0 * v * v;
        else {
          ok = false;  // odd Gaussian moments vanish
          break;
        }
      }
      if (!ok || gmom == 0.0) continue;
      LcsoMonomial rest;
      for (int i = 0; i < d; ++i)
        if (!((mask >> i) & 1)) (f[i].first == 0 ? rest.a : rest.b).push_back(f[i].second);
      acc += gmom * moments.at(rest);
    }
    out.values[mono] = acc;
  }
  return out;
}

NoisePipeline build_noise_pipeline(const SymmetricState& state, const NoiseConfig& noise,
                                   Backend backend, int max_degree) {
  noise.validate();
  NoisePipeline pipe;
  pipe.n_atoms = state.n_atoms;
  pipe.noise = noise;
  MixedMoments pure = split_state_moments(state, noise.sigma_p, backend, max_degree);
  pipe.corrected = noise.p_white < 1.0
                       ? white_noise_moments(state.n_atoms, noise.p_white, pure)
                       : std::move(pure);
  pipe.measured = coarse_grain_moments(pipe.corrected, noise.sigma_c);
  return pipe;
}

namespace {

double s_value_from(const MixedMoments& mm) {
  auto c = [&](Axis i, Axis j) { return mm.at({{i}, {j}}).real(); };
  return c(Axis::X, Axis::X) + c(Axis::Y, Axis::Y) - c(Axis::Z, Axis::Z);
}

double d_value_from(const MixedMoments& mm) {
  auto local2 = [&](Site s, Axis i) {
    return s == Site::A ? mm.at({{i, i}, {}}).real() : mm.at({{}, {i, i}}).real();
  };
  auto cross = [&](Axis i) { return mm.at({{i}, {i}}).real(); };
  auto local1 = [&](Site s, Axis i) {
    return s == Site::A ? mm.at({{i}, {}}).real() : mm.at({{}, {i}}).real();
  };
  return local2(Site::A, Axis::Y) + local2(Site::B, Axis::Y) - 2.0 * cross(Axis::Y) +
         local2(Site::A, Axis::Z) + local2(Site::B, Axis::Z) + 2.0 * cross(Axis::Z) -
         local1(Site::A, Axis::X) - local1(Site::B, Axis::X);
}

}  // namespace

WitnessUnderNoise evaluate_s(const NoisePipeline& pipe) {
  WitnessUnderNoise w;
  w.kind = WitnessKind::S;
  w.value = s_value_from(pipe.corrected);
  const double n = pipe.n_atoms;
  w.threshold = n * (n - 1.0) / 16.0;
  w.margin = w.value - w.threshold;
  w.violated = w.margin > 1e-9 * std::max(1.0, std::abs(w.threshold));
  if (!w.violated) w.margin = 0.0;
  return w;
}

WitnessUnderNoise evaluate_d(const NoisePipeline& pipe) {
  WitnessUnderNoise w;
  w.kind = WitnessKind::D;
  w.value = d_value_from(pipe.corrected);
  w.threshold = -2.0 * pipe.noise.sigma_c * pipe.noise.sigma_c;
  w.margin = w.threshold - w.value;  // violation direction: value below threshold
  w.violated = w.margin > 1e-9 * std::max(1.0, std::abs(w.value));
  if (!w.violated) w.margin = 0.0;
  return w;
}

WitnessUnderNoise evaluate_custom(const NoisePipeline& pipe, const WitnessSpec& spec,
                                  int bound_restarts, std::uint64_t seed) {
  spec.validate();
  WitnessUnderNoise w;
  w.kind = WitnessKind::Custom;
  const WitnessMoments wm = extract_witness_moments(pipe.corrected);
  w.value = eval_witness_rotated(spec, wm, mat3_identity(), mat3_identity());
  w.threshold = bound_binomial(spec, pipe.n_atoms, 1e-12, bound_restarts, seed);
  w.margin = w.value - w.threshold;
  w.violated = w.margin > 1e-9 * std::max(1.0, std::abs(w.threshold));
  if (!w.violated) w.margin = 0.0;
  return w;
}

Vec3 estimator_variance(WitnessKind kind, const MixedMoments& measured) {
  auto at = [&](const char* a, const char* b) {
    return measured.at({word_from_string(a), word_from_string(b)}).real();
  };
  Vec3 var{};
  if (kind == WitnessKind::S) {
    const char* axes[3] = {"x", "y", "z"};
    const char* axes2[3] = {"xx", "yy", "zz"};
    for (int i = 0; i < 3; ++i) {
      const double second = at(axes2[i], axes2[i]);  // <(J_i^A)^2 (J_i^B)^2>
      const double mean = at(axes[i], axes[i]);
      var[i] = second - mean * mean;
    }
    return var;
  }
  if (kind != WitnessKind::D)
    throw std::invalid_argument("estimator_variance: custom specs are not supported");

  // X setting: -(Jx^A + Jx^B)
  {
    const double m2 = at("xx", "") + 2.0 * at("x", "x") + at("", "xx");
    const double m1 = at("x", "") + at("", "x");
    var[0] = m2 - m1 * m1;
  }
  // Y setting: (Jy^A - Jy^B)^2 ; Z setting: (Jz^A + Jz^B)^2
  auto quartic_variance = [&](const char* ax, double sign) {
    const std::string a1(ax), a2 = a1 + a1, a3 = a2 + a1, a4 = a2 + a2;
    const double sq = at(a2.c_str(), "") + at("", a2.c_str()) + 2.0 * sign * at(ax, ax);
    const double quart = at(a4.c_str(), "") + 4.0 * sign * at(a3.c_str(), ax) +
                         6.0 * at(a2.c_str(), a2.c_str()) + 4.0 * sign * at(ax, a3.c_str()) +
                         at("", a4.c_str());
    return quart - sq * sq;
  };
  var[1] = quartic_variance("y", -1.0);
  var[2] = quartic_variance("z", 1.0);
  return var;
}

EstimatorReport required_runs(WitnessKind kind, const WitnessSpec* custom,
                              const SymmetricState& state, const NoiseConfig& noise,
                              Backend backend, double k_sigma) {
  if (k_sigma <= 0.0) throw std::invalid_argument("required_runs: k_sigma must be > 0");
  const NoisePipeline pipe = build_noise_pipeline(state, noise, backend, 4);

  EstimatorReport rep;
  rep.k_sigma = k_sigma;
  switch (kind) {
    case WitnessKind::S: rep.witness = evaluate_s(pipe); break;
    case WitnessKind::D: rep.witness = evaluate_d(pipe); break;
    case WitnessKind::Custom:
      if (custom == nullptr)
        throw std::invalid_argument("required_runs: custom kind needs a spec");
      rep.witness = evaluate_custom(pipe, *custom);
      break;
  }
  // Per-setting variances are quantum-state traces on the noisy state (phase
  // averaged, white mixed); counting noise enters through the D threshold.
  if (kind != WitnessKind::Custom) rep.setting_variance = estimator_variance(kind, pipe.corrected);

  if (!rep.witness.violated || kind == WitnessKind::Custom) return rep;
  const double var_sum =
      rep.setting_variance[0] + rep.setting_variance[1] + rep.setting_variance[2];
  const double gap = rep.witness.margin;
  const double runs = k_sigma * k_sigma * var_sum / (gap * gap);
  rep.required_runs = static_cast<long long>(std::ceil(runs - 1e-12));
  if (*rep.required_runs < 1) rep.required_runs = 1;
  return rep;
}

double phase_noise_threshold(WitnessKind kind, const SymmetricState& state, NoiseConfig noise,
                             Backend backend, double sigma_hi) {
  auto margin_at = [&](double sigma) {
    noise.sigma_p = sigma;
    const NoisePipeline pipe = build_noise_pipeline(state, noise, backend, 2);
    return kind == WitnessKind::S ? evaluate_s(pipe).margin : evaluate_d(pipe).margin;
  };
  if (margin_at(0.0) <= 0.0)
    throw std::domain_error("phase_noise_threshold: no violation at sigma_p = 0");
  double lo = 0.0, hi = sigma_hi;
  if (margin_at(hi) > 0.0)
    throw std::domain_error("phase_noise_threshold: violation persists at sigma_hi");
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (margin_at(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace spinsplit
