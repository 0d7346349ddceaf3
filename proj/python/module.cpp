#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spinsplit/noise_stats.hpp"

namespace py = pybind11;
using namespace spinsplit;

namespace {

Axis axis_from_char(char c) {
  switch (c) {
    case 'x': return Axis::X;
    case 'y': return Axis::Y;
    case 'z': return Axis::Z;
  }
  throw std::invalid_argument("axis must be one of 'x', 'y', 'z'");
}

Backend backend_from_string(const std::string& s) {
  if (s == "oracle") return Backend::Oracle;
  if (s == "moment-map") return Backend::MomentMap;
  if (s == "auto") return Backend::Auto;
  throw std::invalid_argument("backend must be 'oracle', 'moment-map' or 'auto'");
}

WitnessKind kind_from_string(const std::string& s) {
  if (s == "S") return WitnessKind::S;
  if (s == "D") return WitnessKind::D;
  throw std::invalid_argument("witness kind must be 'S' or 'D'");
}

py::dict report_to_dict(const SqueezingReport& r) {
  py::dict d;
  d["xi2"] = r.xi2;
  d["xi2_db"] = r.xi2_db;
  d["squeezing_angle"] = r.squeezing_angle;
  d["mean_spin"] = py::make_tuple(r.mean_spin[0], r.mean_spin[1], r.mean_spin[2]);
  return d;
}

py::dict robustness_to_dict(const RobustnessResult& r) {
  py::dict d;
  d["p_star"] = r.p_star;
  d["violation"] = r.violation;
  d["witness_value_opt"] = r.witness_value_opt;
  d["separable_bound"] = r.separable_bound;
  d["noise_value"] = r.noise_value;
  d["spec"] = r.spec.flat();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "split spin-squeezed collective states and bipartite entanglement witnesses";

  py::class_<SymmetricState>(m, "SymmetricState")
      .def_readonly("n_atoms", &SymmetricState::n_atoms)
      .def_readonly("amplitudes", &SymmetricState::amplitudes);

  py::class_<FourModeState>(m, "FourModeState")
      .def_readonly("n_atoms", &FourModeState::n_atoms)
      .def_readonly("amplitudes", &FourModeState::amplitudes);

  py::class_<WitnessSpec>(m, "WitnessSpec")
      .def_static("s_criterion", &WitnessSpec::s_criterion)
      .def_static("minus_d_criterion", &WitnessSpec::minus_d_criterion)
      .def_static("from_flat", &WitnessSpec::from_flat, py::arg("values"), py::arg("order"))
      .def_property_readonly("order", [](const WitnessSpec& s) { return s.order; })
      .def("flat", &WitnessSpec::flat);

  m.def("coherent_state_x", &coherent_state_x, py::arg("n_atoms"));
  m.def("one_axis_twist", &one_axis_twist, py::arg("state"), py::arg("chi_t"));
  m.def(
      "rotate",
      [](const SymmetricState& s, char axis, double angle) {
        return rotate(s, axis_from_char(axis), angle);
      },
      py::arg("state"), py::arg("axis"), py::arg("angle"));
  m.def(
      "collective_moment",
      [](const SymmetricState& s, const std::string& word) {
        return collective_moment(s, word_from_string(word));
      },
      py::arg("state"), py::arg("word"));
  m.def("xi2_closed_form", &xi2_closed_form, py::arg("n_atoms"), py::arg("chi_t"));
  m.def("xi2_numeric", [](const SymmetricState& s) { return report_to_dict(xi2_numeric(s)); },
        py::arg("state"));
  m.def("framed_squeezed_state", &framed_squeezed_state, py::arg("n_atoms"), py::arg("chi_t"));
  m.def("chi_t_for_target_db", &chi_t_for_target_db, py::arg("n_atoms"), py::arg("target_db"));

  m.def("embed_in_a", &embed_in_A, py::arg("state"));
  m.def("split_half", &split_half, py::arg("state"));
  m.def(
      "lcso_moment",
      [](const FourModeState& s, const std::string& word_a, const std::string& word_b) {
        return lcso_moment(s, {word_from_string(word_a), word_from_string(word_b)});
      },
      py::arg("state"), py::arg("word_a"), py::arg("word_b"));
  m.def(
      "sample_measurements",
      [](const FourModeState& s, char axis_a, char axis_b, int n_runs, std::uint64_t seed) {
        const auto recs =
            sample_measurements(s, {axis_from_char(axis_a), axis_from_char(axis_b)}, n_runs, seed);
        py::list out;
        for (const auto& r : recs) out.append(py::make_tuple(r.n_a1, r.n_a2, r.n_b1, r.n_b2));
        return out;
      },
      py::arg("state"), py::arg("axis_a"), py::arg("axis_b"), py::arg("n_runs"), py::arg("seed"));

  m.def(
      "bound_binomial",
      [](const WitnessSpec& spec, int n, double tail_eps, int restarts, std::uint64_t seed) {
        return bound_binomial(spec, n, tail_eps, restarts, seed);
      },
      py::arg("spec"), py::arg("n_atoms"), py::arg("tail_eps") = 1e-12, py::arg("restarts") = 64,
      py::arg("seed") = 1);

  m.def(
      "robustness",
      [](const WitnessSpec& spec, const SymmetricState& state, const std::string& backend) {
        RobustnessOptions opts;
        opts.backend = backend_from_string(backend);
        return robustness_to_dict(robustness(spec, state, opts));
      },
      py::arg("spec"), py::arg("state"), py::arg("backend") = "auto");

  m.def(
      "search_optimal",
      [](const SymmetricState& state, int order, bool symmetric, int restarts, std::uint64_t seed,
         int threads) {
        SearchOptions opts;
        opts.symmetric = symmetric;
        opts.restarts = restarts;
        opts.seed = seed;
        opts.threads = threads;
        return robustness_to_dict(search_optimal(state, order, opts));
      },
      py::arg("state"), py::arg("order"), py::arg("symmetric") = false, py::arg("restarts") = 200,
      py::arg("seed") = 1, py::arg("threads") = 1);

  m.def(
      "witness_under_noise",
      [](const std::string& kind, const SymmetricState& state, double p_white, double sigma_p,
         double sigma_c, const std::string& backend) {
        const NoisePipeline pipe = build_noise_pipeline(state, {p_white, sigma_p, sigma_c},
                                                        backend_from_string(backend), 2);
        const WitnessUnderNoise w =
            kind_from_string(kind) == WitnessKind::S ? evaluate_s(pipe) : evaluate_d(pipe);
        py::dict d;
        d["value"] = w.value;
        d["threshold"] = w.threshold;
        d["violated"] = w.violated;
        d["margin"] = w.margin;
        return d;
      },
      py::arg("kind"), py::arg("state"), py::arg("p_white") = 1.0, py::arg("sigma_p") = 0.0,
      py::arg("sigma_c") = 0.0, py::arg("backend") = "auto");

  m.def(
      "required_runs",
      [](const std::string& kind, const SymmetricState& state, double p_white, double sigma_p,
         double sigma_c, const std::string& backend, double k_sigma) {
        const EstimatorReport rep =
            required_runs(kind_from_string(kind), nullptr, state, {p_white, sigma_p, sigma_c},
                          backend_from_string(backend), k_sigma);
        py::dict d;
        d["value"] = rep.witness.value;
        d["threshold"] = rep.witness.threshold;
        d["violated"] = rep.witness.violated;
        d["sigma2"] = py::make_tuple(rep.setting_variance[0], rep.setting_variance[1],
                                     rep.setting_variance[2]);
        if (rep.required_runs)
          d["required_runs"] = *rep.required_runs;
        else
          d["required_runs"] = py::none();
        return d;
      },
      py::arg("kind"), py::arg("state"), py::arg("p_white") = 1.0, py::arg("sigma_p") = 0.0,
      py::arg("sigma_c") = 0.0, py::arg("backend") = "auto", py::arg("k_sigma") = 3.0);

  m.def("white_noise_second_moment_coeff", &white_noise_second_moment_coeff, py::arg("n_atoms"));

#ifdef SPINSPLIT_VERSION
  m.attr("__version__") = SPINSPLIT_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
