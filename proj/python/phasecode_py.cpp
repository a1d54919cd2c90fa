// Python bindings for the phasecode library.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "phasecode/analysis.hpp"
#include "phasecode/decoder.hpp"
#include "phasecode/experiment.hpp"
#include "phasecode/fourier.hpp"
#include "phasecode/nonsparse.hpp"

namespace py = pybind11;
using namespace phasecode;

namespace {

SparseSignal make_signal(Index n, const std::vector<std::pair<Index, Complex>>& support) {
  std::vector<Component> comps;
  comps.reserve(support.size());
  for (const auto& [l, v] : support) comps.push_back({l, v});
  return SparseSignal(n, std::move(comps));
}

std::vector<std::pair<Index, Complex>> as_pairs(std::span<const Component> comps) {
  std::vector<std::pair<Index, Complex>> out;
  out.reserve(comps.size());
  for (const auto& c : comps) out.emplace_back(c.index, c.value);
  return out;
}

ModulationMode parse_mode(const std::string& s) {
  if (s == "standard") return ModulationMode::Standard;
  if (s == "periodic") return ModulationMode::Periodic;
  throw ParameterError("modulation must be standard or periodic");
}

Algorithm parse_algorithm(const std::string& s) {
  if (s == "unicolor") return Algorithm::Unicolor;
  if (s == "multicolor") return Algorithm::Multicolor;
  throw ParameterError("algorithm must be unicolor or multicolor");
}

py::dict decode_dict(const DecodeResult& r) {
  py::dict d;
  d["recovered"] = as_pairs(r.recovered);
  d["status"] = to_string(r.status);
  d["fraction_recovered"] = r.fraction_recovered;
  d["iterations"] = r.iterations;
  d["giant_after_merge"] = r.giant_after_merge;
  d["processor_calls"] = r.processor_calls;
  d["peak_state_elements"] = r.peak_state_elements;
  return d;
}

}  // namespace

PYBIND11_MODULE(_phasecode, m) {
  m.doc() = "Compressive phase retrieval with sparse-graph codes";

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<AnchorError>(m, "AnchorError", PyExc_RuntimeError);

  py::class_<DesignRow>(m, "DesignRow")
      .def_readonly("d", &DesignRow::d)
      .def_readonly("c_min", &DesignRow::c_min)
      .def_readonly("c_max", &DesignRow::c_max)
      .def_readonly("lambda_min", &DesignRow::lambda_min)
      .def_readonly("lambda_max", &DesignRow::lambda_max)
      .def_readonly("c", &DesignRow::c)
      .def_readonly("p_star", &DesignRow::p_star)
      .def_readonly("m_per_K", &DesignRow::m_per_K);

  m.def("design_row", &design_row, py::arg("d"));
  m.def("giant_component_range", [](unsigned d) {
    const auto r = giant_component_range(d);
    return py::make_tuple(r.lo, r.hi);
  });
  m.def("instability_range", [](unsigned d) {
    const auto r = instability_range(d);
    return py::make_tuple(r.lo, r.hi);
  });
  m.def("error_floor", &error_floor, py::arg("lam"), py::arg("d"));
  m.def("de_trajectory", &de_trajectory, py::arg("p_start"), py::arg("lam"), py::arg("d"),
        py::arg("steps"));

  py::class_<CodeEnsemble>(m, "CodeEnsemble")
      .def_static("balls_and_bins",
                  [](Index n, std::size_t bins, std::size_t d, std::uint64_t seed) {
                    return CodeEnsemble::balls_and_bins(n, bins, d, RngSeed{seed});
                  },
                  py::arg("n"), py::arg("bins"), py::arg("d"), py::arg("seed"))
      .def_static("crt",
                  [](const std::vector<std::uint64_t>& f, unsigned alpha) {
                    return CodeEnsemble::crt(f, alpha);
                  },
                  py::arg("coprimes"), py::arg("alpha") = 1)
      .def_property_readonly("n", &CodeEnsemble::n)
      .def_property_readonly("num_bins", &CodeEnsemble::num_bins)
      .def("bins_of", [](const CodeEnsemble& e, Index l) {
        std::vector<std::size_t> b;
        e.bins_of(l, b);
        return b;
      });

  py::class_<ModulationParams>(m, "ModulationParams")
      .def_static("draw",
                  [](Index n, std::uint64_t seed, const std::string& mode) {
                    return ModulationParams::draw(n, RngSeed{seed}, parse_mode(mode));
                  },
                  py::arg("n"), py::arg("seed"), py::arg("mode") = "standard")
      .def_readonly("n", &ModulationParams::n)
      .def_readonly("L", &ModulationParams::L);

  py::class_<MeasurementSet>(m, "MeasurementSet")
      .def_readonly("bins", &MeasurementSet::bins)
      .def_property_readonly("scalar_count", &MeasurementSet::scalar_count);

  m.def("generate_signal",
        [](Index n, std::size_t K, std::uint64_t seed) {
          const auto s = generate_signal(n, K, RngSeed{seed});
          return as_pairs(s.support());
        },
        py::arg("n"), py::arg("K"), py::arg("seed"), "Random K-sparse signal as (index, value) pairs");

  m.def("encode",
        [](Index n, const std::vector<std::pair<Index, Complex>>& support, const CodeEnsemble& e,
           const ModulationParams& p) { return encode(make_signal(n, support), e, p); },
        py::arg("n"), py::arg("support"), py::arg("ensemble"), py::arg("params"));

  m.def("decode",
        [](const MeasurementSet& meas, const CodeEnsemble& e, std::size_t K,
           const std::string& algorithm) {
          const auto r = parse_algorithm(algorithm) == Algorithm::Unicolor
                             ? decode_unicolor(meas, e, K)
                             : decode_multicolor(meas, e, K);
          return decode_dict(r);
        },
        py::arg("measurements"), py::arg("ensemble"), py::arg("K") = 0,
        py::arg("algorithm") = "unicolor");

  m.def("align_global_phase",
        [](const std::vector<std::pair<Index, Complex>>& est, Index n,
           const std::vector<std::pair<Index, Complex>>& truth) {
          std::vector<Component> e;
          for (const auto& [l, v] : est) e.push_back({l, v});
          return align_global_phase(e, make_signal(n, truth));
        });

  m.def("chain_roundtrip", [](const std::vector<Complex>& x) {
    const auto meas = chain_measure(x);
    return py::make_tuple(meas.count(), chain_decode(meas));
  });
  m.def("ff_nonsparse_roundtrip", [](const std::vector<Complex>& x) {
    const auto meas = ff_nonsparse_measure(x);
    return py::make_tuple(meas.count(), ff_nonsparse_decode(meas));
  });

  m.def("ff_verify",
        [](const std::vector<std::uint64_t>& f, std::size_t trials, std::uint64_t seed) {
          py::list out;
          for (const auto& c : ff_verify(f, trials, RngSeed{seed})) {
            py::dict d;
            d["name"] = c.name;
            d["n"] = c.n;
            d["max_residual"] = c.max_residual;
            d["passed"] = c.passed;
            out.append(d);
          }
          return out;
        },
        py::arg("coprimes"), py::arg("trials") = 10, py::arg("seed") = 1);

  m.def("simulate",
        [](Index n, std::size_t K, std::size_t d, double c, std::size_t trials,
           const std::string& algorithm, std::uint64_t seed, double threshold) {
          ExperimentConfig cfg;
          cfg.n = n;
          cfg.K = K;
          cfg.d = d;
          cfg.c = c;
          cfg.trials = trials;
          cfg.algorithm = parse_algorithm(algorithm);
          cfg.seed = RngSeed{seed};
          cfg.success_threshold = threshold;
          py::gil_scoped_release release;
          const auto s = run_simulation(cfg);
          py::gil_scoped_acquire acquire;
          py::dict out;
          out["trials"] = s.trials;
          out["failures"] = s.failures;
          out["error_probability"] = s.error_probability;
          out["ci"] = py::make_tuple(s.ci.lo, s.ci.hi);
          out["mean_fraction"] = s.mean_fraction;
          out["threshold"] = s.threshold;
          return out;
        },
        py::arg("n"), py::arg("K"), py::arg("d"), py::arg("c"), py::arg("trials") = 100,
        py::arg("algorithm") = "unicolor", py::arg("seed") = 1, py::arg("threshold") = -1.0);
}
