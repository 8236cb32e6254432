// Copyright 2026 The qswitch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qswitch/cli.hpp"
#include "qswitch/errors.hpp"
#include "qswitch/experiment.hpp"
#include "qswitch/fixtures.hpp"
#include "qswitch/graphstate.hpp"
#include "qswitch/lyapunov.hpp"
#include "qswitch/mme.hpp"
#include "qswitch/sme.hpp"
#include "qswitch/switching.hpp"

#include <sstream>

namespace py = pybind11;
using namespace qswitch;

namespace {

DensityOperator as_state(const Operator& m, double tol = kDefaultTol) {
    return DensityOperator::validate(m, tol);
}

TargetSubspace as_target(const Operator& projector) { return TargetSubspace::from_projector(projector); }

py::dict gas_dict(const GasReport& r) {
    py::dict d;
    d["is_invariant"] = r.is_invariant;
    d["is_gas"] = r.is_gas;
    d["reduced"] = r.spectrum.reduced;
    d["invariance_defect"] = r.spectrum.invariance_defect;
    d["eigenvalues"] = r.spectrum.eigenvalues;
    return d;
}

py::dict summary_dict(const EnsembleSummary& s) {
    py::dict d;
    d["times"] = s.times;
    py::dict laws;
    for (const LawSeries& l : s.laws) {
        py::dict series;
        series["mean_dist"] = l.mean_dist;
        series["std_dist"] = l.std_dist;
        series["mean_v"] = l.mean_v;
        series["std_v"] = l.std_v;
        laws[py::str(l.label)] = series;
    }
    d["laws"] = laws;
    d["config_hash"] = s.config_hash;
    d["seed"] = s.seed;
    d["version"] = s.version;
    return d;
}

}  // namespace

PYBIND11_MODULE(_qswitch, m) {
    m.doc() = "Switching control of open quantum systems";
    m.attr("__version__") = QSWITCH_VERSION;

    py::register_exception<ValidationError>(m, "ValidationError");
    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<PreconditionError>(m, "PreconditionError");
    py::register_exception<DimensionError>(m, "DimensionError");

    // quantum core
    m.def("kron", [](const Operator& a, const Operator& b) { return kron(a, b); });
    m.def("dissipator", [](const Operator& a, const Operator& rho) { return dissipator(a, rho); });
    m.def("backaction", [](const Operator& c, const Operator& rho) { return backaction(c, rho); });
    m.def("commutator_drift", [](const Operator& h, const Operator& rho) { return commutator_drift(h, rho); });
    m.def("trace_distance", [](const Operator& a, const Operator& b) { return trace_distance(a, b); });
    m.def("validate_density", [](const Operator& op, double tol) { return validate_density(op, tol).matrix(); },
          py::arg("op"), py::arg("tol") = kDefaultTol);

    // master equation
    py::class_<LindbladGenerator>(m, "LindbladGenerator")
        .def(py::init<Operator, std::vector<Operator>, Operator, std::string>(), py::arg("hamiltonian"),
             py::arg("noise_ops"), py::arg("measurement_op"), py::arg("label") = "")
        .def_property_readonly("hamiltonian", &LindbladGenerator::hamiltonian)
        .def_property_readonly("noise_ops", &LindbladGenerator::noise_ops)
        .def_property_readonly("measurement_op", &LindbladGenerator::measurement_op)
        .def_property_readonly("label", &LindbladGenerator::label)
        .def("apply", [](const LindbladGenerator& g, const Operator& rho) { return g.apply(rho); })
        .def("__repr__", [](const LindbladGenerator& g) {
            return "<LindbladGenerator '" + g.label() + "' dim=" + std::to_string(g.dim()) + ">";
        });

    m.def("mme_propagate",
          [](const LindbladGenerator& g, const Operator& rho0, double dt, long n_steps) {
              std::vector<Operator> out;
              for (const auto& r : mme_propagate(g, as_state(rho0), dt, n_steps)) out.push_back(r.matrix());
              return out;
          },
          py::arg("gen"), py::arg("rho0"), py::arg("dt"), py::arg("n_steps"));
    m.def("vectorize_generator", [](const LindbladGenerator& g) { return vectorize_generator(g); });
    m.def("check_gas",
          [](const std::vector<LindbladGenerator>& gens, const std::vector<double>& alpha,
             const Operator& target_projector) {
              return gas_dict(check_gas(convex_combine(gens, alpha), as_target(target_projector)));
          },
          py::arg("gens"), py::arg("alpha"), py::arg("target_projector"));

    // certificates
    m.def("construct_k",
          [](const std::vector<LindbladGenerator>& gens, const std::vector<double>& alpha,
             const Operator& target_projector) {
              CertificateConstruction c = construct_k(convex_combine(gens, alpha), as_target(target_projector));
              py::dict d;
              d["k"] = c.certificate.k();
              d["origin"] = to_string(c.certificate.origin());
              d["dominant_eigenvalue"] = c.dominant_eigenvalue;
              d["multiplicity"] = c.dominant_multiplicity;
              d["drift_bound"] = c.drift_bound;
              return d;
          },
          py::arg("gens"), py::arg("alpha"), py::arg("target_projector"));
    m.def("v_drift",
          [](const Operator& k, const Operator& target_projector, const LindbladGenerator& g,
             const Operator& rho) {
              return v_drift(LyapunovCertificate::from_matrix(k, as_target(target_projector)), g, as_state(rho));
          });
    m.def("dwell_bound",
          [](const Operator& k, const Operator& target_projector, const std::vector<LindbladGenerator>& gens,
             const std::vector<double>& alpha, double r) {
              DwellBound b = dwell_bound(LyapunovCertificate::from_matrix(k, as_target(target_projector)),
                                         gens, alpha, r);
              py::dict d;
              d["r"] = b.r;
              d["k_c_min"] = b.k_c_min;
              d["k2_max"] = b.k2_max;
              d["bound"] = b.bound;
              return d;
          });

    // switching
    m.def("cyclic_index", [](double t, const std::vector<double>& alpha, double period) {
        return cyclic_index(t, alpha, period);
    });
    m.def("select_argmin",
          [](const Operator& k, const Operator& target_projector, const std::vector<LindbladGenerator>& gens,
             const Operator& rho) {
              SwitchDecision d = select_argmin(LyapunovCertificate::from_matrix(k, as_target(target_projector)),
                                               gens, as_state(rho));
              return py::make_tuple(d.j, d.v_drifts);
          });

    // stochastic master equation
    m.def("sme_step",
          [](const LindbladGenerator& g, const Operator& rho, double dw, double dt, const std::string& scheme) {
              SmeStepConfig c;
              c.dt = dt;
              c.scheme = parse_scheme(scheme);
              SmeStepResult r = sme_step(g, as_state(rho), dw, c);
              return py::make_tuple(r.rho_next.matrix(), r.dy);
          },
          py::arg("gen"), py::arg("rho"), py::arg("dw"), py::arg("dt"), py::arg("scheme") = "kraus");
    m.def("filter_step",
          [](const LindbladGenerator& g, const Operator& rho_est, double dy, double dt, const std::string& scheme) {
              SmeStepConfig c;
              c.dt = dt;
              c.scheme = parse_scheme(scheme);
              return filter_step(g, as_state(rho_est), dy, c).matrix();
          },
          py::arg("gen"), py::arg("rho_est"), py::arg("dy"), py::arg("dt"), py::arg("scheme") = "kraus");

    // graph states
    m.def("build_circuit", [](int n, const std::vector<std::pair<int, int>>& edges) {
        return build_circuit(Graph::from_one_based(n, edges));
    });
    m.def("build_stabilizer_noise", [](int n, const std::vector<std::pair<int, int>>& edges, int qubit) {
        return build_stabilizer_noise(Graph::from_one_based(n, edges), qubit);
    });
    m.def("build_graph_hamiltonian", [](int n, const std::vector<std::pair<int, int>>& edges) {
        GraphHamiltonian gh = build_graph_hamiltonian(Graph::from_one_based(n, edges));
        py::dict d;
        d["h_g"] = gh.h_g;
        d["k_g"] = gh.k_g.k();
        d["ground"] = gh.ground.matrix();
        return d;
    });
    m.def("product_state",
          [](const std::string& pattern, const std::vector<std::pair<int, int>>& edges, bool rotate) {
              return product_state(pattern, Graph::from_one_based(static_cast<int>(pattern.size()), edges), rotate)
                  .matrix();
          },
          py::arg("pattern"), py::arg("edges") = std::vector<std::pair<int, int>>{}, py::arg("rotate") = true);

    // fixtures
    m.def("counterexample_generators", &counterexample_generators);
    m.def("qubit_decay_generator", &qubit_decay_generator, py::arg("gamma") = 1.0, py::arg("kappa") = 1.0);

    // experiments
    m.def("simulation1_config", [] { return simulation1_config().to_json_text(); });
    m.def("simulation2_config", [] { return simulation2_config().to_json_text(); });
    m.def("counterexample_config", [] { return counterexample_config().to_json_text(); });
    m.def("normalize_config", [](const std::string& text) {
        return ExperimentConfig::from_json_text(text).to_json_text();
    });
    m.def("config_hash", [](const std::string& text) { return config_hash(ExperimentConfig::from_json_text(text)); });
    m.def("run_ensemble",
          [](const std::string& config_json, unsigned workers) {
              const ExperimentConfig cfg = ExperimentConfig::from_json_text(config_json);
              EnsembleSummary s;
              {
                  py::gil_scoped_release release;
                  s = run_ensemble(cfg, workers);
              }
              return summary_dict(s);
          },
          py::arg("config_json"), py::arg("workers") = 0);
    m.def("summary_csv", [](const std::string& config_json, unsigned workers) {
        const ExperimentConfig cfg = ExperimentConfig::from_json_text(config_json);
        py::gil_scoped_release release;
        return summary_csv(run_ensemble(cfg, workers));
    }, py::arg("config_json"), py::arg("workers") = 0);
    m.def("cli",
          [](std::vector<std::string> args) {
              args.insert(args.begin(), "qswitch");
              std::vector<const char*> argv;
              for (const auto& a : args) argv.push_back(a.c_str());
              std::ostringstream out, err;
              const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
              return py::make_tuple(code, out.str(), err.str());
          },
          "Runs the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
