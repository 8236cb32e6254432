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

#include "qswitch/experiment.hpp"

#include "qswitch/errors.hpp"
#include "qswitch/fixtures.hpp"
#include "qswitch/random.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace qswitch {

using nlohmann::json;

const char* version_string() { return "qswitch " QSWITCH_VERSION; }

const char* to_string(SystemKind kind) {
    return kind == SystemKind::Graph ? "graph" : "three_level";
}

const char* to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::Exact: return "exact";
        case ScenarioKind::UniformMix: return "uniform_mix";
        case ScenarioKind::OrthogonalMix: return "orthogonal_mix";
        case ScenarioKind::Custom: return "custom";
    }
    return "unknown";
}

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) {
    throw ConfigError(field, what);
}

void check_keys(const json& obj, const std::string& prefix,
                std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) bad(prefix.empty() ? "<root>" : prefix, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* a) { return key == a; }) == allowed.end()) {
            bad(prefix.empty() ? key : prefix + "." + key, "unknown field");
        }
    }
}

std::string join(const std::string& prefix, const char* key) {
    return prefix.empty() ? std::string(key) : prefix + "." + key;
}

double get_double(const json& obj, const std::string& prefix, const char* key, double def) {
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    if (!v.is_number()) bad(join(prefix, key), "expected a number");
    return v.get<double>();
}

long get_long(const json& obj, const std::string& prefix, const char* key, long def) {
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) bad(join(prefix, key), "expected an integer");
    return v.get<long>();
}

std::uint64_t get_u64(const json& obj, const std::string& prefix, const char* key,
                      std::uint64_t def) {
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0) return v.get<std::uint64_t>();
    bad(join(prefix, key), "expected a non-negative integer");
}

std::string get_string(const json& obj, const std::string& prefix, const char* key,
                       const std::string& def) {
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    if (!v.is_string()) bad(join(prefix, key), "expected a string");
    return v.get<std::string>();
}

LawKind parse_law_kind(const std::string& s, const std::string& field) {
    if (s == "cyclic") return LawKind::Cyclic;
    if (s == "state") return LawKind::StateBased;
    if (s == "measurement") return LawKind::MeasurementBased;
    bad(field, "unknown law '" + s + "'");
}

ScenarioKind parse_scenario(const std::string& s) {
    if (s == "exact") return ScenarioKind::Exact;
    if (s == "uniform_mix") return ScenarioKind::UniformMix;
    if (s == "orthogonal_mix") return ScenarioKind::OrthogonalMix;
    if (s == "custom") return ScenarioKind::Custom;
    bad("scenario.kind", "unknown scenario '" + s + "'");
}

LawSpec parse_law(const json& j, std::size_t index) {
    const std::string prefix = "laws[" + std::to_string(index) + "]";
    check_keys(j, prefix, {"kind", "estimate", "alpha", "period", "dwell_steps", "label"});
    if (!j.contains("kind")) bad(prefix + ".kind", "missing");
    LawSpec spec;
    spec.kind = parse_law_kind(get_string(j, prefix, "kind", ""), prefix + ".kind");
    const std::string est = get_string(j, prefix, "estimate", "scenario");
    if (est == "exact") {
        spec.exact_estimate = true;
    } else if (est != "scenario") {
        bad(prefix + ".estimate", "expected 'exact' or 'scenario'");
    }
    if (j.contains("alpha")) {
        const json& a = j.at("alpha");
        if (!a.is_array()) bad(prefix + ".alpha", "expected an array");
        std::vector<double> alpha;
        for (const auto& x : a) {
            if (!x.is_number()) bad(prefix + ".alpha", "expected numbers");
            alpha.push_back(x.get<double>());
        }
        spec.alpha = std::move(alpha);
    }
    if (j.contains("period")) spec.period = get_double(j, prefix, "period", 0.0);
    if (j.contains("dwell_steps")) spec.dwell_steps = get_long(j, prefix, "dwell_steps", 0);
    spec.label = get_string(j, prefix, "label", "");
    if (spec.label.empty()) spec.label = default_label(spec);
    return spec;
}

std::string flip_pattern(const std::string& p) {
    std::string out = p;
    for (char& c : out) {
        if (c == '+' || c == 'p') c = '-';
        else if (c == '-' || c == 'm') c = '+';
    }
    return out;
}

Graph config_graph(const ExperimentConfig& cfg) {
    return Graph::from_one_based(cfg.qubits, cfg.edges);
}

void append_double(std::string& out, double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    out.append(buf, res.ptr);
}

}  // namespace

std::string default_label(const LawSpec& spec) {
    switch (spec.kind) {
        case LawKind::Cyclic: return "cyclic";
        case LawKind::StateBased: return spec.exact_estimate ? "state_exact" : "state";
        case LawKind::MeasurementBased:
            return spec.exact_estimate ? "measurement_exact" : "measurement";
    }
    return "law";
}

std::vector<LawSpec> default_laws() {
    std::vector<LawSpec> laws;
    auto add = [&](LawKind kind, bool exact) {
        LawSpec s;
        s.kind = kind;
        s.exact_estimate = exact;
        s.label = default_label(s);
        laws.push_back(std::move(s));
    };
    add(LawKind::Cyclic, false);
    add(LawKind::StateBased, false);
    add(LawKind::StateBased, true);
    add(LawKind::MeasurementBased, false);
    add(LawKind::MeasurementBased, true);
    return laws;
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        bad("<document>", std::string("parse error: ") + e.what());
    }
    check_keys(doc, "",
               {"schema_version", "system", "scenario", "laws", "dt", "n_steps", "dwell_steps",
                "n_realizations", "master_seed", "scheme", "tolerance", "r", "output",
                "workers"});
    if (!doc.contains("schema_version")) bad("schema_version", "missing");
    if (get_long(doc, "", "schema_version", 0) != kSchemaVersion) {
        bad("schema_version", "unsupported version, expected " + std::to_string(kSchemaVersion));
    }

    ExperimentConfig cfg;
    if (!doc.contains("system")) bad("system", "missing");
    const json& sys = doc.at("system");
    check_keys(sys, "system",
               {"kind", "qubits", "edges", "measurement", "measurement_scale", "initial"});
    const std::string kind = get_string(sys, "system", "kind", "graph");
    if (kind == "graph") {
        cfg.system = SystemKind::Graph;
        cfg.qubits = static_cast<int>(get_long(sys, "system", "qubits", 5));
        cfg.edges.clear();
        if (sys.contains("edges")) {
            const json& edges = sys.at("edges");
            if (!edges.is_array()) bad("system.edges", "expected an array of pairs");
            for (const auto& e : edges) {
                if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
                    !e[1].is_number_integer()) {
                    bad("system.edges", "expected integer pairs");
                }
                cfg.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
            }
        }
        cfg.measurement =
            parse_graph_measurement(get_string(sys, "system", "measurement", "certificate"));
        cfg.measurement_scale = get_double(sys, "system", "measurement_scale", 1.0);
        cfg.initial = get_string(sys, "system", "initial", std::string(cfg.qubits, '-'));
    } else if (kind == "three_level") {
        cfg.system = SystemKind::ThreeLevel;
        cfg.qubits = 0;
        cfg.initial = get_string(sys, "system", "initial", "mixed");
        for (const char* k : {"qubits", "edges", "measurement", "measurement_scale"}) {
            if (sys.contains(k)) bad(std::string("system.") + k, "not used by three_level");
        }
    } else {
        bad("system.kind", "unknown system '" + kind + "'");
    }

    if (doc.contains("scenario")) {
        const json& sc = doc.at("scenario");
        check_keys(sc, "scenario", {"kind", "pattern"});
        cfg.scenario = parse_scenario(get_string(sc, "scenario", "kind", "exact"));
        cfg.scenario_pattern = get_string(sc, "scenario", "pattern", "");
    }

    if (doc.contains("laws")) {
        const json& laws = doc.at("laws");
        if (!laws.is_array()) bad("laws", "expected an array");
        for (std::size_t i = 0; i < laws.size(); ++i) cfg.laws.push_back(parse_law(laws[i], i));
    } else {
        cfg.laws = default_laws();
    }

    cfg.dt = get_double(doc, "", "dt", cfg.dt);
    cfg.n_steps = get_long(doc, "", "n_steps", cfg.n_steps);
    cfg.dwell_steps = get_long(doc, "", "dwell_steps", cfg.dwell_steps);
    cfg.n_realizations = get_long(doc, "", "n_realizations", cfg.n_realizations);
    cfg.master_seed = get_u64(doc, "", "master_seed", cfg.master_seed);
    try {
        cfg.scheme = parse_scheme(get_string(doc, "", "scheme", to_string(cfg.scheme)));
    } catch (const ConfigError&) {
        bad("scheme", "expected 'euler', 'kraus' or 'split'");
    }
    cfg.tol = get_double(doc, "", "tolerance", cfg.tol);
    cfg.r = get_double(doc, "", "r", cfg.r);
    cfg.output_path = get_string(doc, "", "output", "");
    cfg.workers = static_cast<unsigned>(get_long(doc, "", "workers", 0));
    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

void ExperimentConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) bad("dt", "must be positive");
    if (n_steps < 1) bad("n_steps", "must be positive");
    if (dwell_steps < 1) bad("dwell_steps", "must be positive");
    if (n_realizations < 1) bad("n_realizations", "must be positive");
    if (!(tol > 0.0)) bad("tolerance", "must be positive");
    if (!(r > 0.0 && r < 1.0)) bad("r", "must lie in (0, 1)");
    if (laws.empty()) bad("laws", "at least one law is required");
    for (std::size_t i = 0; i < laws.size(); ++i) {
        const auto& l = laws[i];
        const std::string prefix = "laws[" + std::to_string(i) + "]";
        if (l.dwell_steps && *l.dwell_steps < 1) bad(prefix + ".dwell_steps", "must be positive");
        if (l.period && !(*l.period > 0.0)) bad(prefix + ".period", "must be positive");
        if (l.kind != LawKind::Cyclic && (l.alpha || l.period)) {
            bad(prefix, "alpha and period apply to the cyclic law only");
        }
        for (std::size_t k = 0; k < i; ++k) {
            if (laws[k].label == l.label) bad(prefix + ".label", "duplicate label '" + l.label + "'");
        }
        if (l.label.find(',') != std::string::npos || l.label.find('\n') != std::string::npos) {
            bad(prefix + ".label", "must not contain commas or newlines");
        }
    }
    if (system == SystemKind::Graph) {
        if (qubits < 1 || qubits > kDefaultMaxQubits) {
            bad("system.qubits", "must lie in [1, " + std::to_string(kDefaultMaxQubits) + "]");
        }
        if (!(measurement_scale > 0.0)) bad("system.measurement_scale", "must be positive");
        if (static_cast<int>(initial.size()) != qubits) {
            bad("system.initial", "pattern length must equal the qubit count");
        }
        (void)config_graph(*this);
        if (scenario == ScenarioKind::Custom && scenario_pattern.empty()) {
            bad("scenario.pattern", "required for the custom scenario");
        }
        if (!scenario_pattern.empty() && static_cast<int>(scenario_pattern.size()) != qubits) {
            bad("scenario.pattern", "pattern length must equal the qubit count");
        }
    } else {
        if (initial != "mixed" && initial != "0" && initial != "1" && initial != "2") {
            bad("system.initial", "expected 'mixed' or a basis index 0..2");
        }
        if (scenario == ScenarioKind::OrthogonalMix || scenario == ScenarioKind::Custom) {
            bad("scenario.kind", "three_level supports exact and uniform_mix only");
        }
    }
}

std::string ExperimentConfig::to_json_text(int indent) const {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    json sys;
    sys["kind"] = to_string(system);
    sys["initial"] = initial;
    if (system == SystemKind::Graph) {
        sys["qubits"] = qubits;
        json edges = json::array();
        for (auto [a, b] : this->edges) edges.push_back({a, b});
        sys["edges"] = edges;
        sys["measurement"] = to_string(measurement);
        sys["measurement_scale"] = measurement_scale;
    }
    doc["system"] = sys;
    json sc;
    sc["kind"] = to_string(scenario);
    if (!scenario_pattern.empty()) sc["pattern"] = scenario_pattern;
    doc["scenario"] = sc;
    json laws_j = json::array();
    for (const auto& l : laws) {
        json lj;
        lj["kind"] = to_string(l.kind);
        lj["estimate"] = l.exact_estimate ? "exact" : "scenario";
        lj["label"] = l.label;
        if (l.alpha) lj["alpha"] = *l.alpha;
        if (l.period) lj["period"] = *l.period;
        if (l.dwell_steps) lj["dwell_steps"] = *l.dwell_steps;
        laws_j.push_back(lj);
    }
    doc["laws"] = laws_j;
    doc["dt"] = dt;
    doc["n_steps"] = n_steps;
    doc["dwell_steps"] = dwell_steps;
    doc["n_realizations"] = n_realizations;
    doc["master_seed"] = master_seed;
    doc["scheme"] = to_string(scheme);
    doc["tolerance"] = tol;
    doc["r"] = r;
    if (!output_path.empty()) doc["output"] = output_path;
    return doc.dump(indent);
}

namespace {

ExperimentConfig graph_base() {
    ExperimentConfig cfg;
    cfg.system = SystemKind::Graph;
    cfg.qubits = 5;
    cfg.edges = {{1, 2}, {1, 3}, {2, 3}, {3, 4}, {4, 5}};
    cfg.measurement = GraphMeasurement::Hamiltonian;
    cfg.initial = "--++-";
    cfg.laws = default_laws();
    cfg.dt = 0.005;
    cfg.n_steps = 1000;
    cfg.dwell_steps = 10;
    cfg.n_realizations = 100;
    cfg.scheme = Scheme::SplitExact;
    return cfg;
}

}  // namespace

ExperimentConfig simulation1_config() {
    ExperimentConfig cfg = graph_base();
    cfg.scenario = ScenarioKind::UniformMix;
    cfg.master_seed = 20240601;
    cfg.output_path = "graph_sim1.csv";
    return cfg;
}

ExperimentConfig simulation2_config() {
    ExperimentConfig cfg = graph_base();
    cfg.scenario = ScenarioKind::OrthogonalMix;
    cfg.scenario_pattern = "++--+";
    cfg.master_seed = 20240602;
    cfg.output_path = "graph_sim2.csv";
    return cfg;
}

ExperimentConfig counterexample_config() {
    ExperimentConfig cfg;
    cfg.system = SystemKind::ThreeLevel;
    cfg.qubits = 0;
    cfg.initial = "mixed";
    cfg.scenario = ScenarioKind::Exact;
    for (LawKind k : {LawKind::Cyclic, LawKind::StateBased, LawKind::MeasurementBased}) {
        LawSpec s;
        s.kind = k;
        s.label = default_label(s);
        cfg.laws.push_back(s);
    }
    cfg.dt = 0.001;
    cfg.n_steps = 50000;
    cfg.dwell_steps = 10;
    cfg.n_realizations = 200;
    cfg.master_seed = 20240603;
    cfg.output_path = "counterexample.csv";
    return cfg;
}

ExperimentSystem build_system(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.system == SystemKind::ThreeLevel) {
        ControlProblem p = counterexample_problem();
        const std::size_t m = p.generators.size();
        return {std::move(p), counterexample_target(), std::vector<double>(m, 1.0 / m)};
    }
    const Graph g = config_graph(cfg);
    GraphHamiltonian gh = build_graph_hamiltonian(g, cfg.tol);
    auto gens = graph_generators(g, gh, cfg.measurement, cfg.measurement_scale);
    const std::size_t m = gens.size();
    TargetSubspace target = gh.k_g.target();
    return {ControlProblem{std::move(gens), std::move(gh.k_g), std::move(gh.ground)},
            std::move(target), std::vector<double>(m, 1.0 / m)};
}

ScenarioStates resolve_scenario(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.system == SystemKind::ThreeLevel) {
        DensityOperator rho0 = cfg.initial == "mixed"
                                   ? DensityOperator::maximally_mixed(3)
                                   : DensityOperator::pure(basis_vector(3, cfg.initial[0] - '0'));
        if (cfg.scenario == ScenarioKind::Exact) return {rho0, rho0};
        DensityOperator est = DensityOperator::validate(
            0.5 * (rho0.matrix() + DensityOperator::maximally_mixed(3).matrix()), cfg.tol);
        return {rho0, est};
    }
    const Graph g = config_graph(cfg);
    DensityOperator rho0 = product_state(cfg.initial, g, true);
    Operator mix;
    switch (cfg.scenario) {
        case ScenarioKind::Exact: return {rho0, rho0};
        case ScenarioKind::UniformMix:
            mix = DensityOperator::maximally_mixed(g.dim()).matrix();
            break;
        case ScenarioKind::OrthogonalMix: {
            const std::string p =
                cfg.scenario_pattern.empty() ? flip_pattern(cfg.initial) : cfg.scenario_pattern;
            mix = product_state(p, g, true).matrix();
            break;
        }
        case ScenarioKind::Custom:
            mix = product_state(cfg.scenario_pattern, g, true).matrix();
            break;
    }
    return {rho0, DensityOperator::validate(0.5 * (rho0.matrix() + mix), cfg.tol)};
}

SwitchingLaw build_law(const ExperimentConfig& cfg, const LawSpec& spec,
                       const ExperimentSystem& sys) {
    const long dwell = spec.dwell_steps.value_or(cfg.dwell_steps);
    const std::size_t m = sys.problem.generators.size();
    switch (spec.kind) {
        case LawKind::Cyclic: {
            std::vector<double> alpha = spec.alpha.value_or(sys.uniform_alpha);
            if (alpha.size() != m) {
                throw ConfigError("laws.alpha", "expected " + std::to_string(m) + " weights");
            }
            const double period =
                spec.period.value_or(static_cast<double>(m) * static_cast<double>(dwell) * cfg.dt);
            return SwitchingLaw::cyclic(std::move(alpha), period, dwell);
        }
        case LawKind::StateBased: return SwitchingLaw::state_based(sys.problem.certificate, dwell);
        case LawKind::MeasurementBased:
            return SwitchingLaw::measurement_based(sys.problem.certificate, dwell);
    }
    throw ConfigError("laws.kind", "unknown law");
}

MeanStd mean_and_std(std::span<const double> x) {
    if (x.empty()) return {std::numeric_limits<double>::quiet_NaN(), 0.0};
    auto neumaier = [](auto&& term, std::size_t n) {
        double sum = 0.0, comp = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = term(i);
            const double t = sum + v;
            if (std::abs(sum) >= std::abs(v)) comp += (sum - t) + v;
            else comp += (v - t) + sum;
            sum = t;
        }
        return sum + comp;
    };
    const double n = static_cast<double>(x.size());
    const double mean = neumaier([&](std::size_t i) { return x[i]; }, x.size()) / n;
    const double ss = neumaier(
        [&](std::size_t i) {
            const double d = x[i] - mean;
            return d * d;
        },
        x.size());
    return {mean, std::sqrt(ss / n)};
}

std::uint64_t trajectory_seed(std::uint64_t master_seed, std::size_t law, std::size_t trajectory) {
    return derive_seed(master_seed, {static_cast<std::uint64_t>(law),
                                     static_cast<std::uint64_t>(trajectory)});
}

std::string config_hash(const ExperimentConfig& cfg) {
    const std::string text = cfg.to_json_text(-1);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

EnsembleRun run_ensemble_detailed(const ExperimentConfig& cfg, const RunOptions& options) {
    const ExperimentSystem sys = build_system(cfg);
    const ScenarioStates states = resolve_scenario(cfg);
    std::vector<SwitchingLaw> laws;
    for (const auto& spec : cfg.laws) laws.push_back(build_law(cfg, spec, sys));

    const std::size_t n_laws = laws.size();
    const auto m = static_cast<std::size_t>(cfg.n_realizations);
    const std::size_t total = n_laws * m;
    const auto t_len = static_cast<std::size_t>(cfg.n_steps) + 1;
    const SmeStepConfig step_cfg{cfg.dt, cfg.scheme, cfg.tol};
    const SimulationOptions sim_opts{0};

    std::vector<std::vector<double>> dist(total), vals(total);
    std::vector<std::exception_ptr> errors(total);
    std::atomic<std::size_t> next{0}, done{0};
    std::atomic<bool> failed{false};
    std::mutex progress_mu;

    auto work = [&] {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= total || failed.load()) return;
            const std::size_t law = idx / m, i = idx % m;
            const auto& spec = cfg.laws[law];
            const DensityOperator& est0 = spec.exact_estimate ? states.rho0_true : states.rho0_est;
            try {
                TrajectoryRecord rec =
                    simulate_pair(sys.problem, laws[law], states.rho0_true, est0, cfg.n_steps,
                                  step_cfg, trajectory_seed(cfg.master_seed, law, i), sim_opts);
                dist[idx] = std::move(rec.dist_true);
                vals[idx] = std::move(rec.v_true);
            } catch (const ValidationError& e) {
                std::string msg = "law=" + spec.label + " trajectory=" + std::to_string(i);
                if (e.step()) msg += " step=" + std::to_string(*e.step());
                msg += " invariant=" + e.invariant() + ": " + e.detail();
                errors[idx] = std::make_exception_ptr(Error(msg));
                failed.store(true);
            } catch (const std::exception& e) {
                errors[idx] = std::make_exception_ptr(
                    Error("law=" + spec.label + " trajectory=" + std::to_string(i) + ": " + e.what()));
                failed.store(true);
            }
            const std::size_t d = done.fetch_add(1) + 1;
            if (options.progress) {
                std::lock_guard lock(progress_mu);
                options.progress(d, total);
            }
        }
    };

    unsigned workers = options.workers != 0 ? options.workers : cfg.workers;
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(total, 1)));
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
        work();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    EnsembleRun run;
    EnsembleSummary& s = run.summary;
    s.times.resize(t_len);
    for (std::size_t t = 0; t < t_len; ++t) s.times[t] = static_cast<double>(t) * cfg.dt;
    std::vector<double> column(m);
    for (std::size_t law = 0; law < n_laws; ++law) {
        LawSeries series;
        series.label = cfg.laws[law].label;
        for (auto* v : {&series.mean_dist, &series.std_dist, &series.mean_v, &series.std_v}) {
            v->resize(t_len);
        }
        for (std::size_t t = 0; t < t_len; ++t) {
            for (std::size_t i = 0; i < m; ++i) column[i] = dist[law * m + i][t];
            MeanStd md = mean_and_std(column);
            for (std::size_t i = 0; i < m; ++i) column[i] = vals[law * m + i][t];
            MeanStd mv = mean_and_std(column);
            series.mean_dist[t] = md.mean;
            series.std_dist[t] = md.std;
            series.mean_v[t] = mv.mean;
            series.std_v[t] = mv.std;
        }
        s.laws.push_back(std::move(series));
    }
    s.config_json = cfg.to_json_text();
    s.seed = cfg.master_seed;
    s.config_hash = config_hash(cfg);
    s.version = version_string();

    if (options.keep_paths) {
        run.v_paths.resize(n_laws);
        run.dist_paths.resize(n_laws);
        for (std::size_t law = 0; law < n_laws; ++law) {
            for (std::size_t i = 0; i < m; ++i) {
                run.v_paths[law].push_back(std::move(vals[law * m + i]));
                run.dist_paths[law].push_back(std::move(dist[law * m + i]));
            }
        }
    }
    return run;
}

EnsembleSummary run_ensemble(const ExperimentConfig& cfg, unsigned workers) {
    RunOptions opts;
    opts.workers = workers;
    return run_ensemble_detailed(cfg, opts).summary;
}

std::string summary_csv(const EnsembleSummary& summary) {
    std::string out = "t,law,mean_dist,std_dist,mean_v,std_v\n";
    for (std::size_t t = 0; t < summary.times.size(); ++t) {
        for (const auto& law : summary.laws) {
            append_double(out, summary.times[t]);
            out += ',';
            out += law.label;
            for (const auto* v : {&law.mean_dist, &law.std_dist, &law.mean_v, &law.std_v}) {
                out += ',';
                append_double(out, (*v)[t]);
            }
            out += '\n';
        }
    }
    return out;
}

void write_summary(const EnsembleSummary& summary, const std::string& path) {
    auto write_file = [](const std::string& p, const std::string& text) {
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open '" + p + "' for writing");
        out << text;
        out.flush();
        if (!out) throw Error("write failed for '" + p + "'");
    };
    write_file(path, summary_csv(summary));
    json meta;
    meta["version"] = summary.version;
    meta["master_seed"] = summary.seed;
    meta["config_hash"] = summary.config_hash;
    meta["columns"] = {"t", "law", "mean_dist", "std_dist", "mean_v", "std_v"};
    json labels = json::array();
    for (const auto& l : summary.laws) labels.push_back(l.label);
    meta["laws"] = labels;
    meta["config"] = summary.config_json.empty() ? json(nullptr) : json::parse(summary.config_json);
    write_file(path + ".meta.json", meta.dump(2) + "\n");
}

EnsembleSummary parse_summary_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "t,law,mean_dist,std_dist,mean_v,std_v") {
        throw Error("summary: missing or malformed header");
    }
    EnsembleSummary s;
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        for (;;) {
            const std::size_t pos = line.find(',', start);
            cells.push_back(line.substr(start, pos - start));
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
        if (cells.size() != 6) throw Error("summary: line " + std::to_string(lineno) + ": expected 6 fields");
        double vals[5];
        const int idx[5] = {0, 2, 3, 4, 5};
        for (int k = 0; k < 5; ++k) {
            const std::string& c = cells[idx[k]];
            auto res = std::from_chars(c.data(), c.data() + c.size(), vals[k]);
            if (res.ec != std::errc() || res.ptr != c.data() + c.size()) {
                throw Error("summary: line " + std::to_string(lineno) + ": bad number '" + c + "'");
            }
        }
        if (s.times.empty() || s.times.back() != vals[0]) s.times.push_back(vals[0]);
        auto it = std::find_if(s.laws.begin(), s.laws.end(),
                               [&](const LawSeries& l) { return l.label == cells[1]; });
        if (it == s.laws.end()) {
            s.laws.push_back(LawSeries{cells[1], {}, {}, {}, {}});
            it = std::prev(s.laws.end());
        }
        it->mean_dist.push_back(vals[1]);
        it->std_dist.push_back(vals[2]);
        it->mean_v.push_back(vals[3]);
        it->std_v.push_back(vals[4]);
    }
    for (const auto& l : s.laws) {
        if (l.mean_dist.size() != s.times.size()) throw Error("summary: ragged law series");
    }
    return s;
}

EnsembleSummary read_summary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_summary_csv(ss.str());
}

std::vector<GasLine> gas_survey(const ExperimentConfig& cfg) {
    const ExperimentSystem sys = build_system(cfg);
    const auto& gens = sys.problem.generators;
    const std::size_t m = gens.size();
    std::vector<GasLine> lines;
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<double> alpha(m, 0.0);
        alpha[j] = 1.0;
        lines.push_back({gens[j].label(), alpha, check_gas(gens[j], sys.target, cfg.tol)});
    }
    std::vector<std::vector<double>> grid;
    if (m == 2) {
        for (int k = 0; k <= 10; ++k) grid.push_back({k / 10.0, 1.0 - k / 10.0});
    } else {
        grid.push_back(sys.uniform_alpha);
    }
    for (auto& alpha : grid) {
        std::string label = "combination";
        lines.push_back({label, alpha, check_gas(convex_combine(gens, alpha, cfg.tol), sys.target, cfg.tol)});
    }
    return lines;
}

}  // namespace qswitch
