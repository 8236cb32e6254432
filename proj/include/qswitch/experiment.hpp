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

#pragma once

// Experiment configuration, seeded ensemble runs and CSV output.

#include "qswitch/graphstate.hpp"
#include "qswitch/linalg.hpp"
#include "qswitch/sme.hpp"
#include "qswitch/switching.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qswitch {

inline constexpr int kSchemaVersion = 1;
const char* version_string();  // "qswitch <semver>"

enum class SystemKind { Graph, ThreeLevel };
enum class ScenarioKind { Exact, UniformMix, OrthogonalMix, Custom };

const char* to_string(SystemKind kind);
const char* to_string(ScenarioKind kind);

struct LawSpec {
    LawKind kind = LawKind::MeasurementBased;
    bool exact_estimate = false;              // ignore the scenario, start the estimate at rho0
    std::optional<std::vector<double>> alpha;  // cyclic only; uniform when absent
    std::optional<double> period;              // cyclic only; m * dwell * dt when absent
    std::optional<long> dwell_steps;           // overrides the experiment-wide value
    std::string label;                         // filled by the parser when empty
};

struct ExperimentConfig {
    SystemKind system = SystemKind::Graph;
    // graph system
    int qubits = 5;
    std::vector<std::pair<int, int>> edges;  // 1-based
    GraphMeasurement measurement = GraphMeasurement::Certificate;
    double measurement_scale = 1.0;
    // graph: +/- pattern; three_level: "mixed" or a basis index "0".."2"
    std::string initial = "--++-";

    ScenarioKind scenario = ScenarioKind::Exact;
    std::string scenario_pattern;  // custom and orthogonal_mix

    std::vector<LawSpec> laws;
    double dt = 0.005;
    long n_steps = 1000;
    long dwell_steps = 10;
    long n_realizations = 100;
    std::uint64_t master_seed = 1;
    Scheme scheme = Scheme::KrausPositive;
    double tol = kDefaultTol;
    double r = 0.5;
    std::string output_path;
    unsigned workers = 0;  // 0: hardware concurrency; not part of the config identity

    // Throws ConfigError naming the offending field.
    static ExperimentConfig from_json_text(const std::string& text);
    static ExperimentConfig load(const std::string& path);
    // Canonical document (sorted keys); excludes `workers`.
    std::string to_json_text(int indent = 2) const;
    void validate() const;
};

// Default law list: cyclic, state, state_exact, measurement, measurement_exact.
std::vector<LawSpec> default_laws();
std::string default_label(const LawSpec& spec);

// Shipped reference configurations.
ExperimentConfig simulation1_config();
ExperimentConfig simulation2_config();
ExperimentConfig counterexample_config();

struct ExperimentSystem {
    ControlProblem problem;
    TargetSubspace target;
    std::vector<double> uniform_alpha;
};

ExperimentSystem build_system(const ExperimentConfig& cfg);

struct ScenarioStates {
    DensityOperator rho0_true;
    DensityOperator rho0_est;
};

ScenarioStates resolve_scenario(const ExperimentConfig& cfg);

SwitchingLaw build_law(const ExperimentConfig& cfg, const LawSpec& spec,
                       const ExperimentSystem& sys);

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;  // population (ddof = 0)
};

// Two-pass, compensated, in index order.
MeanStd mean_and_std(std::span<const double> x);

struct LawSeries {
    std::string label;
    std::vector<double> mean_dist, std_dist, mean_v, std_v;
};

struct EnsembleSummary {
    std::vector<double> times;
    std::vector<LawSeries> laws;
    std::string config_json;
    std::uint64_t seed = 0;
    std::string config_hash;
    std::string version;
};

struct RunOptions {
    unsigned workers = 0;  // overrides cfg.workers when nonzero
    bool keep_paths = false;
    std::function<void(std::size_t done, std::size_t total)> progress;
};

struct EnsembleRun {
    EnsembleSummary summary;
    // [law][trajectory][step], filled when keep_paths is set
    std::vector<std::vector<std::vector<double>>> v_paths;
    std::vector<std::vector<std::vector<double>>> dist_paths;
};

std::uint64_t trajectory_seed(std::uint64_t master_seed, std::size_t law, std::size_t trajectory);

EnsembleRun run_ensemble_detailed(const ExperimentConfig& cfg, const RunOptions& options = {});
EnsembleSummary run_ensemble(const ExperimentConfig& cfg, unsigned workers = 0);

// FNV-1a 64 of the canonical config document, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

// Writes `path` and `path + ".meta.json"`.
void write_summary(const EnsembleSummary& summary, const std::string& path);
std::string summary_csv(const EnsembleSummary& summary);
// Reads the CSV only; metadata fields stay empty.
EnsembleSummary read_summary(const std::string& path);
EnsembleSummary parse_summary_csv(const std::string& text);

struct GasLine {
    std::string label;
    std::vector<double> alpha;
    GasReport report;
};

// Each generator on its own, then convex combinations: the 0.1 grid for
// two generators, the uniform weights otherwise.
std::vector<GasLine> gas_survey(const ExperimentConfig& cfg);

}  // namespace qswitch
