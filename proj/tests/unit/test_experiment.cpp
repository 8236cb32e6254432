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


#include <doctest.h>

#include "oracles.hpp"

#include "qswitch/cli.hpp"
#include "qswitch/errors.hpp"
#include "qswitch/experiment.hpp"
#include "qswitch/random.hpp"

#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <fstream>
#include <sstream>

using namespace qswitch;
using namespace qtest;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("qswitch_unit_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig small_graph(ScenarioKind scenario = ScenarioKind::Exact) {
    ExperimentConfig cfg = simulation1_config();
    cfg.scenario = scenario;
    cfg.n_steps = 40;
    cfg.n_realizations = 3;
    return cfg;
}

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr,
            std::string* err_text = nullptr) {
    args.insert(args.begin(), "qswitch");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

std::size_t count_lines(const std::string& s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("resolve_scenario") {
    ExperimentConfig cfg = simulation1_config();
    cfg.scenario = ScenarioKind::Exact;
    ScenarioStates ex = resolve_scenario(cfg);
    CHECK(ex.rho0_true.matrix() == ex.rho0_est.matrix());

    cfg.scenario = ScenarioKind::UniformMix;
    ScenarioStates um = resolve_scenario(cfg);
    std::vector<double> ev = jacobi_hermitian_eigenvalues(um.rho0_est.matrix());
    CHECK(ev.back() == doctest::Approx(0.5 + 1.0 / 64).epsilon(1e-12));
    for (std::size_t i = 0; i + 1 < ev.size(); ++i) CHECK(ev[i] == doctest::Approx(1.0 / 64).epsilon(1e-10));

    ExperimentConfig c2 = simulation2_config();
    ScenarioStates om = resolve_scenario(c2);
    const double overlap = naive_trace(naive_mul(om.rho0_true.matrix(), om.rho0_est.matrix())).real();
    CHECK(overlap == doctest::Approx(0.5));
    // supp(rho0) inside supp(rho0_est): the true pure state keeps weight 1/2
    CHECK(std::abs(naive_trace(naive_mul(om.rho0_true.matrix(), om.rho0_true.matrix())).real() - 1.0) < 1e-12);

    c2.scenario = ScenarioKind::Custom;
    c2.scenario_pattern = "+-";
    CHECK_THROWS_AS(resolve_scenario(c2), ConfigError);
    c2.scenario_pattern = "+++++";
    ScenarioStates cu = resolve_scenario(c2);
    CHECK(trace_distance(cu.rho0_est, cu.rho0_true) == doctest::Approx(0.5));
}

TEST_CASE("mean_and_std against a two-pass reference") {
    Rng rng = make_rng(61);
    std::normal_distribution<double> n(3.0, 0.01);
    std::vector<double> x(1000);
    for (double& v : x) v = n(rng);
    double mean = 0;
    for (double v : x) mean += v;
    mean /= x.size();
    double var = 0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= x.size();
    MeanStd ms = mean_and_std(x);
    CHECK(std::abs(ms.mean - mean) < 1e-12);
    CHECK(std::abs(ms.std - std::sqrt(var)) < 1e-12);
    std::vector<double> one{0.25};
    CHECK(mean_and_std(one).std == 0.0);
    CHECK(mean_and_std(one).mean == 0.25);
}

TEST_CASE("single realization reproduces the trajectory") {
    ExperimentConfig cfg = small_graph();
    cfg.n_realizations = 1;
    LawSpec m;
    m.kind = LawKind::MeasurementBased;
    m.label = "measurement";
    cfg.laws = {m};
    EnsembleSummary s = run_ensemble(cfg, 1);
    REQUIRE(s.laws.size() == 1);
    REQUIRE(s.times.size() == 41);

    ExperimentSystem sys = build_system(cfg);
    ScenarioStates st = resolve_scenario(cfg);
    SmeStepConfig sc;
    sc.dt = cfg.dt;
    sc.scheme = cfg.scheme;
    sc.tol = cfg.tol;
    TrajectoryRecord rec = simulate_pair(sys.problem, build_law(cfg, m, sys), st.rho0_true,
                                         st.rho0_est, cfg.n_steps, sc,
                                         trajectory_seed(cfg.master_seed, 0, 0), {0});
    for (std::size_t k = 0; k < s.times.size(); ++k) {
        CHECK(s.laws[0].mean_dist[k] == rec.dist_true[k]);
        CHECK(s.laws[0].mean_v[k] == rec.v_true[k]);
        CHECK(s.laws[0].std_dist[k] == 0.0);
        CHECK(s.laws[0].std_v[k] == 0.0);
    }
}

TEST_CASE("ensembles are deterministic across worker counts") {
    ExperimentConfig cfg = small_graph(ScenarioKind::OrthogonalMix);
    const std::string a = summary_csv(run_ensemble(cfg, 1));
    const std::string b = summary_csv(run_ensemble(cfg, 1));
    const std::string c = summary_csv(run_ensemble(cfg, 4));
    CHECK(a == b);
    CHECK(a == c);
    cfg.master_seed += 1;
    CHECK(summary_csv(run_ensemble(cfg, 2)) != a);

    EnsembleSummary s = run_ensemble(small_graph(), 2);
    for (const auto& law : s.laws) {
        for (std::size_t k = 0; k < s.times.size(); ++k) {
            CHECK(law.mean_dist[k] >= 0.0);
            CHECK(law.mean_dist[k] <= 1.0);
            CHECK(law.mean_v[k] >= -1e-9);
            CHECK(law.std_dist[k] >= 0.0);
        }
    }
}

TEST_CASE("summary CSV contract") {
    EnsembleSummary empty;
    CHECK(summary_csv(empty) == "t,law,mean_dist,std_dist,mean_v,std_v\n");

    EnsembleSummary s;
    s.times = {0.0, 0.005, 0.01};
    s.laws = {LawSeries{"a", {1, 0.5, 1.0 / 3}, {0, 0.1, 0.2}, {0.25, 0.125, 1e-17}, {0, 0, 0}},
              LawSeries{"b", {0.9, 0.8, 0.7}, {0, 0, 0}, {2.0 / 3, 0.5, 0.4}, {0.1, 0.2, 0.3}}};
    const std::string csv = summary_csv(s);
    CHECK(count_lines(csv) == 7);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    std::vector<std::string> keys;
    while (std::getline(in, line)) keys.push_back(line.substr(0, line.find(',', line.find(',') + 1)));
    CHECK(keys == std::vector<std::string>{"0,a", "0,b", "0.005,a", "0.005,b", "0.01,a", "0.01,b"});

    EnsembleSummary back = parse_summary_csv(csv);
    REQUIRE(back.laws.size() == 2);
    CHECK(back.times == s.times);
    for (std::size_t l = 0; l < 2; ++l) {
        CHECK(back.laws[l].label == s.laws[l].label);
        CHECK(back.laws[l].mean_dist == s.laws[l].mean_dist);
        CHECK(back.laws[l].mean_v == s.laws[l].mean_v);
        CHECK(back.laws[l].std_v == s.laws[l].std_v);
    }

    fs::path dir = scratch_dir("csv");
    write_summary(s, (dir / "s.csv").string());
    CHECK(slurp(dir / "s.csv") == csv);
    CHECK(fs::exists(dir / "s.csv.meta.json"));
    CHECK(read_summary((dir / "s.csv").string()).laws[1].mean_dist == s.laws[1].mean_dist);
    CHECK_THROWS(write_summary(s, (dir / "missing" / "x.csv").string()));
}

TEST_CASE("config parsing") {
    ExperimentConfig cfg = simulation2_config();
    const std::string text = cfg.to_json_text();
    ExperimentConfig back = ExperimentConfig::from_json_text(text);
    CHECK(back.to_json_text() == text);
    CHECK(config_hash(back) == config_hash(cfg));
    back.master_seed += 1;
    CHECK(config_hash(back) != config_hash(cfg));

    auto field_of = [&](const std::function<void(nlohmann::json&)>& edit) -> std::string {
        nlohmann::json j = nlohmann::json::parse(text);
        edit(j);
        try {
            ExperimentConfig::from_json_text(j.dump());
        } catch (const ConfigError& e) {
            return e.field();
        }
        return "";
    };
    CHECK(field_of([](auto&) {}) == "");
    CHECK(field_of([](auto& j) { j["dt"] = -1; }) == "dt");
    CHECK(field_of([](auto& j) { j["bogus"] = 1; }) == "bogus");
    CHECK(field_of([](auto& j) { j["schema_version"] = 7; }) == "schema_version");
    CHECK(field_of([](auto& j) { j["system"]["edges"] = {{1, 1}}; }) == "graph.edges");
    CHECK(field_of([](auto& j) { j["scheme"] = "rk4"; }) == "scheme");
    CHECK(field_of([](auto& j) { j["laws"][0]["kind"] = "greedy"; }).rfind("laws[0]", 0) == 0);
    CHECK(field_of([](auto& j) { j.erase("system"); }) == "system");
    try {
        ExperimentConfig::from_json_text("{");
        FAIL("expected a parse error");
    } catch (const ConfigError& e) {
        CHECK_FALSE(e.field().empty());
    }
}

TEST_CASE("gas survey on the counterexample") {
    auto lines = gas_survey(counterexample_config());
    std::size_t combos = 0;
    for (const auto& l : lines) {
        CHECK_FALSE(l.report.is_gas);
        if (l.label == "combination") ++combos;
    }
    CHECK(combos == 11);
}

TEST_CASE("cli smoke path") {
    fs::path dir = scratch_dir("cli");
    std::string out, err;
    REQUIRE(run_cli({"fixtures", "--dir", dir.string()}, &out) == 0);
    CHECK(fs::exists(dir / "counterexample.json"));
    CHECK(fs::exists(dir / "graph_sim1.json"));
    CHECK(fs::exists(dir / "graph_sim2.json"));

    const std::string csv = (dir / "ce.csv").string();
    CHECK(run_cli({"run", (dir / "counterexample.json").string(), "--realizations", "2", "--out", csv},
                  &out, &err) == 0);
    CHECK(err.empty());
    CHECK(count_lines(slurp(csv)) == 1 + 3 * 50001);

    REQUIRE(run_cli({"check-gas", (dir / "counterexample.json").string()}, &out) == 0);
    CHECK(out.find("summary gas_combination_found=0") != std::string::npos);
    CHECK(out.find("gas=1") == std::string::npos);

    const std::string g = (dir / "g.csv").string();
    CHECK(run_cli({"run", "--config", (dir / "graph_sim1.json").string(), "--realizations", "1",
                   "--law", "measurement", "--out", g}, &out) == 0);
    CHECK(count_lines(slurp(g)) == 1 + 2 * 1001);

    CHECK(run_cli({"certificate", (dir / "graph_sim1.json").string()}, &out) == 0);
    CHECK(out.find("construct status=ok") != std::string::npos);
}

TEST_CASE("cli errors") {
    std::string out, err;
    CHECK(run_cli({"frobnicate"}, &out, &err) == 2);
    CHECK(err.rfind("error kind=usage", 0) == 0);
    CHECK(count_lines(err) == 1);

    fs::path dir = scratch_dir("cli_err");
    {
        ExperimentConfig bad = counterexample_config();
        std::string text = bad.to_json_text();
        const std::string key = "\"n_steps\": 50000";
        REQUIRE(text.find(key) != std::string::npos);
        text.replace(text.find(key), key.size(), "\"n_steps\": 0");
        std::ofstream(dir / "bad.json") << text;
    }
    CHECK(run_cli({"run", (dir / "bad.json").string()}, &out, &err) == 3);
    CHECK(err.find("field=n_steps") != std::string::npos);
    CHECK(count_lines(err) == 1);

    CHECK(run_cli({"run", (dir / "missing.json").string()}, &out, &err) == 2);
    CHECK(run_cli({"--version"}, &out) == 0);
    CHECK(out.rfind("qswitch ", 0) == 0);
}
