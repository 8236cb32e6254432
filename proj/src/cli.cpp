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

#include "qswitch/cli.hpp"

#include "qswitch/errors.hpp"
#include "qswitch/experiment.hpp"
#include "qswitch/lyapunov.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace qswitch {

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out + "\"";
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

std::string alpha_text(const std::vector<double>& a) {
    std::string s;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) s += ',';
        s += num(a[i]);
    }
    return s;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open '" + p.string() + "' for writing");
    f << text;
    if (!f) throw Error("write failed for '" + p.string() + "'");
}

struct RunArgs {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<long> realizations;
    std::string out;
    std::string scheme;
    std::string law = "all";
    unsigned workers = 0;
};

int do_run(const RunArgs& a, std::ostream& out) {
    ExperimentConfig cfg = ExperimentConfig::load(a.config);
    if (a.seed) cfg.master_seed = *a.seed;
    if (a.realizations) cfg.n_realizations = *a.realizations;
    if (!a.scheme.empty()) {
        try {
            cfg.scheme = parse_scheme(a.scheme);
        } catch (const ConfigError&) {
            throw ConfigError("--scheme", "expected euler, kraus or split");
        }
    }
    if (a.law != "all") {
        LawKind kind;
        if (a.law == "cyclic") kind = LawKind::Cyclic;
        else if (a.law == "state") kind = LawKind::StateBased;
        else if (a.law == "measurement") kind = LawKind::MeasurementBased;
        else throw ConfigError("--law", "expected cyclic, state, measurement or all");
        std::erase_if(cfg.laws, [&](const LawSpec& s) { return s.kind != kind; });
        if (cfg.laws.empty()) throw ConfigError("--law", "no law of that kind in the config");
    }
    if (!a.out.empty()) cfg.output_path = a.out;
    if (cfg.output_path.empty()) throw ConfigError("output", "no output path (use --out)");
    cfg.validate();
    const EnsembleSummary s = run_ensemble(cfg, a.workers);
    write_summary(s, cfg.output_path);
    out << "wrote path=" << cfg.output_path << " rows=" << s.times.size() * s.laws.size()
        << " laws=" << s.laws.size() << " config_hash=" << s.config_hash << "\n";
    for (const auto& l : s.laws) {
        out << "final law=" << l.label << " mean_dist=" << num(l.mean_dist.back())
            << " std_dist=" << num(l.std_dist.back()) << " mean_v=" << num(l.mean_v.back())
            << "\n";
    }
    return 0;
}

int do_check_gas(const std::string& path, std::ostream& out) {
    const ExperimentConfig cfg = ExperimentConfig::load(path);
    bool any_gas_combination = false;
    for (const auto& line : gas_survey(cfg)) {
        const bool combo = line.label == "combination";
        if (combo && line.report.is_gas) any_gas_combination = true;
        out << (combo ? "combination" : "generator") << " label=" << line.label
            << " alpha=" << alpha_text(line.alpha) << " invariant=" << line.report.is_invariant
            << " gas=" << line.report.is_gas
            << " defect=" << num(line.report.spectrum.invariance_defect)
            << " abscissa=" << num(line.report.spectrum.abscissa()) << "\n";
    }
    out << "summary gas_combination_found=" << any_gas_combination << "\n";
    return 0;
}

int do_certificate(const std::string& path, double r, const std::string& out_path,
                   std::ostream& out) {
    const ExperimentConfig cfg = ExperimentConfig::load(path);
    const ExperimentSystem sys = build_system(cfg);
    const auto& gens = sys.problem.generators;
    const auto& given = sys.problem.certificate;
    out << "certificate source=configured k_max=" << num(given.k_max())
        << " origin=" << to_string(given.origin()) << "\n";

    auto report_dwell = [&](const LyapunovCertificate& cert, const char* which) {
        try {
            const DwellBound b = dwell_bound(cert, gens, sys.uniform_alpha, r, cfg.tol);
            out << "dwell source=" << which << " r=" << num(b.r) << " k_c_min=" << num(b.k_c_min)
                << " k2_max=" << num(b.k2_max) << " bound=" << num(b.bound)
                << " unbounded=" << b.unbounded << "\n";
        } catch (const Error& e) {
            out << "dwell source=" << which << " status=unavailable reason=" << quote(e.what())
                << "\n";
        }
    };
    report_dwell(given, "configured");

    nlohmann::json doc;
    try {
        const CertificateConstruction c =
            construct_k(convex_combine(gens, sys.uniform_alpha, cfg.tol), sys.target, cfg.tol);
        out << "construct status=ok origin=" << to_string(c.certificate.origin())
            << " dominant_re=" << num(c.dominant_eigenvalue.real())
            << " dominant_im=" << num(c.dominant_eigenvalue.imag())
            << " multiplicity=" << c.dominant_multiplicity
            << " drift_bound=" << num(c.drift_bound) << " k_max=" << num(c.certificate.k_max())
            << "\n";
        report_dwell(c.certificate, "constructed");
        const Operator& k = c.certificate.k();
        nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
        for (Index i = 0; i < k.rows(); ++i) {
            nlohmann::json rr = nlohmann::json::array(), ii = nlohmann::json::array();
            for (Index j = 0; j < k.cols(); ++j) {
                rr.push_back(k(i, j).real());
                ii.push_back(k(i, j).imag());
            }
            re.push_back(rr);
            im.push_back(ii);
        }
        doc["origin"] = to_string(c.certificate.origin());
        doc["k_real"] = re;
        doc["k_imag"] = im;
    } catch (const Error& e) {
        out << "construct status=failed reason=" << quote(e.what()) << "\n";
        doc["error"] = e.what();
    }
    if (!out_path.empty()) write_text(out_path, doc.dump(2) + "\n");
    return 0;
}

int do_fixtures(const std::string& dir, std::ostream& out) {
    std::filesystem::create_directories(dir);
    const std::pair<const char*, ExperimentConfig> items[] = {
        {"counterexample.json", counterexample_config()},
        {"graph_sim1.json", simulation1_config()},
        {"graph_sim2.json", simulation2_config()},
    };
    for (const auto& [name, cfg] : items) {
        const auto p = std::filesystem::path(dir) / name;
        write_text(p, cfg.to_json_text() + "\n");
        out << "fixture path=" << p.string() << "\n";
    }
    return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Switching control of open quantum systems"};
    app.set_version_flag("--version", std::string(version_string()));
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Run an ensemble and write the CSV summary");
    run->add_option("config_pos", run_args.config, "Config file")->check(CLI::ExistingFile);
    run->add_option("--config", run_args.config, "Config file")->check(CLI::ExistingFile);
    run->add_option("--seed", run_args.seed, "Master seed");
    run->add_option("--realizations", run_args.realizations, "Trajectories per law");
    run->add_option("--out", run_args.out, "Output CSV path");
    run->add_option("--scheme", run_args.scheme, "euler|kraus|split");
    run->add_option("--law", run_args.law, "cyclic|state|measurement|all");
    run->add_option("--workers", run_args.workers, "Worker threads (0: all cores)");

    std::string gas_config;
    auto* gas = app.add_subcommand("check-gas", "Invariance and GAS report");
    gas->add_option("config_pos", gas_config, "Config file")->check(CLI::ExistingFile);
    gas->add_option("--config", gas_config, "Config file")->check(CLI::ExistingFile);

    std::string cert_config, cert_out;
    double r = 0.5;
    bool r_set = false;
    auto* cert = app.add_subcommand("certificate", "Construct K and the dwell bound");
    cert->add_option("config_pos", cert_config, "Config file")->check(CLI::ExistingFile);
    cert->add_option("--config", cert_config, "Config file")->check(CLI::ExistingFile);
    cert->add_option("--r", r, "Dwell bound parameter in (0,1)")
        ->check(CLI::Range(0.0, 1.0))
        ->each([&](const std::string&) { r_set = true; });
    cert->add_option("--out", cert_out, "Write K as JSON");

    std::string fixtures_dir = ".";
    auto* fix = app.add_subcommand("fixtures", "Write the reference configs");
    fix->add_option("--dir,--out", fixtures_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << version_string() << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        err << "error kind=usage message=" << quote(msg) << "\n";
        return 2;
    }

    try {
        if (*run) {
            if (run_args.config.empty()) throw ConfigError("--config", "a config file is required");
            return do_run(run_args, out);
        }
        if (*gas) {
            if (gas_config.empty()) throw ConfigError("--config", "a config file is required");
            return do_check_gas(gas_config, out);
        }
        if (*cert) {
            if (cert_config.empty()) throw ConfigError("--config", "a config file is required");
            if (!r_set) r = ExperimentConfig::load(cert_config).r;
            return do_certificate(cert_config, r, cert_out, out);
        }
        if (*fix) return do_fixtures(fixtures_dir, out);
    } catch (const ConfigError& e) {
        err << "error kind=config field=" << e.field() << " message=" << quote(e.what()) << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error kind=runtime message=" << quote(e.what()) << "\n";
        return 1;
    }
    return 2;
}

int cli_main(int argc, const char* const* argv) {
    return cli_main(argc, argv, std::cout, std::cerr);
}

}  // namespace qswitch
