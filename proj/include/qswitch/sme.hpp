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

// Stochastic master equation under homodyne detection, the filter driven by
// the shared measurement record, and closed-loop trajectory simulation.

#include "qswitch/linalg.hpp"
#include "qswitch/lyapunov.hpp"
#include "qswitch/mme.hpp"
#include "qswitch/switching.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qswitch {

enum class Scheme {
    EulerMaruyama,  // rho + L(rho) dt + G_C(rho) dW, then validated
    KrausPositive,  // M rho M^dag + sum_k L_k rho L_k^dag dt, renormalized
    // Hermitian C only: the measurement Kraus operator exp(C dy - C^2 dt) is
    // applied exactly in the eigenbasis of C, followed by the positive noise
    // map B rho B^dag + sum_k L_k rho L_k^dag dt. Stays accurate when
    // |C| sqrt(dt) is not small.
    SplitExact,
};

const char* to_string(Scheme scheme);
// Accepts "euler", "euler_maruyama", "kraus", "kraus_positive", "split".
Scheme parse_scheme(std::string_view name);

struct SmeStepConfig {
    double dt = 0.005;
    Scheme scheme = Scheme::KrausPositive;
    double tol = kDefaultTol;
};

struct SmeStepResult {
    DensityOperator rho_next;
    double dy = 0.0;
};

// Per-generator step data for a fixed set and step size. Free functions
// below route through a one-generator integrator, so both paths share the
// same arithmetic.
class SmeIntegrator {
public:
    SmeIntegrator(std::span<const LindbladGenerator> gens, SmeStepConfig cfg);

    // dW ~ N(0, dt) supplied by the caller; dy = tr((C + C^dag) rho) dt + dW.
    SmeStepResult step(std::size_t j, const DensityOperator& rho, double dW) const;
    // Advances an estimate with the same record increment dy.
    DensityOperator filter(std::size_t j, const DensityOperator& rho_est, double dy) const;
    // Noise-averaged step: Euler on the master equation for the Euler scheme,
    // the deterministic positive map B rho B^dag + (sum_k L rho L^dag + C rho C^dag) dt
    // for the Kraus scheme, exact dephasing in the C eigenbasis followed by the
    // noise map for the split scheme.
    DensityOperator average(std::size_t j, const DensityOperator& rho) const;

    // tr((C + C^dag) rho).
    double output_mean(const Operator& rho) const;
    const SmeStepConfig& config() const noexcept { return cfg_; }
    std::size_t size() const noexcept { return gens_.size(); }

private:
    DensityOperator kraus_update(std::size_t j, const Operator& rho, double dy) const;
    DensityOperator euler_update(std::size_t j, const Operator& rho, double dw) const;
    DensityOperator split_update(std::size_t j, const Operator& rho, double dy) const;
    DensityOperator split_average(std::size_t j, const Operator& rho) const;
    Operator noise_map(std::size_t j, const Operator& rho) const;

    struct Cached {
        Operator b;        // I + (-iH - 1/2 C^dag C - 1/2 sum L^dag L) dt
        Operator b_noise;  // I + (-iH - 1/2 sum L^dag L) dt
    };
    std::vector<LindbladGenerator> gens_;
    std::vector<Cached> cache_;
    Operator c_;
    Operator c_plus_cdag_;
    Operator c_vecs_;          // split scheme: eigenvectors of C
    Eigen::VectorXd c_vals_;   // and eigenvalues
    Operator dephasing_;       // exp(-(c_a - c_b)^2 dt / 2)
    SmeStepConfig cfg_;
};

SmeStepResult sme_step(const LindbladGenerator& gen, const DensityOperator& rho, double dW,
                       const SmeStepConfig& cfg);
// Innovation dw~ = dy - tr((C + C^dag) rho_est) dt replaces dW.
DensityOperator filter_step(const LindbladGenerator& gen, const DensityOperator& rho_est,
                            double dy, const SmeStepConfig& cfg);

// Generators plus the certificate used to report V and the reference state
// used for the trace distance.
struct ControlProblem {
    std::vector<LindbladGenerator> generators;
    LyapunovCertificate certificate;
    DensityOperator target_state;
};

struct SimulationOptions {
    // Keep every k-th state (plus the last); 0 keeps none.
    long state_stride = 1;
};

// Entry k describes time t_k = k dt. dy[k] is the record increment over
// [t_{k-1}, t_k) (dy[0] = 0); selected_j[k] is the generator active on
// [t_k, t_{k+1}); decided_drift[k] is the drift the held decision was based
// on (NaN for the cyclic law).
struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<std::size_t> selected_j;
    std::vector<double> dy;
    std::vector<double> v_true;
    std::vector<double> v_est;
    std::vector<double> dist_true;
    // |tr((C + C^dag)(rho - rho_est))|
    std::vector<double> output_gap;
    std::vector<double> decided_drift;
    std::vector<long> state_steps;
    std::vector<DensityOperator> rho_true;
    std::vector<DensityOperator> rho_est;
    std::uint64_t seed = 0;

    std::size_t size() const noexcept { return times.size(); }
};

// Drives the true state with the SME and a seeded Wiener stream. The
// estimate is the filter for the measurement-based and cyclic laws and the
// noise-averaged open-loop propagation for the state-based law. Both states
// always use the selected generator. Deterministic given the inputs and seed.
TrajectoryRecord simulate_pair(const ControlProblem& problem, const SwitchingLaw& law,
                               const DensityOperator& rho0_true, const DensityOperator& rho0_est,
                               long n_steps, const SmeStepConfig& cfg, std::uint64_t seed,
                               const SimulationOptions& options = {});

}  // namespace qswitch
