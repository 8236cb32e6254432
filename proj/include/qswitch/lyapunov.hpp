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

// Linear Lyapunov certificates V(rho) = tr(K rho): construction from the
// reduced dual dynamics, the control-Lyapunov condition over a generator set,
// the dwell-time bound and the practical-stability monitor.

#include "qswitch/linalg.hpp"
#include "qswitch/mme.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace qswitch {

enum class CertificateOrigin {
    Given,                     // supplied by the caller
    PerronFrobenius,           // dominant eigen-operator of the reduced dual generator
    PerturbedPerronFrobenius,  // same, shifted by gamma * I_R / r
    Resolvent,                 // K_R = -(L_R^dag)^{-1}(I_R)
};

const char* to_string(CertificateOrigin origin);

// K Hermitian, K >= 0, K P_S = 0.
class LyapunovCertificate {
public:
    static LyapunovCertificate from_matrix(const Operator& k, const TargetSubspace& target,
                                           double tol = kDefaultTol,
                                           CertificateOrigin origin = CertificateOrigin::Given);

    const Operator& k() const noexcept { return k_; }
    const TargetSubspace& target() const noexcept { return target_; }
    // Largest eigenvalue of K; bounds V(rho) <= k_max tr(P_R rho).
    double k_max() const noexcept { return k_max_; }
    CertificateOrigin origin() const noexcept { return origin_; }
    Index dim() const noexcept { return k_.rows(); }

    // K restricted to the complement block, V_R^dag K V_R.
    Operator reduced() const;
    LyapunovCertificate scaled(double factor) const;

private:
    LyapunovCertificate(Operator k, TargetSubspace target, double k_max, CertificateOrigin origin)
        : k_(std::move(k)), target_(std::move(target)), k_max_(k_max), origin_(origin) {}

    Operator k_;
    TargetSubspace target_;
    double k_max_;
    CertificateOrigin origin_;
};

double v_value(const LyapunovCertificate& cert, const DensityOperator& rho);
// tr(K L(rho)).
double v_drift(const LyapunovCertificate& cert, const LindbladGenerator& gen,
               const DensityOperator& rho);
double v_drift(const LyapunovCertificate& cert, const GeneratorCombination& gen,
               const DensityOperator& rho);

struct CertificateConstruction {
    LyapunovCertificate certificate;
    Complex dominant_eigenvalue;      // of the reduced dual generator
    int dominant_multiplicity = 0;
    double drift_bound = 0.0;         // largest eigenvalue of L_R^dag(K_R), < 0
};

// Perturbation added to a degenerate or singular Perron-Frobenius operator.
inline constexpr double kPerronPerturbation = 1e-6;

// Requires check_gas(gen, target).is_gas. The result is normalized to k_max = 1.
CertificateConstruction construct_k(const GeneratorCombination& gen, const TargetSubspace& target,
                                    double tol = kDefaultTol);
CertificateConstruction construct_k(const LindbladGenerator& gen, const TargetSubspace& target,
                                    double tol = kDefaultTol);

struct Assumption2Report {
    bool holds = false;
    std::vector<DensityOperator> witnesses;
    std::size_t n_outside = 0;
    std::size_t n_inside = 0;
    // max over samples outside the target of min_j drift
    double worst_outside = 0.0;
    // max over target-supported samples of min_j |drift|
    double worst_inside = 0.0;
};

// For every sampled rho outside the target some generator has drift < -tol,
// and on target-supported samples some generator has |drift| < tol. Samples
// are Hilbert-Schmidt mixed states, Haar pure states, rank-2 states, the basis
// states and the complement basis.
Assumption2Report verify_assumption2(const LyapunovCertificate& cert,
                                     std::span<const LindbladGenerator> gens,
                                     std::size_t n_samples, std::uint64_t seed,
                                     double tol = kDefaultTol);

struct DwellBound {
    double r = 0.0;
    double k_c_min = 0.0;
    double k2_max = 0.0;
    double bound = 0.0;  // (1 - r) k_c_min / k2_max; +inf when k2_max == 0
    bool unbounded = false;
};

// Every generator must leave the target invariant and the certificate must
// decrease strictly along the alpha-combination.
DwellBound dwell_bound(const LyapunovCertificate& cert, std::span<const LindbladGenerator> gens,
                       std::span<const double> alpha, double r, double tol = kDefaultTol);

struct StabilityMonitor {
    std::optional<long> entry_step;  // first step with tr(P_R rho) <= epsilon / 2
    bool stayed = false;             // V <= level at every step from entry on
    double level = 0.0;              // k_max * epsilon / 2
};

StabilityMonitor practical_stability_monitor(const LyapunovCertificate& cert,
                                             std::span<const DensityOperator> trajectory,
                                             double epsilon, double tol = kDefaultTol);

}  // namespace qswitch
