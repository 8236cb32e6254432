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

// Cyclic, state-based and measurement-based switching laws and the
// dwell-time scheduler that holds decisions between switching steps.

#include "qswitch/lyapunov.hpp"
#include "qswitch/mme.hpp"

#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace qswitch {

enum class TieBreak { LowestIndex };

// Drifts within this distance of the minimum count as tied.
inline constexpr double kTieTol = 1e-12;

// Each index j owns a sub-interval of length alpha_j * period, in ascending
// index order. `dwell_steps` is the step granularity at which the clock is read.
struct CyclicLaw {
    std::vector<double> alpha;
    double period = 1.0;
    long dwell_steps = 1;
};

// argmin_j tr(K L_j(rho_hat)) with rho_hat the open-loop master-equation estimate.
struct StateBasedLaw {
    LyapunovCertificate cert;
    long dwell_steps = 1;
};

// argmin_j tr(K L_j(rho_est)) with rho_est the filter driven by the measurement record.
struct MeasurementBasedLaw {
    LyapunovCertificate cert;
    long dwell_steps = 1;
};

enum class LawKind { Cyclic, StateBased, MeasurementBased };

const char* to_string(LawKind kind);

class SwitchingLaw {
public:
    using Variant = std::variant<CyclicLaw, StateBasedLaw, MeasurementBasedLaw>;

    explicit SwitchingLaw(Variant law, TieBreak tie_break = TieBreak::LowestIndex);

    static SwitchingLaw cyclic(std::vector<double> alpha, double period, long dwell_steps = 1);
    static SwitchingLaw state_based(LyapunovCertificate cert, long dwell_steps);
    static SwitchingLaw measurement_based(LyapunovCertificate cert, long dwell_steps);

    const Variant& variant() const noexcept { return law_; }
    TieBreak tie_break() const noexcept { return tie_break_; }
    LawKind kind() const noexcept;
    long dwell_steps() const noexcept;
    // Certificate for the argmin laws, nullptr for the cyclic law.
    const LyapunovCertificate* certificate() const noexcept;

private:
    Variant law_;
    TieBreak tie_break_;
};

struct SwitchDecision {
    std::size_t j = 0;
    long valid_until_step = 0;
    std::vector<double> v_drifts;  // empty for the cyclic law
};

// Boundaries are right-open: a time exactly on a partition point belongs to
// the next index. Points within 1e-9 * period of a boundary snap to it.
std::size_t cyclic_index(double t, std::span<const double> alpha, double period);

std::size_t argmin_index(std::span<const double> drifts, TieBreak tie_break = TieBreak::LowestIndex);

// Evaluates tr(K L_j(rho)) for every j and returns the minimizer.
SwitchDecision select_argmin(const LyapunovCertificate& cert,
                             std::span<const LindbladGenerator> gens, const DensityOperator& rho,
                             TieBreak tie_break = TieBreak::LowestIndex);

// One per trajectory. Caches the drift observables L_j^dag(K) so that each
// decision costs O(m d^2).
class Scheduler {
public:
    Scheduler(SwitchingLaw law, std::span<const LindbladGenerator> gens);

    // Recomputes at multiples of dwell_steps (or when nothing is held) and
    // otherwise returns the held decision. `rho_for_decision` is ignored by
    // the cyclic law.
    const SwitchDecision& schedule(long step, double t, const DensityOperator& rho_for_decision);

    // tr(K L_j(rho)) from the cached observables.
    std::vector<double> drifts(const DensityOperator& rho) const;

    const SwitchingLaw& law() const noexcept { return law_; }
    std::size_t size() const noexcept { return n_gens_; }
    void reset() { held_.reset(); }

private:
    SwitchingLaw law_;
    std::size_t n_gens_;
    std::vector<Operator> drift_observables_;
    std::optional<SwitchDecision> held_;
};

}  // namespace qswitch
