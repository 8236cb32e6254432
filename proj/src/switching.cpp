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

#include "qswitch/switching.hpp"

#include "qswitch/errors.hpp"

#include <cmath>
#include <limits>

namespace qswitch {

namespace {

void validate_alpha(std::span<const double> alpha) {
    if (alpha.empty()) throw PreconditionError("cyclic law: empty weight vector");
    double sum = 0.0;
    for (double a : alpha) {
        if (!(a >= 0.0)) throw PreconditionError("cyclic law: negative weight");
        sum += a;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw PreconditionError("cyclic law: weights must sum to 1");
}

}  // namespace

const char* to_string(LawKind kind) {
    switch (kind) {
        case LawKind::Cyclic: return "cyclic";
        case LawKind::StateBased: return "state";
        case LawKind::MeasurementBased: return "measurement";
    }
    return "unknown";
}

SwitchingLaw::SwitchingLaw(Variant law, TieBreak tie_break)
    : law_(std::move(law)), tie_break_(tie_break) {
    if (dwell_steps() < 1) throw PreconditionError("switching law: dwell_steps must be >= 1");
    if (const auto* c = std::get_if<CyclicLaw>(&law_)) {
        validate_alpha(c->alpha);
        if (!(c->period > 0.0)) throw PreconditionError("cyclic law: period must be positive");
    }
}

SwitchingLaw SwitchingLaw::cyclic(std::vector<double> alpha, double period, long dwell_steps) {
    return SwitchingLaw(CyclicLaw{std::move(alpha), period, dwell_steps});
}

SwitchingLaw SwitchingLaw::state_based(LyapunovCertificate cert, long dwell_steps) {
    return SwitchingLaw(StateBasedLaw{std::move(cert), dwell_steps});
}

SwitchingLaw SwitchingLaw::measurement_based(LyapunovCertificate cert, long dwell_steps) {
    return SwitchingLaw(MeasurementBasedLaw{std::move(cert), dwell_steps});
}

LawKind SwitchingLaw::kind() const noexcept {
    switch (law_.index()) {
        case 0: return LawKind::Cyclic;
        case 1: return LawKind::StateBased;
        default: return LawKind::MeasurementBased;
    }
}

long SwitchingLaw::dwell_steps() const noexcept {
    return std::visit([](const auto& l) { return l.dwell_steps; }, law_);
}

const LyapunovCertificate* SwitchingLaw::certificate() const noexcept {
    if (const auto* s = std::get_if<StateBasedLaw>(&law_)) return &s->cert;
    if (const auto* m = std::get_if<MeasurementBasedLaw>(&law_)) return &m->cert;
    return nullptr;
}

std::size_t cyclic_index(double t, std::span<const double> alpha, double period) {
    validate_alpha(alpha);
    if (!(period > 0.0)) throw PreconditionError("cyclic law: period must be positive");
    const double eps = 1e-9 * period;
    double pos = t - std::floor(t / period) * period;
    if (pos > period - eps) pos = 0.0;
    double edge = 0.0;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        edge += alpha[j] * period;
        if (pos < edge - eps) return j;
    }
    // Rounding in the prefix sums: fall back to the last index with weight.
    for (std::size_t j = alpha.size(); j-- > 0;) {
        if (alpha[j] > 0.0) return j;
    }
    return alpha.size() - 1;
}

std::size_t argmin_index(std::span<const double> drifts, TieBreak) {
    if (drifts.empty()) throw PreconditionError("argmin over an empty generator set");
    double best = std::numeric_limits<double>::infinity();
    for (double v : drifts) best = std::min(best, v);
    for (std::size_t j = 0; j < drifts.size(); ++j) {
        if (drifts[j] <= best + kTieTol) return j;
    }
    return 0;
}

SwitchDecision select_argmin(const LyapunovCertificate& cert,
                             std::span<const LindbladGenerator> gens, const DensityOperator& rho,
                             TieBreak tie_break) {
    if (gens.empty()) throw PreconditionError("select_argmin: empty generator set");
    SwitchDecision d;
    d.v_drifts.reserve(gens.size());
    for (const LindbladGenerator& g : gens) d.v_drifts.push_back(v_drift(cert, g, rho));
    d.j = argmin_index(d.v_drifts, tie_break);
    return d;
}

Scheduler::Scheduler(SwitchingLaw law, std::span<const LindbladGenerator> gens)
    : law_(std::move(law)), n_gens_(gens.size()) {
    if (gens.empty()) throw PreconditionError("scheduler: empty generator set");
    if (const auto* c = std::get_if<CyclicLaw>(&law_.variant())) {
        if (c->alpha.size() != gens.size()) {
            throw PreconditionError("cyclic law: weight count does not match the generator set");
        }
    }
    if (const LyapunovCertificate* cert = law_.certificate()) {
        for (const LindbladGenerator& g : gens) {
            if (g.dim() != cert->dim()) throw DimensionError("scheduler: dimension mismatch");
            drift_observables_.push_back(hermitize(g.dual_apply(cert->k())));
        }
    }
}

std::vector<double> Scheduler::drifts(const DensityOperator& rho) const {
    std::vector<double> out;
    out.reserve(drift_observables_.size());
    for (const Operator& q : drift_observables_) out.push_back(real_trace_product(q, rho.matrix()));
    return out;
}

const SwitchDecision& Scheduler::schedule(long step, double t,
                                          const DensityOperator& rho_for_decision) {
    if (held_ && step >= 0 && step < held_->valid_until_step) return *held_;
    const long dwell = law_.dwell_steps();
    SwitchDecision d;
    d.valid_until_step = (step / dwell + 1) * dwell;
    if (const auto* c = std::get_if<CyclicLaw>(&law_.variant())) {
        d.j = cyclic_index(t, c->alpha, c->period);
    } else {
        d.v_drifts = drifts(rho_for_decision);
        d.j = argmin_index(d.v_drifts, law_.tie_break());
    }
    held_ = std::move(d);
    return *held_;
}

}  // namespace qswitch
