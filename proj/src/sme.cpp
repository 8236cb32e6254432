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

#include "qswitch/sme.hpp"

#include "qswitch/errors.hpp"
#include "qswitch/random.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace qswitch {

namespace {

const Complex kI(0.0, 1.0);

// Hermitize, divide by the trace and pin the last diagonal entry so that the
// index-order trace is exactly one.
// The Kraus maps are positive in exact arithmetic; rounding on nearly pure
// states can leave eigenvalues slightly below zero, which later steps
// amplify. Those are clipped to zero.
constexpr double kClipShift = 1e-13;

void clip_negative(Operator& m) {
    Operator shifted = m;
    shifted.diagonal().array() += kClipShift;
    Eigen::LLT<Operator> llt(shifted);
    if (llt.info() == Eigen::Success) return;
    Eigen::SelfAdjointEigenSolver<Operator> es(m);
    const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    m = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

DensityOperator renormalize(Operator m, double tol) {
    m = hermitize(m);
    clip_negative(m);
    const double tr = trace(m).real();
    if (!(tr > 0.0) || !std::isfinite(tr)) {
        throw ValidationError("trace", "non-positive trace before renormalization (dt too large)");
    }
    m /= tr;
    const Index d = m.rows();
    double partial = 0.0;
    for (Index i = 0; i + 1 < d; ++i) partial += m(i, i).real();
    m(d - 1, d - 1) = Complex(1.0 - partial, 0.0);
    return DensityOperator::validate(std::move(m), tol);
}

}  // namespace

const char* to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::EulerMaruyama: return "euler";
        case Scheme::KrausPositive: return "kraus";
        case Scheme::SplitExact: return "split";
    }
    return "unknown";
}

Scheme parse_scheme(std::string_view name) {
    if (name == "euler" || name == "euler_maruyama") return Scheme::EulerMaruyama;
    if (name == "kraus" || name == "kraus_positive") return Scheme::KrausPositive;
    if (name == "split" || name == "split_exact") return Scheme::SplitExact;
    throw ConfigError("scheme", "unknown scheme '" + std::string(name) + "'");
}

SmeIntegrator::SmeIntegrator(std::span<const LindbladGenerator> gens, SmeStepConfig cfg)
    : gens_(gens.begin(), gens.end()), cfg_(cfg) {
    if (gens_.empty()) throw PreconditionError("integrator: empty generator set");
    if (!(cfg_.dt > 0.0)) throw PreconditionError("integrator: dt must be positive");
    const Index d = gens_.front().dim();
    c_ = gens_.front().measurement_op();
    c_plus_cdag_ = c_ + c_.adjoint();
    for (const LindbladGenerator& g : gens_) {
        if (g.dim() != d) throw DimensionError("integrator: dimension mismatch");
        if ((g.measurement_op() - c_).cwiseAbs().maxCoeff() > cfg_.tol) {
            throw PreconditionError("integrator: generators disagree on the measurement operator");
        }
        Operator a = -kI * g.hamiltonian();
        for (const Operator& l : g.noise_ops()) a -= 0.5 * (l.adjoint() * l);
        Operator b_noise = identity(d) + cfg_.dt * a;
        a -= 0.5 * (c_.adjoint() * c_);
        cache_.push_back({identity(d) + cfg_.dt * a, std::move(b_noise)});
    }
    if (cfg_.scheme == Scheme::SplitExact) {
        if (!is_hermitian(c_, cfg_.tol)) {
            throw PreconditionError("integrator: the split scheme needs a Hermitian measurement operator");
        }
        Eigen::SelfAdjointEigenSolver<Operator> es(hermitize(c_));
        c_vecs_ = es.eigenvectors();
        c_vals_ = es.eigenvalues();
        dephasing_.resize(d, d);
        for (Index a = 0; a < d; ++a) {
            for (Index b = 0; b < d; ++b) {
                const double gap = c_vals_(a) - c_vals_(b);
                dephasing_(a, b) = std::exp(-0.5 * gap * gap * cfg_.dt);
            }
        }
    }
}

Operator SmeIntegrator::noise_map(std::size_t j, const Operator& rho) const {
    const Operator& b = cache_[j].b_noise;
    Operator out = b * rho * b.adjoint();
    for (const Operator& l : gens_[j].noise_ops()) out.noalias() += cfg_.dt * (l * rho * l.adjoint());
    return out;
}

DensityOperator SmeIntegrator::split_update(std::size_t j, const Operator& rho, double dy) const {
    // Gaussian likelihood amplitudes exp(c dy - c^2 dt), shifted by the
    // largest exponent; the common factor drops out on renormalization.
    Eigen::VectorXd expo = c_vals_ * dy - c_vals_.cwiseAbs2() * cfg_.dt;
    const double top = expo.maxCoeff();
    const Eigen::VectorXd k = (expo.array() - top).exp().matrix();
    Operator x = c_vecs_.adjoint() * rho * c_vecs_;
    x = k.asDiagonal() * x * k.asDiagonal();
    x = c_vecs_ * x * c_vecs_.adjoint();
    return renormalize(noise_map(j, x), cfg_.tol);
}

DensityOperator SmeIntegrator::split_average(std::size_t j, const Operator& rho) const {
    Operator x = c_vecs_.adjoint() * rho * c_vecs_;
    x = x.cwiseProduct(dephasing_);
    x = c_vecs_ * x * c_vecs_.adjoint();
    return renormalize(noise_map(j, x), cfg_.tol);
}

double SmeIntegrator::output_mean(const Operator& rho) const {
    return real_trace_product(c_plus_cdag_, rho);
}

DensityOperator SmeIntegrator::kraus_update(std::size_t j, const Operator& rho, double dy) const {
    const Operator m = cache_[j].b + dy * c_;
    Operator out = m * rho * m.adjoint();
    for (const Operator& l : gens_[j].noise_ops()) out.noalias() += cfg_.dt * (l * rho * l.adjoint());
    return renormalize(std::move(out), cfg_.tol);
}

DensityOperator SmeIntegrator::euler_update(std::size_t j, const Operator& rho, double dw) const {
    Operator next = rho + cfg_.dt * gens_[j].apply(rho) + dw * backaction(c_, rho);
    return DensityOperator::validate(std::move(next), cfg_.tol);
}

SmeStepResult SmeIntegrator::step(std::size_t j, const DensityOperator& rho, double dW) const {
    const double dy = output_mean(rho.matrix()) * cfg_.dt + dW;
    if (cfg_.scheme == Scheme::KrausPositive) {
        return {kraus_update(j, rho.matrix(), dy), dy};
    }
    if (cfg_.scheme == Scheme::SplitExact) return {split_update(j, rho.matrix(), dy), dy};
    return {euler_update(j, rho.matrix(), dW), dy};
}

DensityOperator SmeIntegrator::filter(std::size_t j, const DensityOperator& rho_est,
                                      double dy) const {
    if (cfg_.scheme == Scheme::KrausPositive) return kraus_update(j, rho_est.matrix(), dy);
    if (cfg_.scheme == Scheme::SplitExact) return split_update(j, rho_est.matrix(), dy);
    const double innovation = dy - output_mean(rho_est.matrix()) * cfg_.dt;
    return euler_update(j, rho_est.matrix(), innovation);
}

DensityOperator SmeIntegrator::average(std::size_t j, const DensityOperator& rho) const {
    const Operator& x = rho.matrix();
    if (cfg_.scheme == Scheme::SplitExact) return split_average(j, x);
    if (cfg_.scheme == Scheme::KrausPositive) {
        const Operator& b = cache_[j].b;
        Operator out = b * x * b.adjoint();
        out.noalias() += cfg_.dt * (c_ * x * c_.adjoint());
        for (const Operator& l : gens_[j].noise_ops()) out.noalias() += cfg_.dt * (l * x * l.adjoint());
        return renormalize(std::move(out), cfg_.tol);
    }
    Operator next = x + cfg_.dt * gens_[j].apply(x);
    return DensityOperator::validate(std::move(next), cfg_.tol, 100.0 * cfg_.tol);
}

SmeStepResult sme_step(const LindbladGenerator& gen, const DensityOperator& rho, double dW,
                       const SmeStepConfig& cfg) {
    if (rho.dim() != gen.dim()) throw DimensionError("sme_step: dimension mismatch");
    return SmeIntegrator({&gen, 1}, cfg).step(0, rho, dW);
}

DensityOperator filter_step(const LindbladGenerator& gen, const DensityOperator& rho_est,
                            double dy, const SmeStepConfig& cfg) {
    if (rho_est.dim() != gen.dim()) throw DimensionError("filter_step: dimension mismatch");
    return SmeIntegrator({&gen, 1}, cfg).filter(0, rho_est, dy);
}

TrajectoryRecord simulate_pair(const ControlProblem& problem, const SwitchingLaw& law,
                               const DensityOperator& rho0_true, const DensityOperator& rho0_est,
                               long n_steps, const SmeStepConfig& cfg, std::uint64_t seed,
                               const SimulationOptions& options) {
    if (n_steps < 0) throw PreconditionError("simulate_pair: negative step count");
    const auto& gens = problem.generators;
    if (gens.empty()) throw PreconditionError("simulate_pair: empty generator set");
    const Index d = gens.front().dim();
    if (rho0_true.dim() != d || rho0_est.dim() != d || problem.target_state.dim() != d ||
        problem.certificate.dim() != d) {
        throw DimensionError("simulate_pair: dimension mismatch");
    }

    const SmeIntegrator integ(gens, cfg);
    Scheduler scheduler(law, gens);
    const bool open_loop_estimate = law.kind() == LawKind::StateBased;
    const Operator& k = problem.certificate.k();
    const Operator& target = problem.target_state.matrix();

    Rng rng = make_rng(seed);
    std::normal_distribution<double> wiener(0.0, std::sqrt(cfg.dt));

    TrajectoryRecord rec;
    rec.seed = seed;
    const auto n = static_cast<std::size_t>(n_steps) + 1;
    rec.times.reserve(n);
    rec.selected_j.reserve(n);
    rec.dy.reserve(n);
    rec.v_true.reserve(n);
    rec.v_est.reserve(n);
    rec.dist_true.reserve(n);
    rec.output_gap.reserve(n);
    rec.decided_drift.reserve(n);

    DensityOperator rho = rho0_true;
    DensityOperator est = rho0_est;
    auto observe = [&](long step, double dy) {
        rec.times.push_back(static_cast<double>(step) * cfg.dt);
        rec.dy.push_back(dy);
        rec.v_true.push_back(real_trace_product(k, rho.matrix()));
        rec.v_est.push_back(real_trace_product(k, est.matrix()));
        rec.dist_true.push_back(trace_distance(rho.matrix(), target));
        rec.output_gap.push_back(
            std::abs(integ.output_mean(rho.matrix()) - integ.output_mean(est.matrix())));
        const bool keep = options.state_stride > 0 &&
                          (step % options.state_stride == 0 || step == n_steps);
        if (keep) {
            rec.state_steps.push_back(step);
            rec.rho_true.push_back(rho);
            rec.rho_est.push_back(est);
        }
    };
    auto decide = [&](long step) {
        const SwitchDecision& dec = scheduler.schedule(step, static_cast<double>(step) * cfg.dt, est);
        rec.selected_j.push_back(dec.j);
        rec.decided_drift.push_back(dec.v_drifts.empty() ? std::numeric_limits<double>::quiet_NaN()
                                                         : dec.v_drifts[dec.j]);
        return dec.j;
    };

    observe(0, 0.0);
    for (long step = 0; step < n_steps; ++step) {
        const std::size_t j = decide(step);
        const double dW = wiener(rng);
        try {
            SmeStepResult res = integ.step(j, rho, dW);
            est = open_loop_estimate ? integ.average(j, est) : integ.filter(j, est, res.dy);
            rho = std::move(res.rho_next);
            observe(step + 1, res.dy);
        } catch (const ValidationError& e) {
            throw ValidationError(e.invariant(),
                                  e.detail() + " [generator " + std::to_string(j) + "]",
                                  step + 1);
        }
    }
    decide(n_steps);
    return rec;
}

}  // namespace qswitch
