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

#include "qswitch/lyapunov.hpp"

#include "qswitch/errors.hpp"
#include "qswitch/random.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>

namespace qswitch {

const char* to_string(CertificateOrigin origin) {
    switch (origin) {
        case CertificateOrigin::Given: return "given";
        case CertificateOrigin::PerronFrobenius: return "perron-frobenius";
        case CertificateOrigin::PerturbedPerronFrobenius: return "perturbed-perron-frobenius";
        case CertificateOrigin::Resolvent: return "resolvent";
    }
    return "unknown";
}

LyapunovCertificate LyapunovCertificate::from_matrix(const Operator& k,
                                                     const TargetSubspace& target, double tol,
                                                     CertificateOrigin origin) {
    if (k.rows() != k.cols() || k.rows() != target.dim()) {
        throw DimensionError("certificate: K does not match the target dimension");
    }
    if (!k.allFinite()) throw PreconditionError("certificate: non-finite K");
    const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
    if (!is_hermitian(k, tol * scale)) throw PreconditionError("certificate: K is not Hermitian");
    Operator kh = hermitize(k);
    const Eigen::VectorXd ev = hermitian_eigenvalues(kh);
    if (ev(0) < -tol * scale) throw PreconditionError("certificate: K is not positive semidefinite");
    if ((kh * target.projector()).cwiseAbs().maxCoeff() > tol * scale) {
        throw PreconditionError("certificate: K does not vanish on the target");
    }
    const double k_max = ev(ev.size() - 1);
    const Operator& vr = target.complement_basis();
    if (vr.cols() > 0) {
        const Eigen::VectorXd red = hermitian_eigenvalues(vr.adjoint() * kh * vr);
        if (red(0) <= tol * std::max(1.0, k_max)) {
            throw PreconditionError("certificate: K is not positive definite on the complement");
        }
    }
    return LyapunovCertificate(std::move(kh), target, k_max, origin);
}

Operator LyapunovCertificate::reduced() const {
    const Operator& vr = target_.complement_basis();
    return vr.adjoint() * k_ * vr;
}

LyapunovCertificate LyapunovCertificate::scaled(double factor) const {
    if (!(factor > 0.0)) throw PreconditionError("certificate: scale factor must be positive");
    return LyapunovCertificate(k_ * factor, target_, k_max_ * factor, origin_);
}

double v_value(const LyapunovCertificate& cert, const DensityOperator& rho) {
    if (rho.dim() != cert.dim()) throw DimensionError("v_value: dimension mismatch");
    return real_trace_product(cert.k(), rho.matrix());
}

double v_drift(const LyapunovCertificate& cert, const LindbladGenerator& gen,
               const DensityOperator& rho) {
    if (rho.dim() != cert.dim() || gen.dim() != cert.dim()) {
        throw DimensionError("v_drift: dimension mismatch");
    }
    return real_trace_product(cert.k(), gen.apply(rho.matrix()));
}

double v_drift(const LyapunovCertificate& cert, const GeneratorCombination& gen,
               const DensityOperator& rho) {
    if (rho.dim() != cert.dim() || gen.dim() != cert.dim()) {
        throw DimensionError("v_drift: dimension mismatch");
    }
    return real_trace_product(cert.k(), gen.apply(rho.matrix()));
}

namespace {

struct Candidate {
    Operator k_r;
    double drift_max = 0.0;
    bool ok = false;
};

// Normalizes to unit largest eigenvalue and checks K_R > 0, L_R^dag(K_R) < 0.
Candidate assess(const GeneratorCombination& gen, const TargetSubspace& target, Operator k_r,
                 double tol) {
    Candidate c;
    k_r = hermitize(k_r);
    Eigen::VectorXd ev = hermitian_eigenvalues(k_r);
    if (std::abs(ev(ev.size() - 1)) < std::abs(ev(0))) {
        k_r = -k_r;
        ev = -ev.reverse().eval();
    }
    const double top = ev(ev.size() - 1);
    if (!(top > 0.0) || !std::isfinite(top)) return c;
    k_r /= top;
    ev /= top;
    c.k_r = k_r;
    const Eigen::VectorXd drift = hermitian_eigenvalues(reduced_dual_apply(gen, target, k_r));
    c.drift_max = drift(drift.size() - 1);
    c.ok = ev(0) > tol && c.drift_max < -tol;
    return c;
}

}  // namespace

CertificateConstruction construct_k(const GeneratorCombination& gen, const TargetSubspace& target,
                                    double tol) {
    const GasReport gas = check_gas(gen, target, tol);
    if (!gas.is_gas) {
        throw PreconditionError("construct_k: the generator does not make the target GAS");
    }
    const Operator& vr = target.complement_basis();
    const Index r = vr.cols();
    if (r == 0) throw PreconditionError("construct_k: the target is the whole space");

    // Dual spectrum is the conjugate of the reduced spectrum.
    Complex lambda0(-std::numeric_limits<double>::infinity(), 0.0);
    for (const Complex& z : gas.spectrum.eigenvalues) {
        if (z.real() > lambda0.real()) lambda0 = std::conj(z);
    }
    const double scale = std::max(1.0, std::abs(lambda0));
    int multiplicity = 0;
    for (const Complex& z : gas.spectrum.eigenvalues) {
        if (std::abs(std::conj(z) - lambda0) <= 1e-6 * scale) ++multiplicity;
    }

    const Eigen::MatrixXcd dual = reduced_dual_matrix(gen, target);
    const Index n = dual.rows();
    const Eigen::VectorXcd id_r = vec(identity(r));

    // Inverse iteration from I_R towards the dominant eigen-operator.
    const Complex shift = lambda0 + Complex(1e-7 * scale, 0.0);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(dual - shift * Eigen::MatrixXcd::Identity(n, n));
    Eigen::VectorXcd x = id_r;
    for (int it = 0; it < 6; ++it) {
        x = lu.solve(x);
        x /= x.norm();
    }
    Operator pf = unvec(x, r);
    Complex phase = trace(pf);
    if (std::abs(phase) < 1e-12) {
        Index i = 0;
        Eigen::Map<const Eigen::VectorXcd>(pf.data(), pf.size()).cwiseAbs().maxCoeff(&i);
        phase = pf.data()[i];
    }
    pf *= std::conj(phase) / std::abs(phase);

    Candidate chosen;
    CertificateOrigin origin = CertificateOrigin::PerronFrobenius;
    if (multiplicity == 1) chosen = assess(gen, target, pf, tol);
    if (!chosen.ok) {
        Candidate first = assess(gen, target, pf, tol);
        if (first.k_r.size() != 0) {
            chosen = assess(gen, target,
                            first.k_r + kPerronPerturbation * identity(r) / static_cast<double>(r),
                            tol);
            origin = CertificateOrigin::PerturbedPerronFrobenius;
        }
    }
    if (!chosen.ok) {
        const Eigen::VectorXcd y = Eigen::PartialPivLU<Eigen::MatrixXcd>(dual).solve(-id_r);
        chosen = assess(gen, target, unvec(y, r), tol);
        origin = CertificateOrigin::Resolvent;
    }
    if (!chosen.ok) {
        throw Error("construct_k: no positive definite certificate found for a GAS generator");
    }
    const Operator k = vr * chosen.k_r * vr.adjoint();
    return CertificateConstruction{LyapunovCertificate::from_matrix(k, target, tol, origin),
                                   lambda0, multiplicity, chosen.drift_max};
}

CertificateConstruction construct_k(const LindbladGenerator& gen, const TargetSubspace& target,
                                    double tol) {
    return construct_k(GeneratorCombination::single(gen), target, tol);
}

Assumption2Report verify_assumption2(const LyapunovCertificate& cert,
                                     std::span<const LindbladGenerator> gens,
                                     std::size_t n_samples, std::uint64_t seed, double tol) {
    Assumption2Report report;
    report.worst_outside = -std::numeric_limits<double>::infinity();
    report.worst_inside = 0.0;
    if (gens.empty()) return report;

    const TargetSubspace& target = cert.target();
    const Index d = cert.dim();
    Rng rng = make_rng(seed, {0xa55});

    std::vector<DensityOperator> samples;
    for (Index i = 0; i < d; ++i) samples.push_back(DensityOperator::pure(basis_vector(d, i)));
    for (Index i = 0; i < target.complement_basis().cols(); ++i) {
        samples.push_back(DensityOperator::pure(target.complement_basis().col(i)));
    }
    for (Index i = 0; i < target.target_basis().cols(); ++i) {
        samples.push_back(DensityOperator::pure(target.target_basis().col(i)));
    }
    const std::size_t n_boundary = std::max<std::size_t>(1, n_samples / 4);
    for (std::size_t i = 0; i < n_samples; ++i) samples.push_back(random_mixed_state(d, rng));
    for (std::size_t i = 0; i < n_boundary; ++i) samples.push_back(random_pure_state(d, rng));
    for (std::size_t i = 0; i < n_boundary; ++i) {
        samples.push_back(random_mixed_state(d, rng, std::min<Index>(2, d)));
    }
    const std::size_t n_target = std::max<std::size_t>(1, n_samples / 10);
    for (std::size_t i = 0; i < n_target; ++i) {
        samples.push_back(random_state_on(target.target_basis(), rng));
    }

    std::vector<Operator> drift_observables;
    for (const LindbladGenerator& g : gens) drift_observables.push_back(g.dual_apply(cert.k()));

    constexpr std::size_t kMaxWitnesses = 32;
    bool holds = true;
    for (const DensityOperator& rho : samples) {
        double min_drift = std::numeric_limits<double>::infinity();
        double min_abs = std::numeric_limits<double>::infinity();
        for (const Operator& q : drift_observables) {
            const double v = real_trace_product(q, rho.matrix());
            min_drift = std::min(min_drift, v);
            min_abs = std::min(min_abs, std::abs(v));
        }
        bool bad = false;
        if (target.complement_weight(rho.matrix()) > tol) {
            ++report.n_outside;
            report.worst_outside = std::max(report.worst_outside, min_drift);
            bad = !(min_drift < -tol);
        } else {
            ++report.n_inside;
            report.worst_inside = std::max(report.worst_inside, min_abs);
            bad = !(min_abs < tol);
        }
        if (bad) {
            holds = false;
            if (report.witnesses.size() < kMaxWitnesses) report.witnesses.push_back(rho);
        }
    }
    report.holds = holds;
    return report;
}

DwellBound dwell_bound(const LyapunovCertificate& cert, std::span<const LindbladGenerator> gens,
                       std::span<const double> alpha, double r, double tol) {
    if (!(r >= 0.0 && r < 1.0)) throw PreconditionError("dwell_bound: r must lie in [0, 1)");
    if (gens.empty()) throw PreconditionError("dwell_bound: empty generator set");
    const TargetSubspace& target = cert.target();
    if (target.complement_basis().cols() == 0) {
        throw PreconditionError("dwell_bound: the target is the whole space");
    }
    std::vector<LindbladGenerator> members(gens.begin(), gens.end());
    const GeneratorCombination combination(members, std::vector<double>(alpha.begin(), alpha.end()),
                                           tol);
    for (const LindbladGenerator& g : members) {
        if (invariance_defect(GeneratorCombination::single(g), target) >= kInvarianceTol) {
            throw PreconditionError("dwell_bound: generator '" + g.label() +
                                    "' does not leave the target invariant");
        }
    }
    const Operator k_r = cert.reduced();
    const Eigen::VectorXd drift =
        hermitian_eigenvalues(reduced_dual_apply(combination, target, k_r));
    if (!(drift(drift.size() - 1) < -tol)) {
        throw PreconditionError("dwell_bound: the certificate does not decrease along the "
                                "combination");
    }
    DwellBound out;
    out.r = r;
    out.k_c_min = drift.cwiseAbs().minCoeff();
    for (const LindbladGenerator& g : members) {
        const GeneratorCombination single = GeneratorCombination::single(g);
        const Operator once = reduced_dual_apply(single, target, k_r);
        const Operator twice = reduced_dual_apply(single, target, once);
        out.k2_max = std::max(out.k2_max, hermitian_eigenvalues(twice).cwiseAbs().maxCoeff());
    }
    if (out.k2_max == 0.0) {
        out.unbounded = true;
        out.bound = std::numeric_limits<double>::infinity();
    } else {
        out.bound = (1.0 - r) * out.k_c_min / out.k2_max;
    }
    return out;
}

StabilityMonitor practical_stability_monitor(const LyapunovCertificate& cert,
                                             std::span<const DensityOperator> trajectory,
                                             double epsilon, double tol) {
    if (!(epsilon > 0.0)) throw PreconditionError("stability monitor: epsilon must be positive");
    StabilityMonitor out;
    out.level = cert.k_max() * epsilon / 2.0;
    for (std::size_t k = 0; k < trajectory.size(); ++k) {
        const Operator& rho = trajectory[k].matrix();
        if (!out.entry_step) {
            if (cert.target().complement_weight(rho) <= epsilon / 2.0) {
                out.entry_step = static_cast<long>(k);
                out.stayed = true;
            } else {
                continue;
            }
        }
        if (real_trace_product(cert.k(), rho) > out.level + tol) out.stayed = false;
    }
    return out;
}

}  // namespace qswitch
