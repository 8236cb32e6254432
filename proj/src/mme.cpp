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

#include "qswitch/mme.hpp"

#include "qswitch/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace qswitch {

namespace {

const Complex kI(0.0, 1.0);

Eigen::MatrixXcd kron_unbounded(const Operator& a, const Operator& b) {
    return kron(a, b, std::numeric_limits<Index>::max());
}

// Vectorized D_a: conj(a) (x) a - 1/2 I (x) a^dag a - 1/2 (a^dag a)^T (x) I.
Eigen::MatrixXcd vectorized_dissipator(const Operator& a, const Operator& ada) {
    const Operator id = identity(a.rows());
    return kron_unbounded(a.conjugate(), a) - 0.5 * kron_unbounded(id, ada) -
           0.5 * kron_unbounded(ada.transpose(), id);
}

Eigen::MatrixXcd vectorized_drift(const LindbladGenerator& gen) {
    const Operator& h = gen.hamiltonian();
    const Operator id = identity(gen.dim());
    Eigen::MatrixXcd g = -kI * (kron_unbounded(id, h) - kron_unbounded(h.transpose(), id));
    for (const Operator& l : gen.noise_ops()) g += vectorized_dissipator(l, l.adjoint() * l);
    return g;
}

Eigen::MatrixXcd vectorized_measurement(const LindbladGenerator& gen) {
    const Operator& c = gen.measurement_op();
    return vectorized_dissipator(c, c.adjoint() * c);
}

template <class Fn>
Eigen::MatrixXcd compressed_matrix(const Operator& basis, Fn&& fn) {
    const Index r = basis.cols();
    Eigen::MatrixXcd m(r * r, r * r);
    for (Index b = 0; b < r; ++b) {
        for (Index a = 0; a < r; ++a) {
            const Operator e = basis.col(a) * basis.col(b).adjoint();
            const Operator y = basis.adjoint() * fn(e) * basis;
            m.col(a + b * r) = vec(y);
        }
    }
    return m;
}

void require_dim(const Operator& x, Index dim, const char* what) {
    if (x.rows() != dim || x.cols() != dim) {
        throw DimensionError(std::string(what) + ": expected " + std::to_string(dim) + "x" +
                             std::to_string(dim) + " operator");
    }
}

}  // namespace

LindbladGenerator::LindbladGenerator(Operator hamiltonian, std::vector<Operator> noise_ops,
                                     Operator measurement_op, std::string label, double tol)
    : h_(std::move(hamiltonian)),
      noise_(std::move(noise_ops)),
      c_(std::move(measurement_op)),
      label_(std::move(label)) {
    if (h_.rows() != h_.cols() || h_.rows() == 0) {
        throw DimensionError("generator '" + label_ + "': Hamiltonian must be square");
    }
    if (!h_.allFinite() || !is_hermitian(h_, tol)) {
        throw PreconditionError("generator '" + label_ + "': Hamiltonian is not Hermitian");
    }
    const Index d = h_.rows();
    if (c_.size() == 0) c_ = Operator::Zero(d, d);
    require_dim(c_, d, "measurement operator");
    for (const Operator& l : noise_) {
        require_dim(l, d, "noise operator");
        if (!l.allFinite()) throw PreconditionError("noise operator has non-finite entries");
        noise_dag_noise_.push_back(l.adjoint() * l);
    }
    c_dag_c_ = c_.adjoint() * c_;
}

Operator LindbladGenerator::drift_apply(const Operator& x) const {
    require_dim(x, dim(), "generator apply");
    Operator out = -kI * (h_ * x - x * h_);
    for (std::size_t k = 0; k < noise_.size(); ++k) {
        const Operator& l = noise_[k];
        const Operator& ldl = noise_dag_noise_[k];
        out.noalias() += l * x * l.adjoint();
        out.noalias() -= 0.5 * (ldl * x);
        out.noalias() -= 0.5 * (x * ldl);
    }
    return out;
}

Operator LindbladGenerator::measurement_apply(const Operator& x) const {
    require_dim(x, dim(), "generator apply");
    Operator out = c_ * x * c_.adjoint();
    out.noalias() -= 0.5 * (c_dag_c_ * x);
    out.noalias() -= 0.5 * (x * c_dag_c_);
    return out;
}

Operator LindbladGenerator::apply(const Operator& x) const {
    return drift_apply(x) + measurement_apply(x);
}

Operator LindbladGenerator::dual_drift_apply(const Operator& x) const {
    require_dim(x, dim(), "generator dual apply");
    Operator out = kI * (h_ * x - x * h_);
    for (std::size_t k = 0; k < noise_.size(); ++k) {
        const Operator& l = noise_[k];
        const Operator& ldl = noise_dag_noise_[k];
        out.noalias() += l.adjoint() * x * l;
        out.noalias() -= 0.5 * (ldl * x);
        out.noalias() -= 0.5 * (x * ldl);
    }
    return out;
}

Operator LindbladGenerator::dual_measurement_apply(const Operator& x) const {
    require_dim(x, dim(), "generator dual apply");
    Operator out = c_.adjoint() * x * c_;
    out.noalias() -= 0.5 * (c_dag_c_ * x);
    out.noalias() -= 0.5 * (x * c_dag_c_);
    return out;
}

Operator LindbladGenerator::dual_apply(const Operator& x) const {
    return dual_drift_apply(x) + dual_measurement_apply(x);
}

GeneratorCombination::GeneratorCombination(std::vector<LindbladGenerator> members,
                                           std::vector<double> alpha, double tol)
    : members_(std::move(members)), alpha_(std::move(alpha)) {
    if (members_.empty()) throw PreconditionError("convex combination of zero generators");
    if (members_.size() != alpha_.size()) {
        throw PreconditionError("convex combination: " + std::to_string(members_.size()) +
                                " generators but " + std::to_string(alpha_.size()) +
                                " weights");
    }
    double sum = 0.0;
    for (double a : alpha_) {
        if (!std::isfinite(a) || a < -tol) {
            throw PreconditionError("convex combination: negative weight");
        }
        sum += a;
    }
    if (std::abs(sum - 1.0) > tol) {
        throw PreconditionError("convex combination: weights sum to " + std::to_string(sum));
    }
    const LindbladGenerator& first = members_.front();
    for (const LindbladGenerator& g : members_) {
        if (g.dim() != first.dim()) throw DimensionError("convex combination: dimension mismatch");
        if ((g.measurement_op() - first.measurement_op()).cwiseAbs().maxCoeff() > tol) {
            throw PreconditionError("convex combination: generators disagree on the measurement "
                                    "operator");
        }
    }
}

GeneratorCombination GeneratorCombination::single(const LindbladGenerator& gen) {
    return GeneratorCombination({gen}, {1.0});
}

Operator GeneratorCombination::apply(const Operator& x) const {
    Operator out = members_.front().measurement_apply(x);
    for (std::size_t j = 0; j < members_.size(); ++j) {
        if (alpha_[j] != 0.0) out += alpha_[j] * members_[j].drift_apply(x);
    }
    return out;
}

Operator GeneratorCombination::dual_apply(const Operator& x) const {
    Operator out = members_.front().dual_measurement_apply(x);
    for (std::size_t j = 0; j < members_.size(); ++j) {
        if (alpha_[j] != 0.0) out += alpha_[j] * members_[j].dual_drift_apply(x);
    }
    return out;
}

GeneratorCombination convex_combine(const std::vector<LindbladGenerator>& gens,
                                    const std::vector<double>& alpha, double tol) {
    return GeneratorCombination(gens, alpha, tol);
}

Operator generator_apply(const LindbladGenerator& gen, const DensityOperator& rho) {
    return gen.apply(rho.matrix());
}

namespace {

template <class G>
std::vector<DensityOperator> euler_propagate(const G& gen, const DensityOperator& rho0, double dt,
                                             long n_steps, double tol) {
    if (!(dt > 0.0)) throw PreconditionError("mme_propagate: dt must be positive");
    if (n_steps < 0) throw PreconditionError("mme_propagate: negative step count");
    if (rho0.dim() != gen.dim()) throw DimensionError("mme_propagate: dimension mismatch");
    std::vector<DensityOperator> out;
    out.reserve(static_cast<std::size_t>(n_steps) + 1);
    out.push_back(rho0);
    for (long k = 0; k < n_steps; ++k) {
        const Operator& rho = out.back().matrix();
        Operator next = rho + dt * gen.apply(rho);
        try {
            out.push_back(DensityOperator::validate(std::move(next), tol, 100.0 * tol));
        } catch (const ValidationError& e) {
            throw e.at_step(k + 1);
        }
    }
    return out;
}

}  // namespace

std::vector<DensityOperator> mme_propagate(const LindbladGenerator& gen,
                                           const DensityOperator& rho0, double dt, long n_steps,
                                           double tol) {
    return euler_propagate(gen, rho0, dt, n_steps, tol);
}

std::vector<DensityOperator> mme_propagate(const GeneratorCombination& gen,
                                           const DensityOperator& rho0, double dt, long n_steps,
                                           double tol) {
    return euler_propagate(gen, rho0, dt, n_steps, tol);
}

Eigen::MatrixXcd vectorize_generator(const LindbladGenerator& gen) {
    return vectorized_drift(gen) + vectorized_measurement(gen);
}

Eigen::MatrixXcd vectorize_generator(const GeneratorCombination& gen) {
    Eigen::MatrixXcd g = vectorized_measurement(gen.members().front());
    for (std::size_t j = 0; j < gen.members().size(); ++j) {
        if (gen.alpha()[j] != 0.0) g += gen.alpha()[j] * vectorized_drift(gen.members()[j]);
    }
    return g;
}

Eigen::VectorXcd general_eigenvalues(const Eigen::MatrixXcd& m) {
    if (m.size() == 0) return {};
    if ((m.imag().array() == 0.0).all()) {
        Eigen::EigenSolver<Eigen::MatrixXd> es(m.real(), false);
        return es.eigenvalues();
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
    return es.eigenvalues();
}

double GeneratorSpectrum::abscissa() const {
    double best = -std::numeric_limits<double>::infinity();
    for (const Complex& z : eigenvalues) best = std::max(best, z.real());
    return best;
}

double invariance_defect(const GeneratorCombination& gen, const TargetSubspace& target) {
    if (target.dim() != gen.dim()) throw DimensionError("check_gas: target dimension mismatch");
    const Operator& vs = target.target_basis();
    const Operator& ps = target.projector();
    double sq = 0.0;
    for (Index a = 0; a < vs.cols(); ++a) {
        for (Index b = 0; b < vs.cols(); ++b) {
            const Operator y = gen.apply(vs.col(a) * vs.col(b).adjoint());
            sq += (y - ps * y * ps).squaredNorm();
        }
    }
    return std::sqrt(sq);
}

Operator reduced_dual_apply(const GeneratorCombination& gen, const TargetSubspace& target,
                            const Operator& x_r) {
    const Operator& vr = target.complement_basis();
    require_dim(x_r, vr.cols(), "reduced dual apply");
    return vr.adjoint() * gen.dual_apply(vr * x_r * vr.adjoint()) * vr;
}

Eigen::MatrixXcd reduced_dual_matrix(const GeneratorCombination& gen,
                                     const TargetSubspace& target) {
    if (target.dim() != gen.dim()) throw DimensionError("reduced dual: target dimension mismatch");
    return compressed_matrix(target.complement_basis(),
                             [&](const Operator& e) { return gen.dual_apply(e); });
}

GasReport check_gas(const GeneratorCombination& gen, const TargetSubspace& target, double tol) {
    GasReport report;
    report.spectrum.invariance_defect = invariance_defect(gen, target);
    report.is_invariant = report.spectrum.invariance_defect < kInvarianceTol;

    Eigen::VectorXcd ev;
    if (report.is_invariant) {
        const Eigen::MatrixXcd reduced = compressed_matrix(
            target.complement_basis(), [&](const Operator& e) { return gen.apply(e); });
        ev = general_eigenvalues(reduced);
        report.spectrum.reduced = true;
    } else {
        ev = general_eigenvalues(vectorize_generator(gen));
        report.spectrum.reduced = false;
    }
    report.spectrum.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    report.is_gas = report.is_invariant && report.spectrum.abscissa() < -tol;
    return report;
}

GasReport check_gas(const LindbladGenerator& gen, const TargetSubspace& target, double tol) {
    return check_gas(GeneratorCombination::single(gen), target, tol);
}

}  // namespace qswitch
