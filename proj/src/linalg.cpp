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

#include "qswitch/linalg.hpp"

#include "qswitch/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qswitch {

namespace {

bool is_real(const Operator& a) { return (a.imag().array() == 0.0).all(); }

void require_square(const Operator& a, const char* what) {
    if (a.rows() != a.cols()) {
        std::ostringstream os;
        os << what << " is " << a.rows() << "x" << a.cols() << ", expected square";
        throw DimensionError(os.str());
    }
}

void require_same_dim(const Operator& a, const Operator& b, const char* what) {
    require_square(a, what);
    require_square(b, what);
    if (a.rows() != b.rows()) {
        std::ostringstream os;
        os << what << ": dimension mismatch " << a.rows() << " vs " << b.rows();
        throw DimensionError(os.str());
    }
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

}  // namespace

bool is_finite(const Operator& a) { return a.allFinite(); }

bool is_hermitian(const Operator& a, double tol) {
    if (a.rows() != a.cols()) return false;
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_projector(const Operator& a, double tol) {
    if (!is_hermitian(a, tol)) return false;
    return (a * a - a).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const Operator& a, double tol) {
    if (a.rows() != a.cols()) return false;
    return (a.adjoint() * a - Operator::Identity(a.rows(), a.cols())).cwiseAbs().maxCoeff() <=
           tol;
}

Operator identity(Index dim) { return Operator::Identity(dim, dim); }

Operator ket_bra(Index dim, Index row, Index col) {
    Operator m = Operator::Zero(dim, dim);
    m(row, col) = 1.0;
    return m;
}

Operator outer(const StateVector& ket, const StateVector& bra) { return ket * bra.adjoint(); }

StateVector basis_vector(Index dim, Index i) {
    StateVector v = StateVector::Zero(dim);
    v(i) = 1.0;
    return v;
}

Operator hermitize(const Operator& a) { return 0.5 * (a + a.adjoint()); }

Complex trace(const Operator& a) {
    Complex s = 0.0;
    for (Index i = 0; i < a.rows(); ++i) s += a(i, i);
    return s;
}

double real_trace_product(const Operator& a, const Operator& b) {
    // tr(ab) = sum_ij a_ij b_ji
    double s = 0.0;
    for (Index j = 0; j < a.cols(); ++j) {
        for (Index i = 0; i < a.rows(); ++i) s += (a(i, j) * b(j, i)).real();
    }
    return s;
}

Operator kron(const Operator& a, const Operator& b, Index max_dim) {
    const Index rows = a.rows() * b.rows();
    const Index cols = a.cols() * b.cols();
    if (std::max(rows, cols) > max_dim) {
        throw DimensionError("kron: dimension " + std::to_string(std::max(rows, cols)) +
                             " exceeds configured maximum " + std::to_string(max_dim));
    }
    Operator out(rows, cols);
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Eigen::VectorXd hermitian_eigenvalues(const Operator& a) {
    require_square(a, "hermitian_eigenvalues");
    if (is_real(a)) {
        Eigen::MatrixXd h = 0.5 * (a.real() + a.real().transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
        return es.eigenvalues();
    }
    Eigen::SelfAdjointEigenSolver<Operator> es(hermitize(a), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

DensityOperator DensityOperator::validate(Operator op, double tol) {
    return validate(std::move(op), tol, tol);
}

DensityOperator DensityOperator::validate(Operator op, double tol, double positivity_tol) {
    if (op.rows() != op.cols() || op.rows() == 0) {
        throw ValidationError("shape", "density operator must be a non-empty square matrix");
    }
    if (!op.allFinite()) throw ValidationError("finite", "non-finite entry");
    const double herm = (op - op.adjoint()).cwiseAbs().maxCoeff();
    if (herm > tol) throw ValidationError("hermitian", "anti-Hermitian part " + fmt(herm));
    op = hermitize(op);
    const double tr = trace(op).real();
    if (std::abs(tr - 1.0) > tol) throw ValidationError("trace", "trace " + fmt(tr) + " != 1");

    // rho + eps I is positive definite iff the smallest eigenvalue exceeds -eps.
    Operator shifted = op;
    shifted.diagonal().array() += positivity_tol;
    Eigen::LLT<Operator> llt(shifted);
    if (llt.info() != Eigen::Success) {
        const double lmin = hermitian_eigenvalues(op)(0);
        if (lmin < -positivity_tol) {
            throw ValidationError("positivity", "negative eigenvalue " + fmt(lmin));
        }
    }
    return DensityOperator(std::move(op));
}

DensityOperator DensityOperator::pure(const StateVector& psi, double tol) {
    const double n = psi.norm();
    if (n == 0.0) throw ValidationError("shape", "zero state vector");
    return validate(outer(psi / n, psi / n), tol);
}

DensityOperator DensityOperator::maximally_mixed(Index dim) {
    return DensityOperator(identity(dim) / static_cast<double>(dim));
}

DensityOperator validate_density(const Operator& op, double tol) {
    return DensityOperator::validate(op, tol);
}

Operator dissipator(const Operator& a, const Operator& x) {
    require_same_dim(a, x, "dissipator");
    const Operator ada = a.adjoint() * a;
    return a * x * a.adjoint() - 0.5 * (ada * x + x * ada);
}

Operator dissipator(const Operator& a, const DensityOperator& rho) {
    return dissipator(a, rho.matrix());
}

Operator backaction(const Operator& c, const Operator& x) {
    require_same_dim(c, x, "backaction");
    const Complex w = trace((c + c.adjoint()) * x);
    return c * x + x * c.adjoint() - w * x;
}

Operator backaction(const Operator& c, const DensityOperator& rho) {
    return backaction(c, rho.matrix());
}

Operator commutator_drift(const Operator& h, const Operator& x, double tol) {
    require_same_dim(h, x, "commutator_drift");
    if (!is_hermitian(h, tol)) throw PreconditionError("commutator_drift: h is not Hermitian");
    const Complex minus_i(0.0, -1.0);
    return minus_i * (h * x - x * h);
}

Operator commutator_drift(const Operator& h, const DensityOperator& rho, double tol) {
    return commutator_drift(h, rho.matrix(), tol);
}

double trace_distance(const Operator& rho, const Operator& sigma) {
    require_same_dim(rho, sigma, "trace_distance");
    const Eigen::VectorXd ev = hermitian_eigenvalues(rho - sigma);
    return std::clamp(0.5 * ev.cwiseAbs().sum(), 0.0, 1.0);
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
    return trace_distance(rho.matrix(), sigma.matrix());
}

TargetSubspace::TargetSubspace(Operator v_s, Operator v_r)
    : p_s_(v_s * v_s.adjoint()),
      p_r_(v_r * v_r.adjoint()),
      v_s_(std::move(v_s)),
      v_r_(std::move(v_r)) {
    if (v_r_.cols() == 0) p_r_ = Operator::Zero(p_s_.rows(), p_s_.cols());
}

TargetSubspace TargetSubspace::from_projector(const Operator& projector, double tol) {
    require_square(projector, "target projector");
    if (!is_projector(projector, tol)) {
        throw PreconditionError("target projector is not an orthogonal projector");
    }
    const Index d = projector.rows();
    Operator vecs;
    Eigen::VectorXd vals;
    if (is_real(projector)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(projector.real());
        vecs = es.eigenvectors().cast<Complex>();
        vals = es.eigenvalues();
    } else {
        Eigen::SelfAdjointEigenSolver<Operator> es(hermitize(projector));
        vecs = es.eigenvectors();
        vals = es.eigenvalues();
    }
    // ascending: complement eigenvalues (~0) first
    Index r = 0;
    while (r < d && vals(r) < 0.5) ++r;
    if (r == d) throw PreconditionError("target projector has rank 0");
    return TargetSubspace(vecs.rightCols(d - r), vecs.leftCols(r));
}

TargetSubspace TargetSubspace::span(std::span<const StateVector> vectors, double tol) {
    if (vectors.empty()) throw PreconditionError("target span needs at least one vector");
    const Index d = vectors.front().size();
    Operator a(d, static_cast<Index>(vectors.size()));
    for (std::size_t k = 0; k < vectors.size(); ++k) {
        if (vectors[k].size() != d) throw DimensionError("target span: vector size mismatch");
        a.col(static_cast<Index>(k)) = vectors[k];
    }
    Operator u;
    Eigen::VectorXd sv;
    if (is_real(a)) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.real(), Eigen::ComputeFullU);
        u = svd.matrixU().cast<Complex>();
        sv = svd.singularValues();
    } else {
        Eigen::JacobiSVD<Operator> svd(a, Eigen::ComputeFullU);
        u = svd.matrixU();
        sv = svd.singularValues();
    }
    Index rank = 0;
    while (rank < sv.size() && sv(rank) > tol * std::max(1.0, sv(0))) ++rank;
    if (rank == 0) throw PreconditionError("target span is zero-dimensional");
    return TargetSubspace(u.leftCols(rank), u.rightCols(d - rank));
}

double TargetSubspace::complement_weight(const Operator& rho) const {
    return real_trace_product(p_r_, rho);
}

}  // namespace qswitch
