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

// Dense complex-matrix primitives and the superoperator building blocks of
// the stochastic master equation.
//
// Storage convention: every operator is an Eigen::MatrixXcd, column-major,
// acting on a Hilbert space whose basis is ordered as documented by the
// constructing module (see graphstate.hpp for the qubit ordering).

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace qswitch {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using Operator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

inline constexpr double kDefaultTol = 1e-9;
inline constexpr Index kDefaultMaxDim = 64;

bool is_finite(const Operator& a);
bool is_hermitian(const Operator& a, double tol = kDefaultTol);
// P^2 = P and P = P^dagger.
bool is_projector(const Operator& a, double tol = kDefaultTol);
bool is_unitary(const Operator& a, double tol = kDefaultTol);

Operator identity(Index dim);
// |row><col| in a `dim`-dimensional space.
Operator ket_bra(Index dim, Index row, Index col);
Operator outer(const StateVector& ket, const StateVector& bra);
StateVector basis_vector(Index dim, Index i);
Operator hermitize(const Operator& a);

// Sum of the diagonal in index order. The fixed order matters: the positive
// integrator pins the last diagonal entry so that this sum is exactly one.
Complex trace(const Operator& a);
// Re tr(a b) without forming the product.
double real_trace_product(const Operator& a, const Operator& b);

// Throws DimensionError when the product dimension exceeds `max_dim`.
Operator kron(const Operator& a, const Operator& b, Index max_dim = kDefaultMaxDim);

// Ascending eigenvalues of the Hermitian part (A + A^dagger)/2. Uses the
// real symmetric solver when the matrix has no imaginary part.
Eigen::VectorXd hermitian_eigenvalues(const Operator& a);

// Positive semidefinite, unit trace, Hermitian. Only obtainable through
// validation, so holding one is proof that the invariants were checked.
class DensityOperator {
public:
    static DensityOperator validate(Operator op, double tol = kDefaultTol);
    // Separate threshold for the smallest eigenvalue; the Euler propagator
    // uses a looser guard than the trace and hermiticity checks.
    static DensityOperator validate(Operator op, double tol, double positivity_tol);
    static DensityOperator pure(const StateVector& psi, double tol = kDefaultTol);
    static DensityOperator maximally_mixed(Index dim);

    const Operator& matrix() const noexcept { return m_; }
    Index dim() const noexcept { return m_.rows(); }

private:
    explicit DensityOperator(Operator m) : m_(std::move(m)) {}
    Operator m_;
};

DensityOperator validate_density(const Operator& op, double tol = kDefaultTol);

// D_a(x) = a x a^dagger - 1/2 {a^dagger a, x}. Linear in x; the general
// overload is used for superoperator vectorization.
Operator dissipator(const Operator& a, const Operator& x);
Operator dissipator(const Operator& a, const DensityOperator& rho);

// G_c(x) = c x + x c^dagger - tr((c + c^dagger) x) x.
Operator backaction(const Operator& c, const Operator& x);
Operator backaction(const Operator& c, const DensityOperator& rho);

// -i[h, x]; h must be Hermitian within `tol`.
Operator commutator_drift(const Operator& h, const Operator& x, double tol = kDefaultTol);
Operator commutator_drift(const Operator& h, const DensityOperator& rho,
                          double tol = kDefaultTol);

// 1/2 ||rho - sigma||_1, clamped to [0, 1].
double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);
double trace_distance(const Operator& rho, const Operator& sigma);

// Orthogonal projector P_S onto the target subspace, its complement P_R and
// orthonormal bases for both (columns).
class TargetSubspace {
public:
    static TargetSubspace from_projector(const Operator& projector, double tol = kDefaultTol);
    // Span of the given (not necessarily orthonormal) vectors.
    static TargetSubspace span(std::span<const StateVector> vectors, double tol = kDefaultTol);

    const Operator& projector() const noexcept { return p_s_; }
    const Operator& complement_projector() const noexcept { return p_r_; }
    const Operator& target_basis() const noexcept { return v_s_; }
    const Operator& complement_basis() const noexcept { return v_r_; }
    Index dim() const noexcept { return p_s_.rows(); }
    Index rank() const noexcept { return v_s_.cols(); }

    // tr(P_R rho P_R): zero exactly on I_S(H).
    double complement_weight(const Operator& rho) const;

private:
    TargetSubspace(Operator v_s, Operator v_r);
    Operator p_s_, p_r_, v_s_, v_r_;
};

}  // namespace qswitch
