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

// Lindblad generators, their convex combinations, deterministic propagation
// and the invariance / global asymptotic stability checks.

#include "qswitch/linalg.hpp"

#include <string>
#include <vector>

namespace qswitch {

// Threshold on the target-leaking block of a generator.
inline constexpr double kInvarianceTol = 1e-8;

// L(x) = -i[H, x] + sum_k D_{L_k}(x) + D_C(x).
//
// The measurement operator C is shared across a generator set; a zero C turns
// the measurement off.
class LindbladGenerator {
public:
    LindbladGenerator(Operator hamiltonian, std::vector<Operator> noise_ops,
                      Operator measurement_op, std::string label = {},
                      double tol = kDefaultTol);

    const Operator& hamiltonian() const noexcept { return h_; }
    const std::vector<Operator>& noise_ops() const noexcept { return noise_; }
    const Operator& measurement_op() const noexcept { return c_; }
    const std::string& label() const noexcept { return label_; }
    Index dim() const noexcept { return h_.rows(); }

    Operator apply(const Operator& x) const;
    // -i[H, x] + sum_k D_{L_k}(x), i.e. everything except D_C.
    Operator drift_apply(const Operator& x) const;
    Operator measurement_apply(const Operator& x) const;

    // Heisenberg-picture generator, tr(L^dag(k) x) = tr(k L(x)).
    Operator dual_apply(const Operator& x) const;
    Operator dual_drift_apply(const Operator& x) const;
    Operator dual_measurement_apply(const Operator& x) const;

private:
    Operator h_;
    std::vector<Operator> noise_;
    std::vector<Operator> noise_dag_noise_;  // L_k^dag L_k
    Operator c_;
    Operator c_dag_c_;
    std::string label_;
};

// sum_j alpha_j (drift part of L_j) + D_C, with D_C counted once. A single
// generator is the combination with alpha = (1).
class GeneratorCombination {
public:
    GeneratorCombination(std::vector<LindbladGenerator> members, std::vector<double> alpha,
                         double tol = kDefaultTol);
    static GeneratorCombination single(const LindbladGenerator& gen);

    Operator apply(const Operator& x) const;
    Operator dual_apply(const Operator& x) const;

    Index dim() const noexcept { return members_.front().dim(); }
    const std::vector<LindbladGenerator>& members() const noexcept { return members_; }
    const std::vector<double>& alpha() const noexcept { return alpha_; }

private:
    std::vector<LindbladGenerator> members_;
    std::vector<double> alpha_;
};

GeneratorCombination convex_combine(const std::vector<LindbladGenerator>& gens,
                                    const std::vector<double>& alpha, double tol = kDefaultTol);

Operator generator_apply(const LindbladGenerator& gen, const DensityOperator& rho);

// Explicit Euler, rho_{k+1} = rho_k + dt L(rho_k); every step is re-validated
// and a step that pushes an eigenvalue below -100 tol is rejected with its
// index. Returns n_steps + 1 states.
std::vector<DensityOperator> mme_propagate(const LindbladGenerator& gen,
                                           const DensityOperator& rho0, double dt, long n_steps,
                                           double tol = kDefaultTol);
std::vector<DensityOperator> mme_propagate(const GeneratorCombination& gen,
                                           const DensityOperator& rho0, double dt, long n_steps,
                                           double tol = kDefaultTol);

// Column-stacking vectorization: G vec(x) = vec(L(x)).
Eigen::MatrixXcd vectorize_generator(const LindbladGenerator& gen);
Eigen::MatrixXcd vectorize_generator(const GeneratorCombination& gen);

inline Eigen::VectorXcd vec(const Operator& x) {
    return Eigen::Map<const Eigen::VectorXcd>(x.data(), x.size());
}
inline Operator unvec(const Eigen::VectorXcd& v, Index dim) {
    return Eigen::Map<const Operator>(v.data(), dim, dim);
}

// Eigenvalues of a general square matrix; takes the real solver when the
// matrix has no imaginary part.
Eigen::VectorXcd general_eigenvalues(const Eigen::MatrixXcd& m);

struct GeneratorSpectrum {
    std::vector<Complex> eigenvalues;
    bool reduced = false;  // computed on the complement block
    double invariance_defect = 0.0;

    // Largest real part, -inf when empty.
    double abscissa() const;
};

struct GasReport {
    bool is_invariant = false;
    bool is_gas = false;
    GeneratorSpectrum spectrum;
};

// Norm of the part of L(x) that leaves the target block, over x supported on
// the target.
double invariance_defect(const GeneratorCombination& gen, const TargetSubspace& target);

// The target is GAS iff it is invariant and the generator reduced to the
// complement block is Hurwitz. Non-invariant generators report the spectrum
// of the full vectorized generator.
GasReport check_gas(const GeneratorCombination& gen, const TargetSubspace& target,
                    double tol = kDefaultTol);
GasReport check_gas(const LindbladGenerator& gen, const TargetSubspace& target,
                    double tol = kDefaultTol);

// x_R -> V_R^dag L^dag(V_R x_R V_R^dag) V_R on complement-block operators,
// with V_R the complement basis. For an invariant generator this is the dual
// of the reduced generator.
Operator reduced_dual_apply(const GeneratorCombination& gen, const TargetSubspace& target,
                            const Operator& x_r);
// Matrix of reduced_dual_apply in the vec basis of the complement block.
Eigen::MatrixXcd reduced_dual_matrix(const GeneratorCombination& gen,
                                     const TargetSubspace& target);

}  // namespace qswitch
