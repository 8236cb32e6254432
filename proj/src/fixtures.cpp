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

#include "qswitch/fixtures.hpp"

namespace qswitch {

std::vector<LindbladGenerator> counterexample_generators() {
    const Operator k = counterexample_certificate().k();
    Operator l1 = ket_bra(3, 0, 2) + ket_bra(3, 1, 1) + ket_bra(3, 2, 2);
    Operator l2 = ket_bra(3, 0, 1) + ket_bra(3, 1, 1) + ket_bra(3, 2, 2);
    Operator h2 = ket_bra(3, 0, 2) + ket_bra(3, 2, 0);
    std::vector<LindbladGenerator> gens;
    gens.emplace_back(Operator::Zero(3, 3), std::vector<Operator>{l1}, k, "L1");
    gens.emplace_back(h2, std::vector<Operator>{l2}, k, "L2");
    return gens;
}

TargetSubspace counterexample_target() {
    const StateVector e0 = basis_vector(3, 0);
    return TargetSubspace::span({&e0, 1});
}

LyapunovCertificate counterexample_certificate() {
    return LyapunovCertificate::from_matrix(identity(3) - ket_bra(3, 0, 0), counterexample_target());
}

ControlProblem counterexample_problem() {
    return {counterexample_generators(), counterexample_certificate(),
            DensityOperator::pure(basis_vector(3, 0))};
}

LindbladGenerator qubit_decay_generator(double gamma, double kappa) {
    return LindbladGenerator(Operator::Zero(2, 2),
                             std::vector<Operator>{std::sqrt(gamma) * ket_bra(2, 0, 1)},
                             std::sqrt(kappa) * ket_bra(2, 1, 1), "decay");
}

}  // namespace qswitch
