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

#include "qswitch/random.hpp"

#include <vector>

namespace qswitch {

Rng make_rng(std::uint64_t master_seed, std::initializer_list<std::uint64_t> keys) {
    std::vector<std::uint32_t> words;
    auto push = [&](std::uint64_t v) {
        words.push_back(static_cast<std::uint32_t>(v));
        words.push_back(static_cast<std::uint32_t>(v >> 32));
    };
    push(master_seed);
    for (std::uint64_t k : keys) push(k);
    std::seed_seq seq(words.begin(), words.end());
    return Rng(seq);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::initializer_list<std::uint64_t> keys) {
    Rng rng = make_rng(master_seed, keys);
    return rng();
}

Operator random_ginibre(Index rows, Index cols, Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Operator g(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) {
            const double re = n(rng);
            const double im = n(rng);
            g(i, j) = Complex(re, im);
        }
    }
    return g;
}

Operator random_hermitian(Index dim, Rng& rng) { return hermitize(random_ginibre(dim, dim, rng)); }

StateVector random_pure_vector(Index dim, Rng& rng) {
    StateVector v = random_ginibre(dim, 1, rng).col(0);
    return v / v.norm();
}

DensityOperator random_pure_state(Index dim, Rng& rng) {
    return DensityOperator::pure(random_pure_vector(dim, rng));
}

DensityOperator random_mixed_state(Index dim, Rng& rng, Index rank) {
    if (rank <= 0 || rank > dim) rank = dim;
    const Operator g = random_ginibre(dim, rank, rng);
    Operator rho = g * g.adjoint();
    rho /= trace(rho).real();
    return DensityOperator::validate(hermitize(rho));
}

DensityOperator random_state_on(const Operator& basis, Rng& rng) {
    const DensityOperator inner = random_mixed_state(basis.cols(), rng);
    return DensityOperator::validate(basis * inner.matrix() * basis.adjoint());
}

}  // namespace qswitch
