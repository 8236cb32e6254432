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

// Seeded random operators and states. Every function takes the generator by
// reference so callers own the stream.

#include "qswitch/linalg.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>

namespace qswitch {

using Rng = std::mt19937_64;

// Independent stream keyed by (master_seed, keys...), e.g. (seed, law, trajectory).
Rng make_rng(std::uint64_t master_seed, std::initializer_list<std::uint64_t> keys = {});
// First output of make_rng(master_seed, keys); used as a per-job seed.
std::uint64_t derive_seed(std::uint64_t master_seed, std::initializer_list<std::uint64_t> keys);

Operator random_ginibre(Index rows, Index cols, Rng& rng);
Operator random_hermitian(Index dim, Rng& rng);

// Haar-random pure state.
StateVector random_pure_vector(Index dim, Rng& rng);
DensityOperator random_pure_state(Index dim, Rng& rng);
// Hilbert-Schmidt measure: G G^dag / tr, G complex Gaussian dim x rank.
// rank == dim gives the full Hilbert-Schmidt ensemble, smaller ranks give
// rank-deficient boundary states.
DensityOperator random_mixed_state(Index dim, Rng& rng, Index rank = 0);
// Random state supported on span(columns of basis).
DensityOperator random_state_on(const Operator& basis, Rng& rng);

}  // namespace qswitch
