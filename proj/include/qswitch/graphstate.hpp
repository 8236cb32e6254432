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

// Graph-state targets: the controlled-Z circuit U_G, the conjugated local
// stabilizing operators, the graph Hamiltonian and product-state fixtures.
//
// Qubit ordering: qubit 0 is the most significant tensor factor, so basis
// index b has qubit q in state (b >> (n - 1 - q)) & 1.

#include "qswitch/linalg.hpp"
#include "qswitch/lyapunov.hpp"
#include "qswitch/mme.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qswitch {

inline constexpr int kDefaultMaxQubits = 6;

// Undirected simple graph on qubits 0..n-1. Edges are stored with first < second.
class Graph {
public:
    Graph(int n, std::vector<std::pair<int, int>> edges, int max_qubits = kDefaultMaxQubits);
    // Edges given with 1-based vertex labels, as in configuration files.
    static Graph from_one_based(int n, const std::vector<std::pair<int, int>>& edges,
                                int max_qubits = kDefaultMaxQubits);

    int n() const noexcept { return n_; }
    Index dim() const noexcept { return Index{1} << n_; }
    const std::vector<std::pair<int, int>>& edges() const noexcept { return edges_; }

private:
    int n_;
    std::vector<std::pair<int, int>> edges_;
};

// Edges {(1,2),(1,3),(2,3),(3,4),(4,5)} on five qubits.
Graph five_qubit_reference_graph();

// prod_{(j,k)} CZ_{jk}: real diagonal with +-1 entries.
Operator build_circuit(const Graph& g);
// U_G^dag (|+><-|_j (x) I) U_G.
Operator build_stabilizer_noise(const Graph& g, int qubit);

struct GraphHamiltonian {
    Operator h_g;               // -U_G^dag (sum_j X_j) U_G
    LyapunovCertificate k_g;    // (h_g + n I) / (2n), spectrum in [0, 1]
    DensityOperator ground;     // rho_G
};

GraphHamiltonian build_graph_hamiltonian(const Graph& g, double tol = kDefaultTol);

// Product state over {+, -} (also accepts 'p'/'m'), conjugated by U_G when `rotate`.
DensityOperator product_state(std::string_view pattern, const Graph& g, bool rotate);

// Which operator the graph experiments measure.
enum class GraphMeasurement {
    Certificate,  // C = k_g
    Hamiltonian,  // C = H_G; same dissipator and filter as H_G + n I
    None,         // C = 0
};

GraphMeasurement parse_graph_measurement(std::string_view name);
const char* to_string(GraphMeasurement m);

// L_j = D_{L_{G,j}} + D_C with C = scale * (k_g | H_G | 0); one
// generator per qubit.
std::vector<LindbladGenerator> graph_generators(const Graph& g, const GraphHamiltonian& gh,
                                                GraphMeasurement measurement, double scale = 1.0);

}  // namespace qswitch
