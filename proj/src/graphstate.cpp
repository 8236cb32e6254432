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

#include "qswitch/graphstate.hpp"

#include "qswitch/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qswitch {

namespace {

int bit(Index b, int q, int n) { return static_cast<int>((b >> (n - 1 - q)) & 1); }

// Operator acting as `local` on qubit q and identity elsewhere.
Operator embed_local(const Operator& local, int q, int n) {
    Operator out = identity(1);
    const Index cap = Index{1} << n;
    for (int k = 0; k < n; ++k) out = kron(out, k == q ? local : identity(2), cap);
    return out;
}

StateVector plus_minus(char c) {
    const double s = 1.0 / std::sqrt(2.0);
    StateVector v(2);
    if (c == '+' || c == 'p') {
        v << s, s;
    } else if (c == '-' || c == 'm') {
        v << s, -s;
    } else {
        throw ConfigError("pattern", std::string("invalid character '") + c + "'");
    }
    return v;
}

}  // namespace

Graph::Graph(int n, std::vector<std::pair<int, int>> edges, int max_qubits) : n_(n) {
    if (n < 1) throw ConfigError("graph.qubits", "must be positive");
    if (n > max_qubits) {
        throw ConfigError("graph.qubits", std::to_string(n) + " exceeds the cap of " +
                                              std::to_string(max_qubits));
    }
    std::set<std::pair<int, int>> seen;
    for (auto [a, b] : edges) {
        if (a == b) throw ConfigError("graph.edges", "self-loop on vertex " + std::to_string(a));
        if (a > b) std::swap(a, b);
        if (a < 0 || b >= n) throw ConfigError("graph.edges", "vertex out of range");
        if (!seen.insert({a, b}).second) throw ConfigError("graph.edges", "duplicate edge");
        edges_.emplace_back(a, b);
    }
}

Graph Graph::from_one_based(int n, const std::vector<std::pair<int, int>>& edges,
                            int max_qubits) {
    std::vector<std::pair<int, int>> zero;
    zero.reserve(edges.size());
    for (auto [a, b] : edges) zero.emplace_back(a - 1, b - 1);
    return Graph(n, std::move(zero), max_qubits);
}

Graph five_qubit_reference_graph() {
    return Graph::from_one_based(5, {{1, 2}, {1, 3}, {2, 3}, {3, 4}, {4, 5}});
}

Operator build_circuit(const Graph& g) {
    const Index d = g.dim();
    Operator u = Operator::Zero(d, d);
    for (Index b = 0; b < d; ++b) {
        int sign = 1;
        for (auto [j, k] : g.edges()) {
            if (bit(b, j, g.n()) == 1 && bit(b, k, g.n()) == 1) sign = -sign;
        }
        u(b, b) = static_cast<double>(sign);
    }
    return u;
}

Operator build_stabilizer_noise(const Graph& g, int qubit) {
    if (qubit < 0 || qubit >= g.n()) {
        throw PreconditionError("stabilizer noise: qubit index " + std::to_string(qubit) +
                                " out of range");
    }
    const Operator u = build_circuit(g);
    const Operator local = outer(plus_minus('+'), plus_minus('-'));
    return u.adjoint() * embed_local(local, qubit, g.n()) * u;
}

GraphHamiltonian build_graph_hamiltonian(const Graph& g, double tol) {
    const Index d = g.dim();
    const Operator u = build_circuit(g);
    Operator x(2, 2);
    x << 0.0, 1.0, 1.0, 0.0;
    Operator sum_x = Operator::Zero(d, d);
    for (int q = 0; q < g.n(); ++q) sum_x += embed_local(x, q, g.n());
    Operator h = -(u.adjoint() * sum_x * u);

    const double n = static_cast<double>(g.n());
    const Eigen::VectorXd ev = hermitian_eigenvalues(h);
    if (std::abs(ev(0) + n) > 1e-8 || (d > 1 && ev(1) - ev(0) < 1e-6)) {
        throw Error("graph Hamiltonian: ground energy is not a unique -n");
    }
    DensityOperator ground = product_state(std::string(static_cast<std::size_t>(g.n()), '+'), g, true);
    std::vector<StateVector> target_vec;
    {
        // rho_G is rank one; its range is the target.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ground.matrix().real());
        target_vec.push_back(es.eigenvectors().col(d - 1).cast<Complex>());
    }
    const TargetSubspace target = TargetSubspace::span(target_vec);
    Operator k = (h + n * identity(d)) / (2.0 * n);
    LyapunovCertificate cert = LyapunovCertificate::from_matrix(k, target, tol);
    return {std::move(h), std::move(cert), std::move(ground)};
}

DensityOperator product_state(std::string_view pattern, const Graph& g, bool rotate) {
    if (static_cast<int>(pattern.size()) != g.n()) {
        throw ConfigError("pattern", "length " + std::to_string(pattern.size()) +
                                         " does not match " + std::to_string(g.n()) + " qubits");
    }
    StateVector psi = StateVector::Ones(1);
    for (char c : pattern) {
        const StateVector local = plus_minus(c);
        StateVector next(psi.size() * 2);
        for (Index i = 0; i < psi.size(); ++i) next.segment(2 * i, 2) = psi(i) * local;
        psi = std::move(next);
    }
    if (rotate) psi = build_circuit(g) * psi;
    return DensityOperator::pure(psi);
}

GraphMeasurement parse_graph_measurement(std::string_view name) {
    if (name == "certificate") return GraphMeasurement::Certificate;
    if (name == "hamiltonian") return GraphMeasurement::Hamiltonian;
    if (name == "none") return GraphMeasurement::None;
    throw ConfigError("system.measurement", "unknown measurement '" + std::string(name) + "'");
}

const char* to_string(GraphMeasurement m) {
    switch (m) {
        case GraphMeasurement::Certificate: return "certificate";
        case GraphMeasurement::Hamiltonian: return "hamiltonian";
        case GraphMeasurement::None: return "none";
    }
    return "unknown";
}

std::vector<LindbladGenerator> graph_generators(const Graph& g, const GraphHamiltonian& gh,
                                                GraphMeasurement measurement, double scale) {
    const Index d = g.dim();
    Operator c = Operator::Zero(d, d);
    if (measurement == GraphMeasurement::Certificate) c = scale * gh.k_g.k();
    if (measurement == GraphMeasurement::Hamiltonian) c = scale * gh.h_g;
    std::vector<LindbladGenerator> gens;
    for (int q = 0; q < g.n(); ++q) {
        gens.emplace_back(Operator::Zero(d, d), std::vector<Operator>{build_stabilizer_noise(g, q)},
                          c, "L" + std::to_string(q + 1));
    }
    return gens;
}

}  // namespace qswitch
