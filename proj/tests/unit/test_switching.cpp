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


#include <doctest.h>

#include "oracles.hpp"

#include "qswitch/errors.hpp"
#include "qswitch/fixtures.hpp"
#include "qswitch/graphstate.hpp"
#include "qswitch/random.hpp"
#include "qswitch/switching.hpp"

#include <vector>

using namespace qswitch;
using namespace qtest;

TEST_CASE("cyclic_index examples (0-based indices)") {
    std::vector<double> half{0.5, 0.5};
    CHECK(cyclic_index(0.25, half, 1.0) == 0);
    CHECK(cyclic_index(0.75, half, 1.0) == 1);
    CHECK(cyclic_index(0.5, half, 1.0) == 1);  // partition point owned by the right interval
    CHECK(cyclic_index(1.25, half, 1.0) == 0);

    std::vector<double> degenerate{1.0, 0.0};
    for (double t : {0.0, 0.3, 0.999, 1.0, 7.5}) CHECK(cyclic_index(t, degenerate, 1.0) == 0);

    std::vector<double> three{0.2, 0.3, 0.5};
    CHECK(cyclic_index(2.0, three, 10.0) == 1);
    CHECK(cyclic_index(1.999, three, 10.0) == 0);
    CHECK(cyclic_index(5.0, three, 10.0) == 2);
    CHECK(cyclic_index(9.999, three, 10.0) == 2);
    CHECK(cyclic_index(10.0, three, 10.0) == 0);
    // accumulated floating point lands just below a boundary
    CHECK(cyclic_index(0.1 + 0.2, {std::vector<double>{0.3, 0.7}}, 1.0) == 1);

    CHECK_THROWS_AS(cyclic_index(0.0, std::vector<double>{0.5, 0.6}, 1.0), PreconditionError);
    CHECK_THROWS_AS(cyclic_index(0.0, half, 0.0), PreconditionError);
}

TEST_CASE("cyclic occupancy equals alpha times period") {
    std::vector<double> alpha{0.2, 0.3, 0.5};
    const double period = 1.0;
    const int n = 1000;
    std::vector<int> count(3, 0);
    for (int k = 0; k < n; ++k) ++count[cyclic_index(k * period / n, alpha, period)];
    CHECK(count[0] == 200);
    CHECK(count[1] == 300);
    CHECK(count[2] == 500);
}

TEST_CASE("select_argmin examples") {
    auto gens = counterexample_generators();
    auto cert = counterexample_certificate();
    SwitchDecision d2 = select_argmin(cert, gens, DensityOperator::pure(basis_vector(3, 2)));
    CHECK(d2.j == 0);
    CHECK(d2.v_drifts[0] == doctest::Approx(-1.0));
    CHECK(std::abs(d2.v_drifts[1]) < 1e-14);
    SwitchDecision d1 = select_argmin(cert, gens, DensityOperator::pure(basis_vector(3, 1)));
    CHECK(d1.j == 1);

    std::vector<LindbladGenerator> twins{gens[1], gens[1]};
    CHECK(select_argmin(cert, twins, DensityOperator::maximally_mixed(3)).j == 0);
    CHECK_THROWS_AS(select_argmin(cert, {}, DensityOperator::maximally_mixed(3)), PreconditionError);

    std::vector<double> near{-1.0, -1.0 - 5e-13, -0.5};
    CHECK(argmin_index(near) == 0);
    std::vector<double> apart{-1.0, -1.0 - 1e-9, -0.5};
    CHECK(argmin_index(apart) == 1);
}

TEST_CASE("argmin index is invariant under positive scaling of K") {
    Graph g = five_qubit_reference_graph();
    GraphHamiltonian gh = build_graph_hamiltonian(g);
    auto gens = graph_generators(g, gh, GraphMeasurement::Certificate);
    Rng rng = make_rng(31);
    for (int s = 0; s < 50; ++s) {
        DensityOperator rho = random_mixed_state(32, rng, 3);
        const std::size_t j = select_argmin(gh.k_g, gens, rho).j;
        for (double f : {0.01, 7.0, 1e3}) CHECK(select_argmin(gh.k_g.scaled(f), gens, rho).j == j);
    }
}

TEST_CASE("scheduler holds decisions for dwell_steps") {
    auto gens = counterexample_generators();
    auto cert = counterexample_certificate();
    Scheduler s(SwitchingLaw::measurement_based(cert, 10), gens);
    DensityOperator two = DensityOperator::pure(basis_vector(3, 2));
    DensityOperator one = DensityOperator::pure(basis_vector(3, 1));
    std::vector<long> decided_at;
    long last_until = -1;
    for (long k = 0; k < 35; ++k) {
        // alternate the decision state every step; only switching steps look at it
        const SwitchDecision& d = s.schedule(k, k * 0.001, k % 2 == 0 ? two : one);
        if (d.valid_until_step != last_until) {
            decided_at.push_back(k);
            last_until = d.valid_until_step;
        }
        CHECK(d.j == 0);  // decided at even steps, all multiples of 10
    }
    CHECK(decided_at == std::vector<long>{0, 10, 20, 30});
}

TEST_CASE("cyclic schedule ignores the state") {
    auto gens = counterexample_generators();
    Scheduler a(SwitchingLaw::cyclic({0.5, 0.5}, 0.02, 5), gens);
    Scheduler b(SwitchingLaw::cyclic({0.5, 0.5}, 0.02, 5), gens);
    Rng rng = make_rng(32);
    std::vector<std::size_t> ja, jb;
    for (long k = 0; k < 100; ++k) {
        ja.push_back(a.schedule(k, k * 0.001, random_mixed_state(3, rng)).j);
        jb.push_back(b.schedule(k, k * 0.001, DensityOperator::maximally_mixed(3)).j);
    }
    CHECK(ja == jb);
    // period 20 steps, 10 per index, read every 5 steps
    CHECK(ja[0] == 0);
    CHECK(ja[9] == 0);
    CHECK(ja[10] == 1);
    CHECK(ja[19] == 1);
    CHECK(ja[20] == 0);
}

TEST_CASE("dwell 1 measurement law equals per-step argmin") {
    auto gens = counterexample_generators();
    auto cert = counterexample_certificate();
    Scheduler s(SwitchingLaw::measurement_based(cert, 1), gens);
    Rng rng = make_rng(33);
    for (long k = 0; k < 50; ++k) {
        DensityOperator rho = random_mixed_state(3, rng);
        const SwitchDecision& d = s.schedule(k, k * 0.01, rho);
        SwitchDecision ref = select_argmin(cert, gens, rho);
        CHECK(d.j == ref.j);
        for (std::size_t j = 0; j < gens.size(); ++j)
            CHECK(d.v_drifts[j] == doctest::Approx(ref.v_drifts[j]).epsilon(1e-12));
    }
}

TEST_CASE("law validation") {
    auto gens = counterexample_generators();
    CHECK_THROWS_AS(SwitchingLaw::cyclic({0.5, 0.6}, 1.0), PreconditionError);
    CHECK_THROWS_AS(SwitchingLaw::cyclic({0.5, 0.5}, -1.0), PreconditionError);
    CHECK_THROWS_AS(SwitchingLaw::measurement_based(counterexample_certificate(), 0),
                    PreconditionError);
    CHECK_THROWS_AS(Scheduler(SwitchingLaw::cyclic({1.0}, 1.0), gens), PreconditionError);
    SwitchingLaw st = SwitchingLaw::state_based(counterexample_certificate(), 3);
    CHECK(st.kind() == LawKind::StateBased);
    CHECK(st.dwell_steps() == 3);
    CHECK(st.certificate() != nullptr);
    CHECK(SwitchingLaw::cyclic({1.0, 0.0}, 1.0).certificate() == nullptr);
}
