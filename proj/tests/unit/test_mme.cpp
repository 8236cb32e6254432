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
#include "qswitch/mme.hpp"
#include "qswitch/random.hpp"

#include <algorithm>
#include <cmath>

using namespace qswitch;
using namespace qtest;

namespace {

LindbladGenerator decay(double kappa = 0.0) {
    return LindbladGenerator(Operator::Zero(2, 2), {sigma_minus()}, kappa * ket_bra(2, 1, 1), "decay");
}

TargetSubspace ground() { return TargetSubspace::from_projector(ket_bra(2, 0, 0)); }

LindbladGenerator random_generator(Index d, Rng& rng, bool with_c = true) {
    return LindbladGenerator(random_hermitian(d, rng),
                             {random_ginibre(d, d, rng), 0.5 * random_ginibre(d, d, rng)},
                             with_c ? Operator(random_hermitian(d, rng)) : Operator::Zero(d, d));
}

}  // namespace

TEST_CASE("generator_apply examples") {
    DensityOperator one = DensityOperator::pure(basis_vector(2, 1));
    Operator expect = ket_bra(2, 0, 0) - ket_bra(2, 1, 1);
    CHECK(max_abs(generator_apply(decay(), one) - expect) < 1e-15);

    LindbladGenerator null(Operator::Zero(3, 3), {Operator::Zero(3, 3)}, Operator::Zero(3, 3));
    CHECK(max_abs(generator_apply(null, DensityOperator::maximally_mixed(3))) == 0.0);

    // counterexample L1 at |2><2|: K-weighted trace -1
    auto gens = counterexample_generators();
    DensityOperator two = DensityOperator::pure(basis_vector(3, 2));
    Operator out = generator_apply(gens[0], two);
    Operator k = counterexample_certificate().k();
    CHECK(naive_trace(naive_mul(k, out)).real() == doctest::Approx(-1.0).epsilon(1e-14));
    Operator ref = naive_lindblad(gens[0].hamiltonian(), gens[0].noise_ops(),
                                  gens[0].measurement_op(), two.matrix());
    CHECK(max_abs(out - ref) < 1e-14);
}

TEST_CASE("generator_apply matches the loop oracle and is traceless hermitian") {
    Rng rng = make_rng(11);
    for (int rep = 0; rep < 50; ++rep) {
        const Index d = 2 + rep % 4;
        LindbladGenerator g = random_generator(d, rng);
        DensityOperator rho = random_mixed_state(d, rng);
        Operator out = generator_apply(g, rho);
        Operator ref = naive_lindblad(g.hamiltonian(), g.noise_ops(), g.measurement_op(), rho.matrix());
        CHECK(max_abs(out - ref) < 1e-10);
        CHECK(std::abs(naive_trace(out)) < 1e-10);
        CHECK(max_abs(out - naive_dag(out)) < 1e-10);
    }
}

TEST_CASE("generator validation") {
    CHECK_THROWS_AS(LindbladGenerator(sigma_minus(), {}, Operator::Zero(2, 2)), PreconditionError);
    CHECK_THROWS_AS(LindbladGenerator(Operator::Zero(2, 2), {identity(3)}, Operator::Zero(2, 2)),
                    DimensionError);
    CHECK_THROWS_AS(generator_apply(decay(), DensityOperator::maximally_mixed(3)), DimensionError);
}

TEST_CASE("dual generator is the adjoint under the trace pairing") {
    Rng rng = make_rng(12);
    for (int rep = 0; rep < 20; ++rep) {
        LindbladGenerator g = random_generator(3, rng);
        Operator x = random_hermitian(3, rng);
        Operator k = random_hermitian(3, rng);
        Complex lhs = naive_trace(naive_mul(g.dual_apply(k), x));
        Complex rhs = naive_trace(naive_mul(k, g.apply(x)));
        CHECK(std::abs(lhs - rhs) < 1e-10);
    }
}

TEST_CASE("convex_combine") {
    auto gens = counterexample_generators();
    Rng rng = make_rng(13);
    DensityOperator rho = random_mixed_state(3, rng);
    GeneratorCombination c10 = convex_combine(gens, {1.0, 0.0});
    CHECK(max_abs(c10.apply(rho.matrix()) - gens[0].apply(rho.matrix())) < 1e-14);

    GeneratorCombination same = convex_combine({gens[1], gens[1]}, {0.5, 0.5});
    CHECK(max_abs(same.apply(rho.matrix()) - gens[1].apply(rho.matrix())) < 1e-14);

    // D_C counted once: the weighted sum of members reproduces the combination
    GeneratorCombination mix = convex_combine(gens, {0.3, 0.7});
    Operator expect = 0.3 * gens[0].apply(rho.matrix()) + 0.7 * gens[1].apply(rho.matrix());
    CHECK(max_abs(mix.apply(rho.matrix()) - expect) < 1e-13);

    CHECK_THROWS_AS(convex_combine(gens, {0.5, 0.6}), PreconditionError);
    CHECK_THROWS_AS(convex_combine(gens, {1.2, -0.2}), PreconditionError);
    CHECK_THROWS_AS(convex_combine(gens, {1.0}), PreconditionError);
    CHECK_THROWS_AS(convex_combine({}, {}), PreconditionError);
}

TEST_CASE("uniform combination of graph stabilizers reproduces the averaged dissipator") {
    Graph g = Graph::from_one_based(3, {{1, 2}, {2, 3}});
    GraphHamiltonian gh = build_graph_hamiltonian(g);
    auto gens = graph_generators(g, gh, GraphMeasurement::None);
    GeneratorCombination c = convex_combine(gens, {1.0 / 3, 1.0 / 3, 1.0 / 3});
    Rng rng = make_rng(14);
    DensityOperator rho = random_mixed_state(8, rng);
    Operator expect = Operator::Zero(8, 8);
    for (int q = 0; q < 3; ++q) expect += naive_dissipator(build_stabilizer_noise(g, q), rho.matrix()) / 3.0;
    CHECK(max_abs(c.apply(rho.matrix()) - expect) < 1e-13);
}

TEST_CASE("mme_propagate") {
    LindbladGenerator null(Operator::Zero(2, 2), {}, Operator::Zero(2, 2));
    DensityOperator rho0 = DensityOperator::pure(basis_vector(2, 1));
    auto path = mme_propagate(null, rho0, 0.01, 5);
    REQUIRE(path.size() == 6);
    for (const auto& r : path) CHECK(r.matrix() == rho0.matrix());

    // qubit decay against the closed form
    auto decay_path = mme_propagate(decay(), rho0, 0.001, 1000);
    CHECK(decay_path.back().matrix()(1, 1).real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-3));
    CHECK(std::abs(decay_path.back().matrix()(1, 1).real() - std::exp(-1.0)) < 1e-3);

    CHECK_THROWS_AS(mme_propagate(decay(), rho0, 0.0, 10), PreconditionError);
    // a step far too large drives an eigenvalue negative and reports its index
    LindbladGenerator fast(Operator::Zero(2, 2), {10.0 * sigma_minus()}, Operator::Zero(2, 2));
    try {
        mme_propagate(fast, rho0, 0.1, 5);
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        REQUIRE(e.step().has_value());
        CHECK(*e.step() == 1);
    }
}

TEST_CASE("mme_propagate agrees with the exponential oracle") {
    Rng rng = make_rng(15);
    LindbladGenerator g = random_generator(3, rng);
    DensityOperator rho0 = random_mixed_state(3, rng);
    const double dt = 1e-4;
    const long n = 2000;
    auto path = mme_propagate(g, rho0, dt, n);
    // exact flow through exp(t G) on the vectorized state, built from loops
    Eigen::MatrixXcd gm(9, 9);
    for (Index c = 0; c < 9; ++c) {
        Operator e = basis_op(3, c % 3, c / 3);
        Operator col = naive_lindblad(g.hamiltonian(), g.noise_ops(), g.measurement_op(), e);
        for (Index r = 0; r < 9; ++r) gm(r, c) = col(r % 3, r / 3);
    }
    Eigen::MatrixXcd flow = naive_expm(gm * (dt * n));
    Eigen::VectorXcd v = flow * vec(rho0.matrix());
    CHECK(max_abs(path.back().matrix() - unvec(v, 3)) < 5e-3);
}

TEST_CASE("mme on the graph fixture approaches the target monotonically") {
    Graph g = five_qubit_reference_graph();
    GraphHamiltonian gh = build_graph_hamiltonian(g);
    auto gens = graph_generators(g, gh, GraphMeasurement::Certificate);
    GeneratorCombination c = convex_combine(gens, std::vector<double>(5, 0.2));
    DensityOperator rho_g = product_state("+++++", g, true);
    auto path = mme_propagate(c, product_state("--++-", g, true), 0.005, 400);
    double prev = trace_distance(path.front(), rho_g);
    CHECK(prev == doctest::Approx(1.0));
    for (std::size_t k = 1; k < path.size(); ++k) {
        double d = trace_distance(path[k], rho_g);
        CHECK(d <= prev + 1e-12);
        prev = d;
    }
    // each of the three flipped qubits relaxes at rate 1/5 independently
    const double all_fixed = std::pow(1.0 - std::exp(-400 * 0.005 / 5.0), 3);
    CHECK(std::abs(prev - (1.0 - all_fixed)) < 1e-3);
}

TEST_CASE("vectorize_generator") {
    LindbladGenerator null(Operator::Zero(2, 2), {}, Operator::Zero(2, 2));
    CHECK(vectorize_generator(null).cwiseAbs().maxCoeff() == 0.0);

    Eigen::VectorXcd ev = general_eigenvalues(vectorize_generator(decay()));
    std::vector<double> re;
    for (Index i = 0; i < ev.size(); ++i) {
        CHECK(std::abs(ev(i).imag()) < 1e-12);
        re.push_back(ev(i).real());
    }
    std::sort(re.begin(), re.end());
    CHECK(re[0] == doctest::Approx(-1.0));
    CHECK(re[1] == doctest::Approx(-0.5));
    CHECK(re[2] == doctest::Approx(-0.5));
    CHECK(std::abs(re[3]) < 1e-12);

    Rng rng = make_rng(16);
    for (int rep = 0; rep < 10; ++rep) {
        LindbladGenerator g = random_generator(4, rng);
        Eigen::MatrixXcd gm = vectorize_generator(g);
        // matrix-unit basis
        for (Index c = 0; c < 16; ++c) {
            Operator e = basis_op(4, c % 4, c / 4);
            CHECK((gm * vec(e) - vec(g.apply(e))).cwiseAbs().maxCoeff() < 1e-10);
        }
        DensityOperator rho = random_mixed_state(4, rng);
        CHECK((gm * vec(rho.matrix()) - vec(g.apply(rho.matrix()))).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("check_gas examples") {
    GasReport decay_report = check_gas(decay(), ground());
    CHECK(decay_report.is_invariant);
    CHECK(decay_report.is_gas);
    CHECK(decay_report.spectrum.reduced);
    REQUIRE(decay_report.spectrum.eigenvalues.size() == 1);
    CHECK(decay_report.spectrum.eigenvalues[0].real() == doctest::Approx(-1.0));

    auto gens = counterexample_generators();
    TargetSubspace t = counterexample_target();
    GasReport r1 = check_gas(gens[0], t);
    CHECK(r1.is_invariant);
    CHECK_FALSE(r1.is_gas);
    GasReport r2 = check_gas(gens[1], t);
    CHECK_FALSE(r2.is_invariant);
    CHECK_FALSE(r2.is_gas);
    CHECK(r2.spectrum.invariance_defect > kInvarianceTol);
    CHECK_FALSE(r2.spectrum.reduced);
    CHECK(r2.spectrum.eigenvalues.size() == 9);
}

TEST_CASE("no convex combination of the counterexample pair is GAS") {
    auto gens = counterexample_generators();
    TargetSubspace t = counterexample_target();
    for (int i = 0; i <= 10; ++i) {
        const double a = i / 10.0;
        GasReport r = check_gas(convex_combine(gens, {a, 1.0 - a}), t);
        CHECK_FALSE(r.is_gas);
    }
}

TEST_CASE("graph stabilizers make the graph state GAS in combination") {
    Graph g = five_qubit_reference_graph();
    GraphHamiltonian gh = build_graph_hamiltonian(g);
    auto gens = graph_generators(g, gh, GraphMeasurement::Certificate);
    GasReport r = check_gas(convex_combine(gens, std::vector<double>(5, 0.2)), gh.k_g.target());
    CHECK(r.is_invariant);
    CHECK(r.is_gas);
    CHECK(r.spectrum.eigenvalues.size() == 31u * 31u);
    for (const auto& gen : gens) CHECK(check_gas(gen, gh.k_g.target()).is_invariant);
}

TEST_CASE("reduced dual matrix matches reduced_dual_apply") {
    auto gens = counterexample_generators();
    TargetSubspace t = counterexample_target();
    GeneratorCombination c = convex_combine(gens, {0.5, 0.5});
    Eigen::MatrixXcd m = reduced_dual_matrix(c, t);
    REQUIRE(m.rows() == 4);
    Rng rng = make_rng(17);
    Operator x = random_hermitian(2, rng);
    CHECK((m * vec(x) - vec(reduced_dual_apply(c, t, x))).cwiseAbs().maxCoeff() < 1e-12);
}
