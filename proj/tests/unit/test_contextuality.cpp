// Copyright 2026 The workfluct Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "test_support.hpp"
#include "workfluct/contextuality.hpp"
#include "workfluct/errors.hpp"
#include "workfluct/pointer_sim.hpp"
#include "workfluct/random.hpp"

using namespace workfluct;
using namespace testing;

namespace {

constexpr double kQubitWitness = -0.1035533905932737622;

// erfc at selected points, evaluated at 50 digits.
constexpr std::pair<double, double> kErfcTable[] = {
    {1e-6, 0.99999887162083290486},   {1e-3, 0.9988716212090307636},    {0.01, 0.98871658444415038285},
    {0.05, 0.94362802220298337304},   {0.1, 0.8875370839817151016},     {0.25, 0.72367360983176306701},
    {0.5, 0.47950012218695346232},    {0.75, 0.2888443663464848684},    {1.0, 0.15729920705028513066},
    {1.25, 0.077099871743541769863},  {1.5, 0.033894853524689272933},   {2.0, 0.0046777349810472658379},
    {2.5, 0.00040695201744495893956}, {3.0, 0.000022090496998585441373}, {4.0, 1.5417257900280018852e-8},
    {5.0, 1.5374597944280348502e-12}, {6.0, 2.1519736712498913117e-17}, {8.0, 1.122429717298292708e-29},
    {10.0, 2.088487583762544757e-45}, {20.0, 5.3958656116079009289e-176},
};

struct QubitCase {
    DensityMatrix rho;
    Matrix e;
    Matrix pi;
};

QubitCase qubit_case() {
    const Matrix e = proj(ket({1, 0}));
    const Matrix pi = proj(ket({1, 1}));
    return QubitCase{find_negative_state(e, pi).rho, e, pi};
}

struct RandomCase {
    DensityMatrix rho;
    Matrix e;
    Matrix pi;
    double s;
};

RandomCase random_case(random::Engine& rng, double s_lo, double s_hi) {
    const std::size_t d = random::uniform_index(rng, 2, 6);
    Matrix e = random::random_projector(d, random::uniform_index(rng, 1, d - 1), rng);
    Matrix pi = random::random_projector(d, random::uniform_index(rng, 1, d - 1), rng);
    const double s = std::exp(random::uniform(rng, std::log(s_lo), std::log(s_hi)));
    return RandomCase{random::random_density(d, rng), std::move(e), std::move(pi), s};
}

// Projectors sharing an eigenbasis.
std::pair<Matrix, Matrix> commuting_pair(std::size_t d, random::Engine& rng) {
    const Matrix u = random::haar_unitary(d, rng);
    const auto n = static_cast<Eigen::Index>(d);
    Matrix e = Matrix::Zero(n, n);
    Matrix pi = Matrix::Zero(n, n);
    e += u.col(0) * u.col(0).adjoint();
    pi += u.col(0) * u.col(0).adjoint();
    for (Eigen::Index k = 1; k < n; ++k) {
        const Matrix pk = u.col(k) * u.col(k).adjoint();
        if (random::uniform(rng, 0.0, 1.0) < 0.5) e += pk;
        if (random::uniform(rng, 0.0, 1.0) < 0.5) pi += pk;
    }
    return {e, pi};
}

}  // namespace

TEST_CASE("erfc backing matches high-precision references") {
    for (const auto& [x, ref] : kErfcTable) {
        CHECK(std::abs(std::erfc(x) - ref) <= 1e-14 * ref);
    }
}

TEST_CASE("weak values") {
    random::Engine rng(41);
    const Matrix u = random::haar_unitary(3, rng);
    const Matrix e = u.col(0) * u.col(0).adjoint();
    const auto rho = DensityMatrix::pure(u.col(0));
    const Complex wv = weak_value(rho, e, random::random_projector(3, 1, rng));
    CHECK(wv.real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(wv.imag()) <= 1e-12);

    const auto q = qubit_case();
    const double p_pi = (q.pi * q.rho.matrix()).trace().real();
    CHECK(weak_value(q.rho, q.e, q.pi).real() == doctest::Approx(kQubitWitness / p_pi).epsilon(1e-12));
    CHECK(weak_value(q.rho, q.e, q.pi).real() < 0.0);

    const auto orth = DensityMatrix::pure(ket({1, -1}));
    CHECK_THROWS_AS(weak_value(orth, q.e, q.pi), Error);

    // Sum over a complete projective family.
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t d = random::uniform_index(rng, 2, 8);
        const auto h = random::random_hamiltonian(d, rng);
        const auto r = random::random_density(d, rng);
        const Matrix pi = random::random_projector(d, random::uniform_index(rng, 1, d), rng);
        double total = 0.0;
        double sum_rule = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            total += weak_value(r, h.level_projector(i), pi).real();
            sum_rule += (r.matrix() * h.level_projector(i) * pi).trace().real();
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(sum_rule - (r.matrix() * pi).trace().real()) <= 1e-12);
    }
}

TEST_CASE("negativity") {
    WorkDistribution d;
    d.points.push_back(WorkPoint{0.0, 0, 0, 1.2, {{0, 0}}});
    d.points.push_back(WorkPoint{1.0, 0, 1, -0.2, {{0, 1}}});
    CHECK(negativity(d) == doctest::Approx(0.2).epsilon(1e-15));

    random::Engine rng(42);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t dim = random::uniform_index(rng, 2, 6);
        const ProtocolSpec p(random::random_hamiltonian(dim, rng), UnitarySpec(random::haar_unitary(dim, rng)),
                             random::random_hamiltonian(dim, rng));
        CHECK(negativity(tpm_distribution(random::random_density(dim, rng), p)) == 0.0);
    }
    const auto q = qubit_case();
    CHECK(negativity(weak_distribution(q.rho, hadamard_qubit_protocol())) >= -kQubitWitness - 1e-12);
}

TEST_CASE("dephasing probability") {
    double prev = 0.5;
    for (double s = 0.01; s < 1e4; s *= 1.3) {
        const double pd = dephasing_probability(s);
        CHECK(pd > 0.0);
        CHECK(pd < 0.5 + 1e-16);
        CHECK(pd <= prev);
        CHECK(std::abs(pd - 0.5 * (1.0 - std::exp(-1.0 / (4 * s * s)))) <= 1e-14);
        prev = pd;
    }
    CHECK(dephasing_probability(1e-3) == 0.5);
    CHECK(dephasing_probability(1e6) <= 1.3e-13);
}

TEST_CASE("E_d and the S matrix") {
    random::Engine rng(43);
    for (int rep = 0; rep < 100; ++rep) {
        const auto c = random_case(rng, 0.2, 50.0);
        const Matrix ed = e_d_matrix(c.e, c.pi);
        CHECK(max_dev(ed * ed, ed) <= 1e-10);
        CHECK(is_hermitian(ed, 1e-12));
        const Matrix grid = pointer::grid_s_matrix(c.e, c.pi, pointer::PointerConfig::defaults(c.s));
        CHECK(max_dev(grid, s_matrix(c.e, c.pi, c.s)) <= 1e-8);
        CHECK(max_dev(s_matrix(c.e, c.pi, 1e6), c.pi) <= 1e-10);
    }
    for (int rep = 0; rep < 30; ++rep) {
        const auto [e, pi] = commuting_pair(random::uniform_index(rng, 2, 6), rng);
        CHECK(max_dev(e_d_matrix(e, pi), pi) <= 1e-12);
        for (double s : {0.1, 1.0, 10.0}) CHECK(max_dev(s_matrix(e, pi, s), pi) <= 1e-12);
    }
    CHECK_THROWS_AS(s_matrix(pauli_x(), proj(ket({1, 0})), 1.0), Error);
}

TEST_CASE("Lemma 1 report") {
    const auto q = qubit_case();
    const auto far = lemma1_report(q.rho, q.e, q.pi, 1e6);
    CHECK(far.p_d <= 1.3e-13);
    CHECK(far.witness == doctest::Approx(kQubitWitness).epsilon(1e-12));
    const double expansion = 0.5 - far.witness / (far.p_pi * std::sqrt(std::numbers::pi) * 1e6);
    CHECK(std::abs(far.p_minus - expansion) <= 1e-9);
    CHECK(far.condition_2c);
    CHECK(std::abs(far.p_d - dephasing_probability(1e6)) <= 1e-14);
    CHECK(max_dev(far.e_d * far.e_d, far.e_d) <= 1e-10);

    const auto hundred = lemma1_report(q.rho, q.e, q.pi, 100.0);
    CHECK(std::abs(hundred.gap - hundred.asymptotic_gap) <= 0.1 * std::abs(hundred.asymptotic_gap));
    CHECK(hundred.gap == doctest::Approx(hundred.p_minus - 0.5 - hundred.p_d / hundred.p_pi).epsilon(1e-9));

    random::Engine rng(44);
    for (int rep = 0; rep < 30; ++rep) {
        const auto [e, pi] = commuting_pair(random::uniform_index(rng, 2, 6), rng);
        const auto st = DensityMatrix::trusted(0.5 * e / e.trace().real() + 0.5 * pi / pi.trace().real());
        if ((pi * st.matrix()).trace().real() <= 1e-6) continue;
        for (double s = 0.1; s <= 1e6; s *= 10.0) CHECK_FALSE(lemma1_report(st, e, pi, s).condition_2c);
    }

    CHECK_THROWS_AS(lemma1_report(DensityMatrix::pure(ket({1, -1})), q.e, q.pi, 1.0), Error);
}

TEST_CASE("p_minus closed form against the grid integral") {
    random::Engine rng(45);
    double worst = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
        const auto c = random_case(rng, 0.3, 50.0);
        const auto rep_c = lemma1_report(c.rho, c.e, c.pi, c.s);
        const double grid = pointer::grid_p_minus(c.rho, c.e, c.pi, pointer::PointerConfig::defaults(c.s));
        worst = std::max(worst, std::abs(grid - rep_c.p_minus));
    }
    CHECK(worst <= 1e-7);
}

TEST_CASE("asymptotic gap") {
    // gap = asymptotic_gap - (1 + B) / (8 s^2 p_pi) + O(s^-3) with |B| <= 1, so the
    // relative error of the leading term is at most sqrt(pi) / (4 s |witness|) to second order.
    random::Engine rng(46);
    std::size_t tested = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const auto c = random_case(rng, 1.0, 2.0);
        const auto ns = find_negative_state(c.e, c.pi);
        if (ns.witness_min >= -1e-3) continue;
        ++tested;
        const double w = std::abs(ns.witness_min);
        const double s_ok = std::max(50.0, 10.0 / w);
        for (double s : {s_ok, 4 * s_ok}) {
            const auto r = lemma1_report(ns.rho, c.e, c.pi, s);
            CHECK(std::abs(r.gap - r.asymptotic_gap) <= 0.1 * std::abs(r.asymptotic_gap));
        }
        const auto r1 = lemma1_report(ns.rho, c.e, c.pi, 50.0);
        const auto r2 = lemma1_report(ns.rho, c.e, c.pi, 500.0);
        const double e1 = std::abs(r1.gap / r1.asymptotic_gap - 1.0);
        const double e2 = std::abs(r2.gap / r2.asymptotic_gap - 1.0);
        CHECK(e2 <= 0.15 * e1 + 1e-9);
    }
    CHECK(tested > 100);
}

TEST_CASE("threshold search") {
    const auto q = qubit_case();
    const auto t = s_threshold(q.rho, q.e, q.pi);
    REQUIRE(t.s_star.has_value());
    CHECK(*t.s_star > 0.0);
    CHECK(lemma1_report(q.rho, q.e, q.pi, *t.s_star).condition_2c);
    CHECK(t.fails_just_below);
    CHECK(t.holds_at_10x);
    CHECK(t.holds_at_100x);

    const Matrix e = proj(ket({1, 0}));
    const auto diag = DensityMatrix::trusted(mat2(0.7, 0, 0, 0.3));
    CHECK_FALSE(s_threshold(diag, e, q.pi).s_star.has_value());

    random::Engine rng(47);
    for (int rep = 0; rep < 50; ++rep) {
        const auto c = random_case(rng, 1.0, 2.0);
        const auto ns = find_negative_state(c.e, c.pi);
        if (ns.witness_min > -1e-6) continue;
        const auto tr = s_threshold(ns.rho, c.e, c.pi);
        CHECK(tr.s_star.has_value());
        CHECK(tr.fails_just_below);
    }
}

TEST_CASE("constructive TPM model") {
    const auto ident = ProtocolSpec(HamiltonianSpec::diagonal({0, 1, 2}), UnitarySpec(Matrix(Matrix::Identity(3, 3))),
                                    HamiltonianSpec::diagonal({0, 1, 2}));
    const auto m = build_tpm_model(ident);
    for (std::size_t r = 0; r < m.outcomes.size(); ++r) {
        for (std::size_t l = 0; l < 3; ++l) {
            const double expected = (m.outcomes[r].i == l && m.outcomes[r].j == l) ? 1.0 : 0.0;
            CHECK(std::abs(m.response(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(l)) - expected) <= 1e-15);
        }
    }

    const auto had = hadamard_qubit_protocol();
    const auto mh = build_tpm_model(had);
    for (std::size_t r = 0; r < mh.outcomes.size(); ++r) {
        for (std::size_t l = 0; l < 2; ++l) {
            const double expected = mh.outcomes[r].i == l ? 0.5 : 0.0;
            CHECK(std::abs(mh.response(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(l)) - expected) <= 1e-15);
        }
    }
    CHECK(verify_model(mh, DensityMatrix::pure(ket({1, 1})), had).passed);

    random::Engine rng(48);
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t d = random::uniform_index(rng, 2, 8);
        const ProtocolSpec p(random::random_hamiltonian(d, rng), UnitarySpec(random::haar_unitary(d, rng)),
                             random::random_hamiltonian(d, rng));
        const auto model = build_tpm_model(p);
        for (Eigen::Index l = 0; l < model.response.cols(); ++l) {
            CHECK(std::abs(model.response.col(l).sum() - 1.0) <= 1e-12);
            CHECK(model.response.col(l).minCoeff() >= -1e-15);
            CHECK(model.response.col(l).maxCoeff() <= 1.0 + 1e-15);
        }
        // Maximally coherent in the label basis on every fourth instance.
        Vector plus = p.h_initial().eigenvectors().rowwise().sum() / std::sqrt(static_cast<double>(d));
        const auto rho = rep % 4 == 0 ? DensityMatrix::pure(plus) : random::random_density(d, rng);
        const auto prep = model.preparation(rho);
        double total = 0.0;
        for (double w : prep) {
            CHECK(w >= 0.0);
            total += w;
        }
        CHECK(std::abs(total - 1.0) <= 1e-12);
        const auto check = verify_model(model, rho, p);
        CHECK(check.passed);
        CHECK(check.max_deviation <= 1e-12);
    }

    const auto other = ProtocolSpec(HamiltonianSpec::diagonal({0, 1}), UnitarySpec(Matrix(Matrix::Identity(2, 2))),
                                    HamiltonianSpec::diagonal({0, 1}));
    CHECK_THROWS_AS(verify_model(mh, DensityMatrix::maximally_mixed(2), other), Error);
    const auto degenerate = ProtocolSpec(HamiltonianSpec::diagonal({0, 0}), UnitarySpec(hadamard()),
                                         HamiltonianSpec::diagonal({0, 1}));
    CHECK_THROWS_AS(build_tpm_model(degenerate), Error);
}

TEST_CASE("negative state search") {
    const auto oracle = eig2x2(0.5, 0.25, 0.0);
    const auto q = find_negative_state(proj(ket({1, 0})), proj(ket({1, 1})));
    CHECK(std::abs(q.witness_min - oracle[0]) <= 1e-12);
    CHECK(std::abs(q.witness_min - kQubitWitness) <= 1e-12);
    CHECK(std::abs((q.rho.matrix() * proj(ket({1, 0})) * proj(ket({1, 1}))).trace().real() - q.witness_min) <= 1e-12);

    random::Engine rng(49);
    for (std::size_t d : {2, 3, 4}) {
        for (int rep = 0; rep < 20; ++rep) {
            const Matrix e = random::random_projector(d, random::uniform_index(rng, 1, d - 1), rng);
            const Matrix pi = random::random_projector(d, random::uniform_index(rng, 1, d - 1), rng);
            REQUIRE(commutator_norm(e, pi) > 1e-6);
            CHECK(find_negative_state(e, pi).witness_min < -1e-8);
            const auto [ce, cpi] = commuting_pair(d, rng);
            CHECK(find_negative_state(ce, cpi).witness_min >= -1e-12);
        }
    }

    // Monte Carlo: no sampled state beats the returned minimum.
    const Matrix e3 = random::random_projector(3, 1, rng);
    const Matrix pi3 = random::random_projector(3, 2, rng);
    const auto best = find_negative_state(e3, pi3);
    double sampled = 1.0;
    for (int k = 0; k < 100000; ++k) {
        const Vector psi = random::random_pure_state(3, rng);
        sampled = std::min(sampled, (psi.adjoint() * e3 * pi3 * psi)(0, 0).real());
    }
    CHECK(sampled >= best.witness_min - 1e-12);
    CHECK(sampled - best.witness_min < 0.05);

    CHECK_THROWS_AS(find_negative_state(pauli_x(), proj(ket({1, 0}))), Error);
}

TEST_CASE("heuristic protocol search approaches the rank-one optimum") {
    // For rank-one E and Pi the witness is bounded below by -1/8.
    const auto h0 = HamiltonianSpec::diagonal({0.0, 1.0, 2.5});
    const auto ht = HamiltonianSpec::diagonal({0.0, 0.7, 1.9});
    const auto r = search_witness_protocol(h0, ht, 0, 1, 5);
    CHECK(is_unitary(r.unitary, 1e-10));
    CHECK(r.witness_min >= -0.125 - 1e-9);
    CHECK(r.witness_min <= -0.125 + 1e-4);
    CHECK(r.evaluations > 0);
    const auto again = search_witness_protocol(h0, ht, 0, 1, 5);
    CHECK(again.witness_min == r.witness_min);
}
