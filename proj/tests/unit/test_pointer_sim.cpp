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
#include <vector>

#include "test_support.hpp"
#include "workfluct/errors.hpp"
#include "workfluct/pointer_sim.hpp"
#include "workfluct/random.hpp"

using namespace workfluct;
using namespace workfluct::pointer;
using namespace testing;

namespace {

constexpr double kInvQuarticRootPi = 0.75112554446494248286;

struct Case {
    DensityMatrix rho;
    Matrix e;
    Matrix pi;
    double s;
};

Case random_case(random::Engine& rng, double s_lo, double s_hi) {
    const std::size_t d = random::uniform_index(rng, 2, 6);
    Matrix e = random::random_projector(d, random::uniform_index(rng, 1, d - 1), rng);
    Matrix pi = random::random_projector(d, random::uniform_index(rng, 1, d - 1), rng);
    const double s = std::exp(random::uniform(rng, std::log(s_lo), std::log(s_hi)));
    return Case{random::random_density(d, rng), std::move(e), std::move(pi), s};
}

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("Gaussian amplitude") {
    CHECK(gaussian_amplitude(1.0, 0.0) == doctest::Approx(kInvQuarticRootPi).epsilon(1e-15));
    CHECK(gaussian_amplitude(2.0, 0.0) == doctest::Approx(kInvQuarticRootPi / std::sqrt(2.0)).epsilon(1e-15));
    random::Engine rng(3);
    for (int rep = 0; rep < 100; ++rep) {
        const double s = random::uniform(rng, 0.05, 50.0);
        const double x = random::uniform(rng, -30.0, 30.0);
        CHECK(gaussian_amplitude(s, -x) == gaussian_amplitude(s, x));
    }
    for (double s : {0.05, 0.3, 1.0, 7.0, 100.0}) {
        const std::size_t n = 4001;
        const double dx = 20.0 * s / static_cast<double>(n - 1);
        std::vector<double> y(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double g = gaussian_amplitude(s, -10.0 * s + static_cast<double>(k) * dx);
            y[k] = g * g;
        }
        CHECK(std::abs(trapezoid(y, dx) - 1.0) <= 1e-10);
    }
}

TEST_CASE("quadrature helpers") {
    const std::vector<double> ones(11, 1.0);
    CHECK(trapezoid(ones, 0.1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(simpson(ones, 0.1) == doctest::Approx(1.0).epsilon(1e-15));
    std::vector<double> cube(11);
    for (std::size_t k = 0; k < cube.size(); ++k) cube[k] = std::pow(0.1 * static_cast<double>(k), 3);
    CHECK(simpson(cube, 0.1) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK_THROWS_AS(simpson(std::vector<double>(4, 1.0), 0.1), Error);
    std::vector<double> ints(1000);
    for (std::size_t k = 0; k < ints.size(); ++k) ints[k] = static_cast<double>(k + 1);
    CHECK(pairwise_sum(ints) == 500500.0);
}

TEST_CASE("Kraus operators") {
    const Matrix e = proj(ket({1, 0}));
    CHECK(kraus_nx(e, 1.0, 40.0).cwiseAbs().maxCoeff() < 1e-300);
    CHECK(kraus_nx(e, 1.0, -40.0).cwiseAbs().maxCoeff() < 1e-300);
    for (double x : {-2.0, 0.0, 0.5, 1.0, 3.0}) {
        CHECK(max_dev(kraus_nx(Matrix::Identity(3, 3), 0.7, x), gaussian_amplitude(0.7, x - 1.0) * Matrix::Identity(3, 3)) ==
              0.0);
    }
    CHECK(kind_of([&] { kraus_nx(pauli_x(), 1.0, 0.0); }) == ErrorKind::NotProjector);

    random::Engine rng(5);
    for (int rep = 0; rep < 30; ++rep) {
        const auto c = random_case(rng, 0.05, 50.0);
        const auto d = static_cast<Eigen::Index>(c.e.rows());
        CHECK(max_dev(grid_completeness(c.e, PointerConfig::defaults(c.s)), Matrix::Identity(d, d)) <= 1e-8);
    }
}

TEST_CASE("pointer configuration validation") {
    CHECK_NOTHROW(PointerConfig::defaults(0.05).validate());
    PointerConfig coarse{0.01, -1.0, 2.0, 100};
    CHECK(kind_of([&] { coarse.validate(); }) == ErrorKind::ResolutionTooCoarse);
    PointerConfig narrow{1.0, 0.5, 3.0, 4096};
    CHECK(kind_of([&] { narrow.validate(); }) == ErrorKind::InvalidArgument);
    PointerConfig refined = PointerConfig::defaults(1.0).refined(2);
    CHECK(refined.n_points == 8191);
    CHECK(refined.spacing() == doctest::Approx(PointerConfig::defaults(1.0).spacing() / 2).epsilon(1e-15));

    const auto rho = DensityMatrix::pure(ket({1, 0}));
    CHECK(kind_of([&] { postselected_pointer_mean(rho, proj(ket({1, 0})), proj(ket({1, 1})), coarse); }) ==
          ErrorKind::ResolutionTooCoarse);
}

TEST_CASE("postselection on an orthogonal state is impossible") {
    const auto rho = DensityMatrix::pure(ket({1, 0}));
    const Matrix e = proj(ket({1, 0}));
    const Matrix pi = proj(ket({0, 1}));
    CHECK(kind_of([&] { postselected_pointer_mean(rho, e, pi, PointerConfig::defaults(1.0)); }) ==
          ErrorKind::PostselectionImpossible);
    CHECK(kind_of([&] { closed_form_pointer_mean(rho, e, pi, 1.0); }) == ErrorKind::PostselectionImpossible);
}

TEST_CASE("grid oracle agrees with the closed form") {
    random::Engine rng(2024);
    double worst = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
        const auto c = random_case(rng, 0.2, 50.0);
        const auto grid = postselected_pointer_mean(c.rho, c.e, c.pi, PointerConfig::defaults(c.s));
        const auto closed = closed_form_pointer_mean(c.rho, c.e, c.pi, c.s);
        worst = std::max({worst, std::abs(grid.q_j - closed.q_j), std::abs(grid.mean_x - closed.mean_x)});

        CHECK(grid.q_j >= -1e-12);
        std::vector<double> dens;
        for (const auto& [x, v] : grid.per_x_density) {
            CHECK(v >= -1e-12);
            dens.push_back(v);
        }
        CHECK(std::abs(trapezoid(dens, PointerConfig::defaults(c.s).spacing()) - grid.q_j) <= 1e-8);
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("commuting state: mean independent of s") {
    random::Engine rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t d = random::uniform_index(rng, 2, 6);
        const Matrix u = random::haar_unitary(d, rng);
        Matrix e = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        Matrix r = e;
        for (std::size_t k = 0; k < d; ++k) {
            const Matrix pk = u.col(static_cast<Eigen::Index>(k)) * u.col(static_cast<Eigen::Index>(k)).adjoint();
            if (k % 2 == 0) e += pk;
            r += random::uniform(rng, 0.1, 1.0) * pk;
        }
        const auto rho = DensityMatrix::trusted(r / r.trace().real());
        const Matrix pi = random::random_projector(d, 1, rng);
        const double expected = (pi * e * rho.matrix()).trace().real() / (pi * rho.matrix()).trace().real();
        for (double s : {0.2, 1.0, 5.0, 40.0}) {
            const auto grid = postselected_pointer_mean(rho, e, pi, PointerConfig::defaults(s));
            CHECK(std::abs(grid.mean_x - expected) <= 1e-8);
        }
    }
}

TEST_CASE("strong and weak pointer limits") {
    const auto p = hadamard_qubit_protocol();
    random::Engine rng(9);
    for (int rep = 0; rep < 20; ++rep) {
        const auto rho = random::random_density(2, rng);
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                const Matrix e = p.h_initial().level_projector(i);
                const Matrix pi = p.final_projector(j);
                const double tpm = (pi * e * rho.matrix() * e).trace().real();
                const double weak = (rho.matrix() * e * pi).trace().real();
                const auto strong = postselected_pointer_mean(rho, e, pi, PointerConfig::defaults(0.05));
                CHECK(std::abs(strong.q_j * strong.mean_x - tpm) <= 1e-3);
                const auto wk = postselected_pointer_mean(rho, e, pi, PointerConfig::defaults(100.0));
                CHECK(std::abs(wk.q_j * wk.mean_x - weak) <= 1e-3);
            }
        }
    }
}

TEST_CASE("q_j * mean_x interpolates linearly in the branch overlap") {
    random::Engine rng(10);
    for (int rep = 0; rep < 20; ++rep) {
        const auto c = random_case(rng, 0.2, 50.0);
        const double tpm = (c.pi * c.e * c.rho.matrix() * c.e).trace().real();
        const double weak = (c.rho.matrix() * c.e * c.pi).trace().real();
        double prev_t = -1.0;
        for (double s : {0.2, 0.5, 1.0, 2.0, 10.0, 50.0}) {
            const auto closed = closed_form_pointer_mean(c.rho, c.e, c.pi, s);
            const double c_s = std::exp(-1.0 / (4.0 * s * s));
            CHECK(std::abs(closed.q_j * closed.mean_x - (tpm + c_s * (weak - tpm))) <= 1e-12);
            if (std::abs(weak - tpm) > 1e-6) {
                const double t = (closed.q_j * closed.mean_x - tpm) / (weak - tpm);
                CHECK(t >= prev_t - 1e-9);
                prev_t = t;
            }
        }
    }
}

TEST_CASE("eigenstates of the measured projector") {
    random::Engine rng(11);
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t d = random::uniform_index(rng, 2, 6);
        const Matrix u = random::haar_unitary(d, rng);
        Matrix e = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        e += u.col(0) * u.col(0).adjoint();
        const Matrix pi = random::random_projector(d, 1, rng);
        const auto inside = DensityMatrix::pure(u.col(0));
        const auto outside = DensityMatrix::pure(u.col(1));
        for (double s : {0.1, 1.0, 30.0}) {
            CHECK(closed_form_pointer_mean(inside, e, pi, s).mean_x == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(std::abs(closed_form_pointer_mean(outside, e, pi, s).mean_x) <= 1e-12);
            CHECK(postselected_pointer_mean(inside, e, pi, PointerConfig::defaults(s)).mean_x ==
                  doctest::Approx(1.0).epsilon(1e-8));
            CHECK(std::abs(postselected_pointer_mean(outside, e, pi, PointerConfig::defaults(s)).mean_x) <= 1e-8);
        }
    }
}
