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

#include "workfluct/random.hpp"

#include <algorithm>
#include <vector>

#include "workfluct/errors.hpp"

namespace workfluct::random {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Matrix ginibre(std::size_t rows, std::size_t cols, Engine& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index c = 0; c < g.cols(); ++c) {
        for (Eigen::Index r = 0; r < g.rows(); ++r) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(r, c) = Complex(re, im);
        }
    }
    return g;
}

Matrix haar_unitary(std::size_t d, Engine& rng) {
    const Matrix z = ginibre(d, d, rng);
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < q.cols(); ++k) {
        const double a = std::abs(r(k, k));
        if (a > 0.0) q.col(k) *= r(k, k) / a;
    }
    return q;
}

Vector random_pure_state(std::size_t d, Engine& rng) {
    Vector v = ginibre(d, 1, rng).col(0);
    return v / v.norm();
}

DensityMatrix random_density(std::size_t d, Engine& rng) {
    const Matrix g = ginibre(d, d, rng);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return validate_density(0.5 * (rho + rho.adjoint()));
}

HamiltonianSpec random_hamiltonian(std::size_t d, Engine& rng, double scale) {
    std::vector<double> energies(d);
    for (auto& e : energies) e = uniform(rng, -scale, scale);
    return HamiltonianSpec::from_eigensystem(std::move(energies), haar_unitary(d, rng));
}

Matrix random_projector(std::size_t d, std::size_t rank, Engine& rng) {
    if (rank > d) throw Error(ErrorKind::InvalidArgument, "projector rank exceeds dimension");
    const Matrix u = haar_unitary(d, rng);
    const auto cols = u.leftCols(static_cast<Eigen::Index>(rank));
    return cols * cols.adjoint();
}

double uniform(Engine& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::size_t uniform_index(Engine& rng, std::size_t lo, std::size_t hi_inclusive) {
    return std::uniform_int_distribution<std::size_t>(lo, hi_inclusive)(rng);
}

}  // namespace workfluct::random
