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

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "workfluct/quantum_core.hpp"

namespace workfluct::random {

using Engine = std::mt19937_64;

/// Per-instance seed derived from a run seed and an instance index
/// (splitmix64 finaliser), so instances can be regenerated individually.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

/// Matrix of i.i.d. standard complex Gaussians.
Matrix ginibre(std::size_t rows, std::size_t cols, Engine& rng);

/// Haar-distributed unitary from the phase-corrected QR of a Ginibre matrix.
Matrix haar_unitary(std::size_t d, Engine& rng);

Vector random_pure_state(std::size_t d, Engine& rng);

/// G G^dagger / tr(G G^dagger) with G a d x d Ginibre matrix.
DensityMatrix random_density(std::size_t d, Engine& rng);

/// Energies uniform in [-scale, scale] with Haar-random eigenvectors.
HamiltonianSpec random_hamiltonian(std::size_t d, Engine& rng, double scale = 1.0);

/// Rank-`rank` projector onto a Haar-random subspace.
Matrix random_projector(std::size_t d, std::size_t rank, Engine& rng);

double uniform(Engine& rng, double lo, double hi);
std::size_t uniform_index(Engine& rng, std::size_t lo, std::size_t hi_inclusive);

}  // namespace workfluct::random
