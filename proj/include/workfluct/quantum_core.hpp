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

#include <complex>
#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace workfluct {

using Complex = std::complex<double>;
/// Dense complex square matrix; every operator in the library is one of these.
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// ---------------------------------------------------------------------------
// Matrix predicates. Deviations are measured as the largest absolute entry.

double hermiticity_deviation(const Matrix& m);
double unitarity_deviation(const Matrix& m);
double projector_deviation(const Matrix& m);

bool is_hermitian(const Matrix& m, double tolerance);
bool is_unitary(const Matrix& m, double tolerance);
bool is_projector(const Matrix& m, double tolerance);

double max_abs_entry(const Matrix& m);

/// Throws DimensionMismatch unless `m` is square and non-empty.
void require_square(const Matrix& m, const char* what);
/// Throws NotProjector unless `m` is a Hermitian idempotent within 1e-10.
void require_projector(const Matrix& m, const char* what);

// ---------------------------------------------------------------------------

/// A validated quantum state: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
public:
    const Matrix& matrix() const noexcept { return m_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }

    static DensityMatrix pure(const Vector& psi);
    static DensityMatrix maximally_mixed(std::size_t dim);

    /// Wraps a matrix already known to be a state (e.g. the output of a
    /// CPTP map on a validated state). Hermitian part is taken, no checks.
    static DensityMatrix trusted(Matrix m);

private:
    explicit DensityMatrix(Matrix m) : m_(std::move(m)) {}
    friend DensityMatrix validate_density(const Matrix& m);

    Matrix m_;
};

/// Spectral data of a Hermitian operator: ascending energies and the
/// matching orthonormal eigenvectors stored as matrix columns.
class HamiltonianSpec {
public:
    /// Validates orthonormality (1e-10) and sorts the levels ascending.
    static HamiltonianSpec from_eigensystem(std::vector<double> energies, const Matrix& eigenvectors);
    /// Levels in the computational basis.
    static HamiltonianSpec diagonal(const std::vector<double>& energies);

    std::size_t dim() const noexcept { return energies_.size(); }
    const std::vector<double>& energies() const noexcept { return energies_; }
    const Matrix& eigenvectors() const noexcept { return vectors_; }
    Vector eigenvector(std::size_t k) const { return vectors_.col(static_cast<Eigen::Index>(k)); }
    /// Rank-one projector onto the k-th eigenvector.
    Matrix level_projector(std::size_t k) const;

    bool degenerate() const noexcept { return degenerate_; }
    /// Consecutive level ranges [first, last) sharing one energy within the
    /// degeneracy tolerance.
    const std::vector<std::pair<std::size_t, std::size_t>>& blocks() const noexcept { return blocks_; }
    /// Projector onto the eigenspace of block `b`.
    Matrix block_projector(std::size_t b) const;

    /// Reconstructs sum_k E_k |k><k|.
    Matrix matrix() const;
    double energy_scale() const;

private:
    HamiltonianSpec(std::vector<double> energies, Matrix vectors);

    std::vector<double> energies_;
    Matrix vectors_;
    bool degenerate_ = false;
    std::vector<std::pair<std::size_t, std::size_t>> blocks_;
};

/// |E_a - E_b| <= 1e-9 * max(1, scale).
double degeneracy_tolerance(double energy_scale);

struct ScheduleSegment {
    Matrix hamiltonian;
    double duration = 0.0;
};

/// Piecewise-constant driving Hamiltonian, applied in list order.
struct Schedule {
    std::vector<ScheduleSegment> segments;
};

/// The driving unitary of a protocol, either given directly or generated by
/// a piecewise-constant Hamiltonian.
using UnitarySpec = std::variant<Matrix, Schedule>;

std::size_t unitary_dim(const UnitarySpec& u);

struct ThermalConfig {
    double beta = 1.0;

    /// Throws InvalidArgument unless beta is finite and positive.
    static ThermalConfig make(double beta);
};

// ---------------------------------------------------------------------------
// Operations

DensityMatrix validate_density(const Matrix& m);

HamiltonianSpec eigh(const Matrix& m);

DensityMatrix gibbs_state(const HamiltonianSpec& h, const ThermalConfig& t);

double partition_function(const HamiltonianSpec& h, const ThermalConfig& t);
/// log Z, evaluated with log-sum-exp.
double log_partition_function(const HamiltonianSpec& h, const ThermalConfig& t);

/// Removes all coherence between distinct eigenspaces of `h`.
DensityMatrix dephase(const DensityMatrix& rho, const HamiltonianSpec& h);

DensityMatrix evolve(const DensityMatrix& rho, const UnitarySpec& u);

/// exp(-i H_k dt_k) products, later segments multiplied on the left.
Matrix time_ordered_unitary(const UnitarySpec& u);

/// exp(-i h t) for Hermitian h, through its spectral decomposition.
Matrix hermitian_exponential(const Matrix& h, double t);

/// Largest singular value of ab - ba.
double commutator_norm(const Matrix& a, const Matrix& b);

/// Ascending eigenvalues of a Hermitian matrix.
Eigen::VectorXd spectrum(const Matrix& m);

}  // namespace workfluct
