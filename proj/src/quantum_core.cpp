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

#include "workfluct/quantum_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "workfluct/errors.hpp"
#include "workfluct/tolerance.hpp"

namespace workfluct {

namespace {

std::string format_deviation(const char* what, double value, double limit) {
    std::ostringstream os;
    os.precision(6);
    os << what << " " << value << " exceeds tolerance " << limit;
    return os.str();
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

// Fixes the global phase of each column so that its largest entry is real
// and positive; keeps eigenvector output reproducible.
void normalize_phases(Matrix& vectors) {
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
        Eigen::Index best = 0;
        double best_abs = -1.0;
        for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
            const double a = std::abs(vectors(r, c));
            if (a > best_abs + 1e-12) {
                best_abs = a;
                best = r;
            }
        }
        if (best_abs > 0.0) {
            const Complex phase = vectors(best, c) / best_abs;
            vectors.col(c) *= std::conj(phase);
        }
    }
}

}  // namespace

double max_abs_entry(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_deviation(const Matrix& m) { return max_abs_entry(m - m.adjoint()); }

double unitarity_deviation(const Matrix& m) {
    return max_abs_entry(m.adjoint() * m - Matrix::Identity(m.rows(), m.cols()));
}

double projector_deviation(const Matrix& m) {
    return std::max(hermiticity_deviation(m), max_abs_entry(m * m - m));
}

bool is_hermitian(const Matrix& m, double tolerance) {
    return m.rows() == m.cols() && hermiticity_deviation(m) <= tolerance;
}

bool is_unitary(const Matrix& m, double tolerance) {
    return m.rows() == m.cols() && unitarity_deviation(m) <= tolerance;
}

bool is_projector(const Matrix& m, double tolerance) {
    return m.rows() == m.cols() && projector_deviation(m) <= tolerance;
}

void require_square(const Matrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        std::ostringstream os;
        os << what << " must be a non-empty square matrix, got " << m.rows() << "x" << m.cols();
        throw Error(ErrorKind::DimensionMismatch, os.str());
    }
}

void require_projector(const Matrix& m, const char* what) {
    require_square(m, what);
    const double limit = tol(1e-10);
    const double dev = projector_deviation(m);
    if (dev > limit) {
        throw Error(ErrorKind::NotProjector,
                    std::string(what) + ": " + format_deviation("projector deviation", dev, limit));
    }
}

// ---------------------------------------------------------------------------

DensityMatrix DensityMatrix::pure(const Vector& psi) {
    const double norm = psi.norm();
    if (psi.size() == 0 || !(norm > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "pure state vector must be non-zero");
    }
    const Vector v = psi / norm;
    return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
    if (dim == 0) throw Error(ErrorKind::InvalidArgument, "dimension must be positive");
    const auto n = static_cast<Eigen::Index>(dim);
    return DensityMatrix(Matrix::Identity(n, n) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::trusted(Matrix m) { return DensityMatrix(hermitian_part(m)); }

DensityMatrix validate_density(const Matrix& m) {
    require_square(m, "density matrix");
    const double limit = tol(1e-10);

    const double herm = hermiticity_deviation(m);
    if (herm > limit) {
        throw Error(ErrorKind::NotHermitian, format_deviation("hermiticity deviation", herm, limit));
    }
    const Complex trace = m.trace();
    const double trace_dev = std::abs(trace - Complex(1.0, 0.0));
    if (trace_dev > limit) {
        throw Error(ErrorKind::NotUnitTrace, format_deviation("trace deviation", trace_dev, limit));
    }
    Matrix h = hermitian_part(m);
    const double min_eig = spectrum(h).minCoeff();
    if (min_eig < -limit) {
        std::ostringstream os;
        os.precision(6);
        os << "minimum eigenvalue " << min_eig << " below -" << limit;
        throw Error(ErrorKind::NotPositive, os.str());
    }
    return DensityMatrix(std::move(h));
}

// ---------------------------------------------------------------------------

double degeneracy_tolerance(double energy_scale) { return 1e-9 * std::max(1.0, energy_scale); }

HamiltonianSpec::HamiltonianSpec(std::vector<double> energies, Matrix vectors)
    : energies_(std::move(energies)), vectors_(std::move(vectors)) {
    const double dtol = degeneracy_tolerance(energy_scale());
    std::size_t start = 0;
    for (std::size_t k = 1; k <= energies_.size(); ++k) {
        if (k == energies_.size() || energies_[k] - energies_[k - 1] > dtol) {
            blocks_.emplace_back(start, k);
            degenerate_ = degenerate_ || (k - start > 1);
            start = k;
        }
    }
}

HamiltonianSpec HamiltonianSpec::from_eigensystem(std::vector<double> energies, const Matrix& eigenvectors) {
    const auto n = static_cast<Eigen::Index>(energies.size());
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "Hamiltonian needs at least one level");
    if (eigenvectors.rows() != n || eigenvectors.cols() != n) {
        throw Error(ErrorKind::DimensionMismatch, "eigenvector matrix must be d x d for d energies");
    }
    for (double e : energies) {
        if (!std::isfinite(e)) throw Error(ErrorKind::InvalidArgument, "energies must be finite");
    }
    const double ortho = unitarity_deviation(eigenvectors);
    if (ortho > tol(1e-10)) {
        throw Error(ErrorKind::NotUnitary,
                    format_deviation("eigenvector orthonormality deviation", ortho, tol(1e-10)));
    }

    std::vector<std::size_t> order(energies.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return energies[a] < energies[b]; });
    std::vector<double> sorted(energies.size());
    Matrix vectors(n, n);
    for (std::size_t k = 0; k < order.size(); ++k) {
        sorted[k] = energies[order[k]];
        vectors.col(static_cast<Eigen::Index>(k)) = eigenvectors.col(static_cast<Eigen::Index>(order[k]));
    }
    return HamiltonianSpec(std::move(sorted), std::move(vectors));
}

HamiltonianSpec HamiltonianSpec::diagonal(const std::vector<double>& energies) {
    const auto n = static_cast<Eigen::Index>(energies.size());
    return from_eigensystem(energies, Matrix::Identity(n, n));
}

Matrix HamiltonianSpec::level_projector(std::size_t k) const {
    const Vector v = eigenvector(k);
    return v * v.adjoint();
}

Matrix HamiltonianSpec::block_projector(std::size_t b) const {
    const auto [first, last] = blocks_.at(b);
    const auto cols = vectors_.middleCols(static_cast<Eigen::Index>(first),
                                          static_cast<Eigen::Index>(last - first));
    return cols * cols.adjoint();
}

Matrix HamiltonianSpec::matrix() const {
    Eigen::VectorXcd e(static_cast<Eigen::Index>(dim()));
    for (std::size_t k = 0; k < dim(); ++k) e(static_cast<Eigen::Index>(k)) = energies_[k];
    return vectors_ * e.asDiagonal() * vectors_.adjoint();
}

double HamiltonianSpec::energy_scale() const {
    double scale = 0.0;
    for (double e : energies_) scale = std::max(scale, std::abs(e));
    return scale;
}

std::size_t unitary_dim(const UnitarySpec& u) {
    if (const auto* m = std::get_if<Matrix>(&u)) return static_cast<std::size_t>(m->rows());
    const auto& s = std::get<Schedule>(u);
    return s.segments.empty() ? 0 : static_cast<std::size_t>(s.segments.front().hamiltonian.rows());
}

ThermalConfig ThermalConfig::make(double beta) {
    if (!std::isfinite(beta) || !(beta > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "beta must be finite and positive");
    }
    return ThermalConfig{beta};
}

// ---------------------------------------------------------------------------

Eigen::VectorXd spectrum(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::ConvergenceFailure, "Hermitian eigenvalue iteration did not converge");
    }
    return solver.eigenvalues();
}

HamiltonianSpec eigh(const Matrix& m) {
    require_square(m, "Hamiltonian");
    const double herm = hermiticity_deviation(m);
    if (herm > tol(1e-9)) {
        throw Error(ErrorKind::NotHermitian, format_deviation("hermiticity deviation", herm, tol(1e-9)));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(m));
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::ConvergenceFailure, "Hermitian eigendecomposition did not converge");
    }
    Matrix vectors = solver.eigenvectors();
    normalize_phases(vectors);
    const Eigen::VectorXd& values = solver.eigenvalues();
    return HamiltonianSpec::from_eigensystem(std::vector<double>(values.data(), values.data() + values.size()),
                                             vectors);
}

namespace {

// Boltzmann weights relative to the ground level, e^{-beta (E_k - E_0)}.
Eigen::VectorXd shifted_weights(const HamiltonianSpec& h, const ThermalConfig& t) {
    const auto& e = h.energies();
    const double ground = *std::min_element(e.begin(), e.end());
    Eigen::VectorXd w(static_cast<Eigen::Index>(e.size()));
    for (std::size_t k = 0; k < e.size(); ++k) w(static_cast<Eigen::Index>(k)) = std::exp(-t.beta * (e[k] - ground));
    return w;
}

}  // namespace

double log_partition_function(const HamiltonianSpec& h, const ThermalConfig& t) {
    const auto& e = h.energies();
    const double ground = *std::min_element(e.begin(), e.end());
    return -t.beta * ground + std::log(shifted_weights(h, t).sum());
}

double partition_function(const HamiltonianSpec& h, const ThermalConfig& t) {
    return std::exp(log_partition_function(h, t));
}

DensityMatrix gibbs_state(const HamiltonianSpec& h, const ThermalConfig& t) {
    Eigen::VectorXd w = shifted_weights(h, t);
    w /= w.sum();
    const Eigen::VectorXcd wc = w.cast<Complex>();
    return DensityMatrix::trusted(h.eigenvectors() * wc.asDiagonal() * h.eigenvectors().adjoint());
}

DensityMatrix dephase(const DensityMatrix& rho, const HamiltonianSpec& h) {
    if (rho.dim() != h.dim()) throw Error(ErrorKind::DimensionMismatch, "state and Hamiltonian dimensions differ");
    const auto n = static_cast<Eigen::Index>(rho.dim());
    Matrix out = Matrix::Zero(n, n);
    for (std::size_t b = 0; b < h.blocks().size(); ++b) {
        const Matrix p = h.block_projector(b);
        out += p * rho.matrix() * p;
    }
    return DensityMatrix::trusted(std::move(out));
}

Matrix hermitian_exponential(const Matrix& h, double t) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(h));
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::ConvergenceFailure, "Hermitian eigendecomposition did not converge");
    }
    const Eigen::VectorXd& e = solver.eigenvalues();
    Eigen::VectorXcd phases(e.size());
    for (Eigen::Index k = 0; k < e.size(); ++k) phases(k) = std::polar(1.0, -e(k) * t);
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

Matrix time_ordered_unitary(const UnitarySpec& u) {
    if (const auto* explicit_u = std::get_if<Matrix>(&u)) {
        require_square(*explicit_u, "drive unitary");
        const double dev = unitarity_deviation(*explicit_u);
        if (dev > tol(1e-9)) {
            throw Error(ErrorKind::NotUnitary, format_deviation("unitarity deviation", dev, tol(1e-9)));
        }
        return *explicit_u;
    }
    const auto& schedule = std::get<Schedule>(u);
    if (schedule.segments.empty()) {
        throw Error(ErrorKind::InvalidArgument, "drive schedule has no segments");
    }
    const Eigen::Index n = schedule.segments.front().hamiltonian.rows();
    Matrix total = Matrix::Identity(n, n);
    for (const auto& seg : schedule.segments) {
        require_square(seg.hamiltonian, "schedule segment");
        if (seg.hamiltonian.rows() != n) {
            throw Error(ErrorKind::DimensionMismatch, "schedule segments have different dimensions");
        }
        const double herm = hermiticity_deviation(seg.hamiltonian);
        if (herm > tol(1e-9)) {
            throw Error(ErrorKind::NotHermitian,
                        "schedule segment: " + format_deviation("hermiticity deviation", herm, tol(1e-9)));
        }
        if (!std::isfinite(seg.duration) || seg.duration < 0.0) {
            throw Error(ErrorKind::InvalidArgument, "schedule durations must be finite and non-negative");
        }
        if (seg.duration == 0.0) continue;
        total = hermitian_exponential(seg.hamiltonian, seg.duration) * total;
    }
    return total;
}

DensityMatrix evolve(const DensityMatrix& rho, const UnitarySpec& u) {
    const Matrix unitary = time_ordered_unitary(u);
    if (static_cast<std::size_t>(unitary.rows()) != rho.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "state and unitary dimensions differ");
    }
    return DensityMatrix::trusted(unitary * rho.matrix() * unitary.adjoint());
}

double commutator_norm(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "commutator operands must be square of equal size");
    }
    if (a.size() == 0) return 0.0;
    const Matrix c = a * b - b * a;
    Eigen::JacobiSVD<Matrix> svd(c);
    return svd.singularValues()(0);
}

}  // namespace workfluct
