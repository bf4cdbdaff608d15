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
#include <optional>
#include <utility>
#include <vector>

#include "workfluct/quantum_core.hpp"

namespace workfluct {

/// A driven protocol: initial Hamiltonian, drive, final Hamiltonian.
class ProtocolSpec {
public:
    /// Throws DimensionMismatch unless all three parts share one dimension.
    ProtocolSpec(HamiltonianSpec h_initial, UnitarySpec drive, HamiltonianSpec h_final);

    const HamiltonianSpec& h_initial() const noexcept { return h_initial_; }
    const UnitarySpec& drive() const noexcept { return drive_; }
    const HamiltonianSpec& h_final() const noexcept { return h_final_; }
    std::size_t dim() const noexcept { return h_initial_.dim(); }

    /// The time-ordered drive unitary U.
    const Matrix& unitary() const noexcept { return unitary_; }
    /// U^dagger |j'> for final level j.
    Vector backpropagated_final_level(std::size_t j) const;
    /// Pi_j = U^dagger |j'><j'| U.
    Matrix final_projector(std::size_t j) const;
    /// Default merge tolerance, 1e-9 * max(1, largest |E|) over both Hamiltonians.
    double default_merge_tol() const;

private:
    HamiltonianSpec h_initial_;
    UnitarySpec drive_;
    HamiltonianSpec h_final_;
    Matrix unitary_;
};

struct WorkPoint {
    double w = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    double value = 0.0;
    /// Every (i, j) pair summed into this point; a single entry unless merged.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

enum class DistributionKind { Tpm, Weak, FiniteS };

const char* to_string(DistributionKind kind);

struct WorkDistribution {
    DistributionKind kind = DistributionKind::Tpm;
    std::optional<double> s;
    bool aggregated = false;
    /// Points ordered by (i, j) when unmerged, by w when merged.
    std::vector<WorkPoint> points;
    /// Basis used for degenerate initial levels in the opt-in degenerate mode.
    std::optional<Matrix> degenerate_basis;

    double total() const;
};

struct PovmElement {
    Matrix matrix;
    std::size_t i = 0;
    std::size_t j = 0;
};

struct WorkGroup {
    double w = 0.0;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

struct WorkSupport {
    std::vector<WorkGroup> groups;
    bool matching_gaps = false;
};

/// How the weak and finite-s distributions treat a degenerate H(0).
enum class DegeneracyPolicy {
    Reject,
    /// Use the stored eigenvectors of H(0) as the rank-one projectors and
    /// record that basis in the output.
    UseStoredBasis,
};

WorkSupport work_support(const ProtocolSpec& p, double merge_tol);

std::vector<PovmElement> tpm_povm(const ProtocolSpec& p);

WorkDistribution tpm_distribution(const DensityMatrix& rho, const ProtocolSpec& p);

WorkDistribution weak_distribution(const DensityMatrix& rho, const ProtocolSpec& p,
                                   DegeneracyPolicy policy = DegeneracyPolicy::Reject);

/// Postselected pointer shift q_j <X>_j of the Gaussian-pointer protocol with spread s.
WorkDistribution finite_s_distribution(const DensityMatrix& rho, const ProtocolSpec& p, double s,
                                       DegeneracyPolicy policy = DegeneracyPolicy::Reject);

/// e^{-1/(4 s^2)}, the overlap of the two pointer branches.
double branch_overlap(double s);

double average_work(const WorkDistribution& d);

WorkDistribution merge_by_work(const WorkDistribution& d, double merge_tol);

}  // namespace workfluct
