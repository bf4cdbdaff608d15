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
#include <optional>
#include <vector>

#include "workfluct/quantum_core.hpp"
#include "workfluct/work_stats.hpp"

namespace workfluct {

/// Every quantity entering the finite-s anomaly conditions for one
/// (rho, E, Pi, s) configuration.
struct ContextualityReport {
    double witness = 0.0;  // Re tr(rho E Pi)
    double p_pi = 0.0;     // tr(Pi rho)
    double s = 0.0;
    double p_d = 0.0;      // (1 - e^{-1/(4 s^2)}) / 2
    Matrix e_d;            // (E - E~) Pi (E - E~)
    /// Weight of negative pointer readings given postselection, normalised by
    /// p_pi rather than by tr(S rho); exceeds 1 for small s when tr(S rho) > p_pi.
    double p_minus = 0.0;
    /// p_minus - 1/2 - p_d / p_pi, evaluated without cancellation.
    double gap = 0.0;
    bool condition_2c = false;
    /// -witness / (p_pi sqrt(pi) s), the leading large-s behaviour of `gap`.
    double asymptotic_gap = 0.0;
};

struct ThresholdResult {
    double witness = 0.0;
    /// Empty when the witness is not negative.
    std::optional<double> s_star;
    bool holds_at_10x = false;
    bool holds_at_100x = false;
    /// Whether condition 2c fails just below s_star (s_star * (1 - 1e-6)).
    bool fails_just_below = false;
    /// Sign changes of condition 2c seen on a 64-point log grid; more than
    /// one means the condition is not monotone in s for this instance.
    std::size_t flips_on_log_grid = 0;
    bool non_monotone = false;
};

struct OntologicalModel {
    std::size_t dim = 0;
    /// Energy eigenstates of H(0), the ontic labels.
    Matrix labels;
    /// Work points in (i, j) order; response(row, lambda).
    std::vector<WorkPoint> outcomes;
    Eigen::MatrixXd response;
    /// Drive and final basis the model was built from.
    Matrix unitary;
    Matrix final_basis;

    /// p(lambda | rho) = <lambda|rho|lambda>.
    std::vector<double> preparation(const DensityMatrix& rho) const;
};

struct ModelCheck {
    double max_deviation = 0.0;
    bool passed = false;
};

struct NegativeState {
    DensityMatrix rho;
    Vector state;
    double witness_min = 0.0;
};

struct ProtocolSearchResult {
    Matrix unitary;
    double witness_min = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

/// tr(rho E Pi) / tr(rho Pi); only the real part carries a contextuality claim.
Complex weak_value(const DensityMatrix& rho, const Matrix& e, const Matrix& pi);

/// -sum min(0, value).
double negativity(const WorkDistribution& d);

/// (1 - e^{-1/(4 s^2)}) / 2.
double dephasing_probability(double s);

/// (E - E~) Pi (E - E~).
Matrix e_d_matrix(const Matrix& e, const Matrix& pi);

ContextualityReport lemma1_report(const DensityMatrix& rho, const Matrix& e, const Matrix& pi, double s);

/// Smallest s (on a doubling bracket refined by bisection) where the
/// anomaly condition holds. Throws BracketFailure past s = 1e9.
ThresholdResult s_threshold(const DensityMatrix& rho, const Matrix& e, const Matrix& pi);

/// (1 - p_d) Pi + p_d E_d.
Matrix s_matrix(const Matrix& e, const Matrix& pi, double s);

OntologicalModel build_tpm_model(const ProtocolSpec& p);

ModelCheck verify_model(const OntologicalModel& m, const DensityMatrix& rho, const ProtocolSpec& p);

/// Exact minimiser of Re tr(rho E Pi) over all states: the ground state of
/// (E Pi + Pi E) / 2.
NegativeState find_negative_state(const Matrix& e, const Matrix& pi);

/// Heuristic search over drives U = exp(-i K), K Hermitian, for the most
/// negative reachable witness between level i of H(0) and level j of H(tau).
/// Nelder-Mead simplex from a seeded random start.
ProtocolSearchResult search_witness_protocol(const HamiltonianSpec& h0, const HamiltonianSpec& ht, std::size_t i,
                                             std::size_t j, std::uint64_t seed, std::size_t max_evaluations = 4000);

}  // namespace workfluct
