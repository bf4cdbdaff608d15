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
#include <string>
#include <vector>

#include "workfluct/quantum_core.hpp"
#include "workfluct/work_stats.hpp"

namespace workfluct {

/// Outcome of checking <e^{-beta W}> against its predicted value.
struct FtReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;      // lhs - rhs
    double abs_residual = 0.0;  // |lhs - rhs|
    double rel_residual = 0.0;  // |lhs - rhs| / scale, scale as used by `passed`
    std::optional<double> upsilon;
    bool passed = false;
    /// Whether rho equals the initial Gibbs state within 1e-10; the
    /// Jarzynski equality is only claimed in that case.
    bool thermal_state = false;
    std::optional<std::uint64_t> seed;
};

struct AverageWorkCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool passed = false;
};

struct TailBound {
    double prob = 0.0;
    double bound = 0.0;
    bool holds = false;
};

/// -(1/beta) log(Z_final / Z_initial).
double delta_f(const HamiltonianSpec& h0, const HamiltonianSpec& ht, const ThermalConfig& t);

double exp_beta_work(const WorkDistribution& d, const ThermalConfig& t);

FtReport jarzynski_check(const DensityMatrix& rho, const ProtocolSpec& p, const ThermalConfig& t, double tolerance);

/// Re tr(U^dagger gamma(tau) U gamma(0)^{-1} rho).
double upsilon(const DensityMatrix& rho, const ProtocolSpec& p, const ThermalConfig& t);

FtReport allahverdyan_check(const DensityMatrix& rho, const ProtocolSpec& p, const ThermalConfig& t,
                            double tolerance);

/// Compares the mean of the requested distribution with the unitary energy
/// change tr(U rho U^dagger H(tau)) - tr(rho H(0)). `s` is used for FiniteS.
AverageWorkCheck average_work_check(const DensityMatrix& rho, const ProtocolSpec& p, DistributionKind kind,
                                    double tolerance, std::optional<double> s = std::nullopt);

/// tr(U rho U^dagger H(tau)) - tr(rho H(0)).
double unitary_energy_change(const DensityMatrix& rho, const ProtocolSpec& p);

/// Probability of W < df - x, which a thermal TPM distribution bounds by e^{-beta x}.
TailBound tail_bound_check(const WorkDistribution& d, const ThermalConfig& t, double df, double x);

// ---------------------------------------------------------------------------
// Seeded random-instance suites.

struct FtInstance {
    std::uint64_t seed = 0;
    ProtocolSpec protocol;
    DensityMatrix rho;
    ThermalConfig thermal;
    bool thermal_state = false;
};

/// d in {2..8}, beta in [0.1, 5], Haar drive, Haar eigenbases with energies
/// in [-1, 1]; rho = gamma(0) when `thermal`, else a Ginibre state.
FtInstance make_ft_instance(std::uint64_t seed, bool thermal);

struct SuiteRow {
    std::string suite;
    std::size_t index = 0;
    std::uint64_t seed = 0;
    std::size_t dim = 0;
    double beta = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    double rel_residual = 0.0;
    std::optional<double> upsilon;
    bool thermal_state = false;
    bool passed = false;
};

struct SuiteSummary {
    std::string suite;
    std::size_t count = 0;
    std::size_t failures = 0;
    double max_abs_residual = 0.0;
    double max_rel_residual = 0.0;
    /// Largest |Upsilon - 1| over instances with rho = gamma(0).
    double max_thermal_upsilon_deviation = 0.0;
};

std::vector<SuiteRow> jarzynski_suite(std::size_t instances, std::uint64_t seed, double tolerance);
/// Every fourth instance uses rho = gamma(0); those also require |Upsilon - 1| <= 1e-12.
std::vector<SuiteRow> allahverdyan_suite(std::size_t instances, std::uint64_t seed, double tolerance);
/// Mean work of the weak distribution vs. the unitary energy change.
std::vector<SuiteRow> assumption2_suite(std::size_t instances, std::uint64_t seed, double tolerance);

SuiteSummary summarize(const std::vector<SuiteRow>& rows);

}  // namespace workfluct
