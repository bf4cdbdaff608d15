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

#include "workfluct/fluctuation.hpp"

#include <algorithm>
#include <cmath>

#include "workfluct/errors.hpp"
#include "workfluct/random.hpp"

namespace workfluct {

namespace {

// Largest beta * (E_max - E_min) for which gamma(0)^{-1} is formed.
constexpr double kMaxInverseExponent = 690.0;

double exp_minus_beta_delta_f(const HamiltonianSpec& h0, const HamiltonianSpec& ht, const ThermalConfig& t) {
    return std::exp(log_partition_function(ht, t) - log_partition_function(h0, t));
}

bool is_gibbs(const DensityMatrix& rho, const ProtocolSpec& p, const ThermalConfig& t) {
    return max_abs_entry(rho.matrix() - gibbs_state(p.h_initial(), t).matrix()) <= 1e-10;
}

}  // namespace

double delta_f(const HamiltonianSpec& h0, const HamiltonianSpec& ht, const ThermalConfig& t) {
    return -(log_partition_function(ht, t) - log_partition_function(h0, t)) / t.beta;
}

double exp_beta_work(const WorkDistribution& d, const ThermalConfig& t) {
    double sum = 0.0;
    for (const auto& pt : d.points) sum += pt.value * std::exp(-t.beta * pt.w);
    return sum;
}

FtReport jarzynski_check(const DensityMatrix& rho, const ProtocolSpec& p, const ThermalConfig& t, double tolerance) {
    FtReport r;
    r.lhs = exp_beta_work(tpm_distribution(rho, p), t);
    r.rhs = exp_minus_beta_delta_f(p.h_initial(), p.h_final(), t);
    r.residual = r.lhs - r.rhs;
    r.abs_residual = std::abs(r.residual);
    r.rel_residual = r.abs_residual / std::abs(r.rhs);
    r.passed = r.abs_residual <= tolerance * std::abs(r.rhs);
    r.thermal_state = is_gibbs(rho, p, t);
    return r;
}

double upsilon(const DensityMatrix& rho, const ProtocolSpec& p, const ThermalConfig& t) {
    if (rho.dim() != p.dim()) throw Error(ErrorKind::DimensionMismatch, "state and protocol dimensions differ");
    const auto& e0 = p.h_initial().energies();
    const double spread = e0.back() - e0.front();
    if (t.beta * spread > kMaxInverseExponent) {
        throw Error(ErrorKind::SingularGibbsState,
                    "initial Gibbs state is numerically singular (beta * energy spread > 690)");
    }
    // gamma(0)^{-1} = V diag(Z_0 e^{beta E_i}) V^dagger, Z_0 e^{beta E_i} = sum_k e^{-beta (E_k - E_i)}.
    Eigen::VectorXcd inverse_weights(static_cast<Eigen::Index>(e0.size()));
    for (std::size_t i = 0; i < e0.size(); ++i) {
        double sum = 0.0;
        for (double ek : e0) sum += std::exp(-t.beta * (ek - e0[i]));
        inverse_weights(static_cast<Eigen::Index>(i)) = sum;
    }
    const Matrix& v = p.h_initial().eigenvectors();
    const Matrix gamma0_inv = v * inverse_weights.asDiagonal() * v.adjoint();
    const Matrix& u = p.unitary();
    const Matrix gamma_tau = gibbs_state(p.h_final(), t).matrix();
    return (u.adjoint() * gamma_tau * u * gamma0_inv * rho.matrix()).trace().real();
}

FtReport allahverdyan_check(const DensityMatrix& rho, const ProtocolSpec& p, const ThermalConfig& t,
                            double tolerance) {
    FtReport r;
    r.upsilon = upsilon(rho, p, t);
    r.lhs = exp_beta_work(weak_distribution(rho, p), t);
    r.rhs = exp_minus_beta_delta_f(p.h_initial(), p.h_final(), t) * *r.upsilon;
    r.residual = r.lhs - r.rhs;
    r.abs_residual = std::abs(r.residual);
    const double scale = std::max(1.0, std::abs(r.rhs));
    r.rel_residual = r.abs_residual / scale;
    r.passed = r.abs_residual <= tolerance * scale;
    r.thermal_state = is_gibbs(rho, p, t);
    return r;
}

double unitary_energy_change(const DensityMatrix& rho, const ProtocolSpec& p) {
    const Matrix& u = p.unitary();
    const Matrix evolved = u * rho.matrix() * u.adjoint();
    return (evolved * p.h_final().matrix()).trace().real() - (rho.matrix() * p.h_initial().matrix()).trace().real();
}

AverageWorkCheck average_work_check(const DensityMatrix& rho, const ProtocolSpec& p, DistributionKind kind,
                                    double tolerance, std::optional<double> s) {
    WorkDistribution d;
    switch (kind) {
        case DistributionKind::Tpm: d = tpm_distribution(rho, p); break;
        case DistributionKind::Weak: d = weak_distribution(rho, p); break;
        case DistributionKind::FiniteS:
            if (!s) throw Error(ErrorKind::InvalidArgument, "finite-s average work check needs s");
            d = finite_s_distribution(rho, p, *s);
            break;
    }
    AverageWorkCheck c;
    c.lhs = average_work(d);
    c.rhs = unitary_energy_change(rho, p);
    c.passed = std::abs(c.lhs - c.rhs) <= tolerance;
    return c;
}

TailBound tail_bound_check(const WorkDistribution& d, const ThermalConfig& t, double df, double x) {
    if (d.kind != DistributionKind::Tpm) {
        throw Error(ErrorKind::NotAProbability, "tail bound is only defined for TPM work distributions");
    }
    if (!(x >= 0.0)) throw Error(ErrorKind::InvalidArgument, "tail offset x must be non-negative");
    TailBound b;
    for (const auto& pt : d.points) {
        if (pt.value < -1e-12) throw Error(ErrorKind::NotAProbability, "distribution has negative entries");
        if (pt.w < df - x) b.prob += pt.value;
    }
    b.bound = std::exp(-t.beta * x);
    b.holds = b.prob <= b.bound + 1e-12;
    return b;
}

// ---------------------------------------------------------------------------

FtInstance make_ft_instance(std::uint64_t seed, bool thermal) {
    random::Engine rng(seed);
    const std::size_t d = random::uniform_index(rng, 2, 8);
    const ThermalConfig t = ThermalConfig::make(random::uniform(rng, 0.1, 5.0));
    HamiltonianSpec h0 = random::random_hamiltonian(d, rng);
    HamiltonianSpec ht = random::random_hamiltonian(d, rng);
    Matrix u = random::haar_unitary(d, rng);
    ProtocolSpec protocol(std::move(h0), UnitarySpec(std::move(u)), std::move(ht));
    DensityMatrix rho = thermal ? gibbs_state(protocol.h_initial(), t) : random::random_density(d, rng);
    return FtInstance{seed, std::move(protocol), std::move(rho), t, thermal};
}

namespace {

SuiteRow row_from(const std::string& suite, std::size_t index, const FtInstance& inst, const FtReport& r) {
    SuiteRow row;
    row.suite = suite;
    row.index = index;
    row.seed = inst.seed;
    row.dim = inst.protocol.dim();
    row.beta = inst.thermal.beta;
    row.lhs = r.lhs;
    row.rhs = r.rhs;
    row.residual = r.residual;
    row.rel_residual = r.rel_residual;
    row.upsilon = r.upsilon;
    row.thermal_state = inst.thermal_state;
    row.passed = r.passed;
    return row;
}

}  // namespace

std::vector<SuiteRow> jarzynski_suite(std::size_t instances, std::uint64_t seed, double tolerance) {
    std::vector<SuiteRow> rows;
    rows.reserve(instances);
    for (std::size_t k = 0; k < instances; ++k) {
        const FtInstance inst = make_ft_instance(random::derive_seed(seed, k), true);
        rows.push_back(row_from("jarzynski", k, inst, jarzynski_check(inst.rho, inst.protocol, inst.thermal, tolerance)));
    }
    return rows;
}

std::vector<SuiteRow> allahverdyan_suite(std::size_t instances, std::uint64_t seed, double tolerance) {
    std::vector<SuiteRow> rows;
    rows.reserve(instances);
    for (std::size_t k = 0; k < instances; ++k) {
        const FtInstance inst = make_ft_instance(random::derive_seed(seed, k), k % 4 == 0);
        SuiteRow row =
            row_from("allahverdyan", k, inst, allahverdyan_check(inst.rho, inst.protocol, inst.thermal, tolerance));
        if (inst.thermal_state && std::abs(*row.upsilon - 1.0) > 1e-12) row.passed = false;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<SuiteRow> assumption2_suite(std::size_t instances, std::uint64_t seed, double tolerance) {
    std::vector<SuiteRow> rows;
    rows.reserve(instances);
    for (std::size_t k = 0; k < instances; ++k) {
        const FtInstance inst = make_ft_instance(random::derive_seed(seed, k), false);
        const AverageWorkCheck c = average_work_check(inst.rho, inst.protocol, DistributionKind::Weak, tolerance);
        FtReport r;
        r.lhs = c.lhs;
        r.rhs = c.rhs;
        r.residual = c.lhs - c.rhs;
        r.rel_residual = std::abs(r.residual);
        r.passed = c.passed;
        rows.push_back(row_from("assumption2", k, inst, r));
    }
    return rows;
}

SuiteSummary summarize(const std::vector<SuiteRow>& rows) {
    SuiteSummary s;
    if (!rows.empty()) s.suite = rows.front().suite;
    s.count = rows.size();
    for (const auto& row : rows) {
        if (!row.passed) ++s.failures;
        s.max_abs_residual = std::max(s.max_abs_residual, std::abs(row.residual));
        s.max_rel_residual = std::max(s.max_rel_residual, row.rel_residual);
        if (row.thermal_state && row.upsilon) {
            s.max_thermal_upsilon_deviation = std::max(s.max_thermal_upsilon_deviation, std::abs(*row.upsilon - 1.0));
        }
    }
    return s;
}

}  // namespace workfluct
