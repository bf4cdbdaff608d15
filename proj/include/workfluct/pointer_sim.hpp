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
#include <span>
#include <utility>
#include <vector>

#include "workfluct/quantum_core.hpp"

namespace workfluct::pointer {

/// Position grid for the Gaussian pointer with spread `s`.
struct PointerConfig {
    double s = 1.0;
    double x_min = -11.0;
    double x_max = 12.0;
    std::size_t n_points = 4096;

    /// [-10 s - 1, 10 s + 2] with 4096 nodes.
    static PointerConfig defaults(double s);

    double spacing() const { return (x_max - x_min) / static_cast<double>(n_points - 1); }
    double node(std::size_t k) const;
    /// Same bounds, `factor` times as many intervals.
    PointerConfig refined(std::size_t factor) const;

    /// Throws InvalidArgument for bad bounds and ResolutionTooCoarse when
    /// the spacing exceeds s / 8.
    void validate() const;
};

struct PointerOracleResult {
    double q_j = 0.0;
    double mean_x = 0.0;
    std::vector<std::pair<double, double>> per_x_density;
};

struct ClosedFormPointer {
    double q_j = 0.0;
    double mean_x = 0.0;
};

/// G_s(x) = (pi s^2)^{-1/4} exp(-x^2 / (2 s^2)).
double gaussian_amplitude(double s, double x);

/// N_x = G_s(x - 1) E + G_s(x) (1 - E) for a projector E.
Matrix kraus_nx(const Matrix& e, double s, double x);

/// Composite trapezoid rule on uniformly spaced samples, pairwise summed.
double trapezoid(std::span<const double> y, double dx);
/// Composite Simpson rule; `y.size()` must be odd.
double simpson(std::span<const double> y, double dx);

/// Deterministic pairwise summation.
double pairwise_sum(std::span<const double> values);

/// Grid simulation of the weakly coupled pointer with postselection on `pi`.
PointerOracleResult postselected_pointer_mean(const DensityMatrix& rho, const Matrix& e, const Matrix& pi,
                                              const PointerConfig& cfg);

/// Closed-form q_j and <X>_j for the same measurement.
ClosedFormPointer closed_form_pointer_mean(const DensityMatrix& rho, const Matrix& e, const Matrix& pi, double s);

/// Trapezoid integral of N_x^dagger N_x over the grid (should be the identity).
Matrix grid_completeness(const Matrix& e, const PointerConfig& cfg);

/// Trapezoid integral of N_x^dagger Pi N_x over the grid.
Matrix grid_s_matrix(const Matrix& e, const Matrix& pi, const PointerConfig& cfg);

/// (1 / tr(Pi rho)) * integral over x < 0 of tr(N_x^dagger Pi N_x rho), on a
/// grid [cfg.x_min, 0] with cfg.n_points nodes (rounded up to odd) and Simpson weights.
double grid_p_minus(const DensityMatrix& rho, const Matrix& e, const Matrix& pi, const PointerConfig& cfg);

}  // namespace workfluct::pointer
