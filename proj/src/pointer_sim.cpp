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

#include "workfluct/pointer_sim.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "workfluct/errors.hpp"

namespace workfluct::pointer {

namespace {

constexpr double kMinPostselection = 1e-14;

// tr(a b) without forming the product.
Complex trace_product(const Matrix& a, const Matrix& b) { return a.transpose().cwiseProduct(b).sum(); }

void require_operands(const DensityMatrix& rho, const Matrix& e, const Matrix& pi) {
    require_projector(e, "measured projector");
    require_projector(pi, "postselection projector");
    if (e.rows() != pi.rows() || static_cast<std::size_t>(e.rows()) != rho.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "state and projector dimensions differ");
    }
}

// Trapezoid integral of a matrix-valued function sampled on the grid.
template <typename Fn>
Matrix integrate_matrix(const PointerConfig& cfg, Eigen::Index dim, Fn&& sample) {
    std::vector<std::vector<double>> re(static_cast<std::size_t>(dim * dim)), im(re.size());
    for (auto& v : re) v.resize(cfg.n_points);
    for (auto& v : im) v.resize(cfg.n_points);
    for (std::size_t k = 0; k < cfg.n_points; ++k) {
        const Matrix m = sample(cfg.node(k));
        for (Eigen::Index c = 0; c < dim; ++c) {
            for (Eigen::Index r = 0; r < dim; ++r) {
                const auto idx = static_cast<std::size_t>(c * dim + r);
                re[idx][k] = m(r, c).real();
                im[idx][k] = m(r, c).imag();
            }
        }
    }
    Matrix out(dim, dim);
    const double dx = cfg.spacing();
    for (Eigen::Index c = 0; c < dim; ++c) {
        for (Eigen::Index r = 0; r < dim; ++r) {
            const auto idx = static_cast<std::size_t>(c * dim + r);
            out(r, c) = Complex(trapezoid(re[idx], dx), trapezoid(im[idx], dx));
        }
    }
    return out;
}

}  // namespace

PointerConfig PointerConfig::defaults(double s) {
    return PointerConfig{s, -10.0 * s - 1.0, 10.0 * s + 2.0, 4096};
}

double PointerConfig::node(std::size_t k) const {
    if (k + 1 == n_points) return x_max;
    return x_min + static_cast<double>(k) * spacing();
}

PointerConfig PointerConfig::refined(std::size_t factor) const {
    PointerConfig out = *this;
    out.n_points = (n_points - 1) * factor + 1;
    return out;
}

void PointerConfig::validate() const {
    if (!std::isfinite(s) || !(s > 0.0)) throw Error(ErrorKind::InvalidArgument, "pointer spread s must be positive");
    if (n_points < 2) throw Error(ErrorKind::InvalidArgument, "pointer grid needs at least two nodes");
    if (!(x_min < 0.0 && x_max > 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "pointer grid must cover both branch centres 0 and 1");
    }
    if (spacing() > s / 8.0) {
        std::ostringstream os;
        os << "grid spacing " << spacing() << " exceeds s/8 = " << s / 8.0;
        throw Error(ErrorKind::ResolutionTooCoarse, os.str());
    }
}

double gaussian_amplitude(double s, double x) {
    if (!(s > 0.0)) throw Error(ErrorKind::InvalidArgument, "pointer spread s must be positive");
    const double norm = std::pow(std::numbers::pi * s * s, -0.25);
    return norm * std::exp(-x * x / (2.0 * s * s));
}

Matrix kraus_nx(const Matrix& e, double s, double x) {
    require_projector(e, "measured projector");
    const Matrix complement = Matrix::Identity(e.rows(), e.cols()) - e;
    return gaussian_amplitude(s, x - 1.0) * e + gaussian_amplitude(s, x) * complement;
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double sum = 0.0;
        for (double v : values) sum += v;
        return sum;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double trapezoid(std::span<const double> y, double dx) {
    if (y.size() < 2) return 0.0;
    return dx * (pairwise_sum(y) - 0.5 * (y.front() + y.back()));
}

double simpson(std::span<const double> y, double dx) {
    if (y.size() < 3 || y.size() % 2 == 0) {
        throw Error(ErrorKind::InvalidArgument, "Simpson rule needs an odd number of samples >= 3");
    }
    std::vector<double> weighted(y.begin(), y.end());
    for (std::size_t k = 1; k + 1 < weighted.size(); ++k) weighted[k] *= (k % 2 == 1) ? 4.0 : 2.0;
    return dx / 3.0 * pairwise_sum(weighted);
}

PointerOracleResult postselected_pointer_mean(const DensityMatrix& rho, const Matrix& e, const Matrix& pi,
                                              const PointerConfig& cfg) {
    cfg.validate();
    require_operands(rho, e, pi);

    const Matrix complement = Matrix::Identity(e.rows(), e.cols()) - e;
    std::vector<double> density(cfg.n_points), moment(cfg.n_points);
    PointerOracleResult out;
    out.per_x_density.reserve(cfg.n_points);
    for (std::size_t k = 0; k < cfg.n_points; ++k) {
        const double x = cfg.node(k);
        // e^{-iP} on the E branch is the exact translation x -> x - 1.
        const Matrix n = gaussian_amplitude(cfg.s, x - 1.0) * e + gaussian_amplitude(cfg.s, x) * complement;
        const Matrix branch = n * rho.matrix() * n.adjoint();
        density[k] = trace_product(pi, branch).real();
        moment[k] = x * density[k];
        out.per_x_density.emplace_back(x, density[k]);
    }
    out.q_j = trapezoid(density, cfg.spacing());
    if (!(out.q_j >= kMinPostselection)) {
        throw Error(ErrorKind::PostselectionImpossible, "postselection probability below 1e-14");
    }
    out.mean_x = trapezoid(moment, cfg.spacing()) / out.q_j;
    return out;
}

ClosedFormPointer closed_form_pointer_mean(const DensityMatrix& rho, const Matrix& e, const Matrix& pi, double s) {
    require_operands(rho, e, pi);
    if (!std::isfinite(s) || !(s > 0.0)) throw Error(ErrorKind::InvalidArgument, "pointer spread s must be positive");
    const double inv = 1.0 / (4.0 * s * s);
    const double overlap = std::exp(-inv);
    const double one_minus_overlap = -std::expm1(-inv);

    const Matrix complement = Matrix::Identity(e.rows(), e.cols()) - e;
    const Matrix& r = rho.matrix();
    const double shifted = trace_product(pi, e * r * e).real();       // <j|rho^{11}|j>
    const double cross = trace_product(pi, e * r * complement).real();  // Re <j|rho^{10}|j>
    const double postselected = trace_product(pi, r).real();

    ClosedFormPointer out;
    out.q_j = postselected - 2.0 * one_minus_overlap * cross;
    if (!(out.q_j > kMinPostselection)) {
        throw Error(ErrorKind::PostselectionImpossible, "postselection probability below 1e-14");
    }
    out.mean_x = (shifted + overlap * cross) / out.q_j;
    return out;
}

Matrix grid_completeness(const Matrix& e, const PointerConfig& cfg) {
    cfg.validate();
    require_projector(e, "measured projector");
    return integrate_matrix(cfg, e.rows(), [&](double x) {
        const Matrix n = kraus_nx(e, cfg.s, x);
        return Matrix(n.adjoint() * n);
    });
}

Matrix grid_s_matrix(const Matrix& e, const Matrix& pi, const PointerConfig& cfg) {
    cfg.validate();
    require_projector(e, "measured projector");
    require_projector(pi, "postselection projector");
    if (e.rows() != pi.rows()) throw Error(ErrorKind::DimensionMismatch, "projector dimensions differ");
    return integrate_matrix(cfg, e.rows(), [&](double x) {
        const Matrix n = kraus_nx(e, cfg.s, x);
        return Matrix(n.adjoint() * pi * n);
    });
}

double grid_p_minus(const DensityMatrix& rho, const Matrix& e, const Matrix& pi, const PointerConfig& cfg) {
    cfg.validate();
    require_operands(rho, e, pi);
    const double p_pi = trace_product(pi, rho.matrix()).real();
    if (!(p_pi > kMinPostselection)) {
        throw Error(ErrorKind::PostselectionImpossible, "postselection probability below 1e-14");
    }
    const std::size_t n = cfg.n_points % 2 == 1 ? cfg.n_points : cfg.n_points + 1;
    const double dx = -cfg.x_min / static_cast<double>(n - 1);
    std::vector<double> density(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double x = (k + 1 == n) ? 0.0 : cfg.x_min + static_cast<double>(k) * dx;
        const Matrix nx = kraus_nx(e, cfg.s, x);
        density[k] = trace_product(nx.adjoint() * pi * nx, rho.matrix()).real();
    }
    return simpson(density, dx) / p_pi;
}

}  // namespace workfluct::pointer
