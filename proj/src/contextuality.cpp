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

#include "workfluct/contextuality.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "workfluct/errors.hpp"
#include "workfluct/random.hpp"

namespace workfluct {

namespace {

constexpr double kMinPostselection = 1e-14;
constexpr double kBracketCeiling = 1e9;
constexpr double kBracketFloor = 1e-6;

Complex trace_product(const Matrix& a, const Matrix& b) { return a.transpose().cwiseProduct(b).sum(); }

void require_pair(const Matrix& e, const Matrix& pi) {
    require_projector(e, "measured projector");
    require_projector(pi, "postselection projector");
    if (e.rows() != pi.rows()) throw Error(ErrorKind::DimensionMismatch, "projector dimensions differ");
}

void require_triple(const DensityMatrix& rho, const Matrix& e, const Matrix& pi) {
    require_pair(e, pi);
    if (static_cast<std::size_t>(e.rows()) != rho.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "state and projector dimensions differ");
    }
}

double checked_s(double s) {
    if (!std::isfinite(s) || !(s > 0.0)) throw Error(ErrorKind::InvalidArgument, "pointer spread s must be positive");
    return s;
}

}  // namespace

Complex weak_value(const DensityMatrix& rho, const Matrix& e, const Matrix& pi) {
    require_triple(rho, e, pi);
    const double p_pi = trace_product(rho.matrix(), pi).real();
    if (!(p_pi > kMinPostselection)) {
        throw Error(ErrorKind::PostselectionImpossible, "tr(Pi rho) below 1e-14; weak value undefined");
    }
    return (rho.matrix() * e * pi).trace() / p_pi;
}

double negativity(const WorkDistribution& d) {
    double sum = 0.0;
    for (const auto& pt : d.points) sum -= std::min(0.0, pt.value);
    return sum;
}

double dephasing_probability(double s) {
    checked_s(s);
    return -0.5 * std::expm1(-1.0 / (4.0 * s * s));
}

Matrix e_d_matrix(const Matrix& e, const Matrix& pi) {
    require_pair(e, pi);
    const Matrix reflection = 2.0 * e - Matrix::Identity(e.rows(), e.cols());
    return reflection * pi * reflection;
}

ContextualityReport lemma1_report(const DensityMatrix& rho, const Matrix& e, const Matrix& pi, double s) {
    require_triple(rho, e, pi);
    checked_s(s);

    ContextualityReport r;
    r.s = s;
    r.p_pi = trace_product(pi, rho.matrix()).real();
    if (!(r.p_pi > kMinPostselection)) {
        throw Error(ErrorKind::PostselectionImpossible, "tr(Pi rho) below 1e-14");
    }
    r.witness = (rho.matrix() * e * pi).trace().real();
    r.p_d = dephasing_probability(s);
    r.e_d = e_d_matrix(e, pi);

    const Matrix complement = Matrix::Identity(e.rows(), e.cols()) - e;
    const Matrix& m = rho.matrix();
    const double shifted = trace_product(e * pi * e, m).real();
    const double cross = trace_product(complement * pi * e + e * pi * complement, m).real();
    const double unshifted = trace_product(complement * pi * complement, m).real();

    const double inv = 1.0 / (4.0 * s * s);
    const double overlap = std::exp(-inv);
    const double far = std::erfc(1.0 / s);       // 2 * integral_{-inf}^0 G_s^2(x - 1)
    const double mid = std::erfc(0.5 / s);       // overlap integral, up to e^{-1/(4 s^2)} / 2
    r.p_minus = (0.5 * far * shifted + 0.5 * overlap * mid * cross + 0.5 * unshifted) / r.p_pi;

    // Same quantity minus 1/2, using shifted + cross + unshifted = p_pi so that
    // no O(1) terms cancel at large s.
    const double shifted_dev = -0.5 * std::erf(1.0 / s);
    const double cross_dev = 0.5 * (std::expm1(-inv) * mid - std::erf(0.5 / s));
    r.gap = (shifted_dev * shifted + cross_dev * cross) / r.p_pi - r.p_d / r.p_pi;

    r.condition_2c = r.p_minus > 0.5 + r.p_d / r.p_pi;
    r.asymptotic_gap = -r.witness / (r.p_pi * std::sqrt(std::numbers::pi) * s);
    return r;
}

ThresholdResult s_threshold(const DensityMatrix& rho, const Matrix& e, const Matrix& pi) {
    require_triple(rho, e, pi);
    ThresholdResult out;
    out.witness = (rho.matrix() * e * pi).trace().real();
    if (out.witness >= -1e-12) return out;

    auto holds = [&](double s) { return lemma1_report(rho, e, pi, s).condition_2c; };

    double lo = 0.0;
    double hi = 1.0;
    if (holds(hi)) {
        while (holds(0.5 * hi)) {
            hi *= 0.5;
            if (hi < kBracketFloor) throw Error(ErrorKind::BracketFailure, "condition holds for arbitrarily small s");
        }
        lo = 0.5 * hi;
    } else {
        lo = hi;
        hi *= 2.0;
        while (!holds(hi)) {
            lo = hi;
            hi *= 2.0;
            if (hi > kBracketCeiling) {
                throw Error(ErrorKind::BracketFailure, "anomaly condition not observed up to s = 1e9");
            }
        }
    }
    while (hi - lo > 1e-6 * hi) {
        const double mid = 0.5 * (lo + hi);
        (holds(mid) ? hi : lo) = mid;
    }

    out.s_star = hi;
    out.holds_at_10x = holds(10.0 * hi);
    out.holds_at_100x = holds(100.0 * hi);
    out.fails_just_below = !holds(hi * (1.0 - 1e-6));

    const double grid_lo = std::log(1e-2);
    const double grid_hi = std::log(std::max(1e4, 1e3 * hi));
    bool previous = false;
    for (int k = 0; k < 64; ++k) {
        const bool now = holds(std::exp(grid_lo + (grid_hi - grid_lo) * k / 63.0));
        if (k > 0 && now != previous) ++out.flips_on_log_grid;
        previous = now;
    }
    out.non_monotone = out.flips_on_log_grid > 1;
    return out;
}

Matrix s_matrix(const Matrix& e, const Matrix& pi, double s) {
    require_pair(e, pi);
    const double p_d = dephasing_probability(s);
    return (1.0 - p_d) * pi + p_d * e_d_matrix(e, pi);
}

// ---------------------------------------------------------------------------

std::vector<double> OntologicalModel::preparation(const DensityMatrix& rho) const {
    if (rho.dim() != dim) throw Error(ErrorKind::DimensionMismatch, "state and model dimensions differ");
    std::vector<double> weights(dim);
    for (std::size_t l = 0; l < dim; ++l) {
        const auto v = labels.col(static_cast<Eigen::Index>(l));
        weights[l] = v.dot(rho.matrix() * v).real();
    }
    return weights;
}

OntologicalModel build_tpm_model(const ProtocolSpec& p) {
    if (p.h_initial().degenerate()) {
        throw Error(ErrorKind::DegenerateSpectrum, "ontic energy labels need a non-degenerate initial Hamiltonian");
    }
    OntologicalModel m;
    m.dim = p.dim();
    m.labels = p.h_initial().eigenvectors();
    m.unitary = p.unitary();
    m.final_basis = p.h_final().eigenvectors();

    const auto povm = tpm_povm(p);
    m.response.resize(static_cast<Eigen::Index>(povm.size()), static_cast<Eigen::Index>(m.dim));
    for (std::size_t row = 0; row < povm.size(); ++row) {
        const auto& el = povm[row];
        WorkPoint pt;
        pt.i = el.i;
        pt.j = el.j;
        pt.w = p.h_final().energies()[el.j] - p.h_initial().energies()[el.i];
        pt.pairs = {{el.i, el.j}};
        m.outcomes.push_back(pt);
        for (std::size_t l = 0; l < m.dim; ++l) {
            const auto v = m.labels.col(static_cast<Eigen::Index>(l));
            m.response(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(l)) = v.dot(el.matrix * v).real();
        }
    }
    return m;
}

ModelCheck verify_model(const OntologicalModel& m, const DensityMatrix& rho, const ProtocolSpec& p) {
    if (m.dim != p.dim() || max_abs_entry(m.labels - p.h_initial().eigenvectors()) > 1e-12 ||
        max_abs_entry(m.unitary - p.unitary()) > 1e-12 ||
        max_abs_entry(m.final_basis - p.h_final().eigenvectors()) > 1e-12) {
        throw Error(ErrorKind::ProtocolMismatch, "model was built from a different protocol");
    }
    const std::vector<double> prep = m.preparation(rho);
    const auto povm = tpm_povm(p);
    ModelCheck c;
    for (std::size_t row = 0; row < povm.size(); ++row) {
        double model = 0.0;
        for (std::size_t l = 0; l < m.dim; ++l) {
            model += prep[l] * m.response(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(l));
        }
        const double born = trace_product(povm[row].matrix, rho.matrix()).real();
        c.max_deviation = std::max(c.max_deviation, std::abs(model - born));
    }
    c.passed = c.max_deviation <= 1e-12;
    return c;
}

NegativeState find_negative_state(const Matrix& e, const Matrix& pi) {
    require_pair(e, pi);
    const Matrix symmetric = 0.5 * (e * pi + pi * e);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (symmetric + symmetric.adjoint()));
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::ConvergenceFailure, "Hermitian eigendecomposition did not converge");
    }
    Vector ground = solver.eigenvectors().col(0);
    return NegativeState{DensityMatrix::pure(ground), ground, solver.eigenvalues()(0)};
}

// ---------------------------------------------------------------------------

namespace {

Matrix hermitian_from_params(const gsl_vector* x, Eigen::Index d) {
    Matrix k = Matrix::Zero(d, d);
    std::size_t idx = 0;
    for (Eigen::Index r = 0; r < d; ++r) k(r, r) = gsl_vector_get(x, idx++);
    for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = r + 1; c < d; ++c) {
            const double re = gsl_vector_get(x, idx++);
            const double im = gsl_vector_get(x, idx++);
            k(r, c) = Complex(re, im);
            k(c, r) = Complex(re, -im);
        }
    }
    return k;
}

struct SearchContext {
    Eigen::Index dim;
    Matrix level;
    Vector final_level;
    std::size_t calls = 0;
};

struct GslVectorFree {
    void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
struct GslMinimizerFree {
    void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};
using GslVector = std::unique_ptr<gsl_vector, GslVectorFree>;
using GslMinimizer = std::unique_ptr<gsl_multimin_fminimizer, GslMinimizerFree>;

Matrix drive_for(const gsl_vector* x, const SearchContext& ctx) {
    return hermitian_exponential(hermitian_from_params(x, ctx.dim), 1.0);
}

double search_objective(const gsl_vector* x, void* params) {
    auto& ctx = *static_cast<SearchContext*>(params);
    ++ctx.calls;
    const Matrix u = drive_for(x, ctx);
    const Vector back = u.adjoint() * ctx.final_level;
    return find_negative_state(ctx.level, back * back.adjoint()).witness_min;
}

}  // namespace

ProtocolSearchResult search_witness_protocol(const HamiltonianSpec& h0, const HamiltonianSpec& ht, std::size_t i,
                                             std::size_t j, std::uint64_t seed, std::size_t max_evaluations) {
    if (h0.dim() != ht.dim()) throw Error(ErrorKind::DimensionMismatch, "Hamiltonian dimensions differ");
    if (i >= h0.dim() || j >= ht.dim()) throw Error(ErrorKind::InvalidArgument, "level index out of range");

    const auto d = static_cast<Eigen::Index>(h0.dim());
    SearchContext ctx{d, h0.level_projector(i), ht.eigenvector(j)};
    const auto n = static_cast<std::size_t>(d * d);

    random::Engine rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    GslVector start(gsl_vector_alloc(n));
    GslVector step(gsl_vector_alloc(n));
    for (std::size_t k = 0; k < n; ++k) gsl_vector_set(start.get(), k, normal(rng));
    gsl_vector_set_all(step.get(), 0.5);

    gsl_multimin_function fn{&search_objective, n, &ctx};
    GslMinimizer solver(gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n));
    gsl_multimin_fminimizer_set(solver.get(), &fn, start.get(), step.get());

    ProtocolSearchResult out;
    int status = GSL_CONTINUE;
    while (status == GSL_CONTINUE && ctx.calls < max_evaluations) {
        if (gsl_multimin_fminimizer_iterate(solver.get()) != GSL_SUCCESS) break;
        status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(solver.get()), 1e-8);
    }
    out.evaluations = ctx.calls;
    out.converged = status == GSL_SUCCESS;
    out.unitary = drive_for(gsl_multimin_fminimizer_x(solver.get()), ctx);
    out.witness_min = gsl_multimin_fminimizer_minimum(solver.get());
    return out;
}

}  // namespace workfluct
