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

#include "workfluct/work_stats.hpp"

#include <algorithm>
#include <cmath>

#include "workfluct/errors.hpp"

namespace workfluct {

ProtocolSpec::ProtocolSpec(HamiltonianSpec h_initial, UnitarySpec drive, HamiltonianSpec h_final)
    : h_initial_(std::move(h_initial)), drive_(std::move(drive)), h_final_(std::move(h_final)) {
    if (h_initial_.dim() != h_final_.dim() || unitary_dim(drive_) != h_initial_.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "protocol Hamiltonians and drive must share one dimension");
    }
    unitary_ = time_ordered_unitary(drive_);
}

Vector ProtocolSpec::backpropagated_final_level(std::size_t j) const {
    return unitary_.adjoint() * h_final_.eigenvector(j);
}

Matrix ProtocolSpec::final_projector(std::size_t j) const {
    const Vector v = backpropagated_final_level(j);
    return v * v.adjoint();
}

double ProtocolSpec::default_merge_tol() const {
    return degeneracy_tolerance(std::max(h_initial_.energy_scale(), h_final_.energy_scale()));
}

const char* to_string(DistributionKind kind) {
    switch (kind) {
        case DistributionKind::Tpm: return "TPM";
        case DistributionKind::Weak: return "WEAK";
        case DistributionKind::FiniteS: return "FINITE_S";
    }
    return "UNKNOWN";
}

double WorkDistribution::total() const {
    double sum = 0.0;
    for (const auto& pt : points) sum += pt.value;
    return sum;
}

namespace {

void require_same_dim(const DensityMatrix& rho, const ProtocolSpec& p) {
    if (rho.dim() != p.dim()) throw Error(ErrorKind::DimensionMismatch, "state and protocol dimensions differ");
}

void apply_policy(const ProtocolSpec& p, DegeneracyPolicy policy, WorkDistribution& out) {
    if (!p.h_initial().degenerate()) return;
    if (policy == DegeneracyPolicy::Reject) {
        throw Error(ErrorKind::DegenerateSpectrum,
                    "initial Hamiltonian is degenerate; rank-one level projectors are undefined");
    }
    out.degenerate_basis = p.h_initial().eigenvectors();
}

// Fills one point per (i, j) using `value(i, level_i, backpropagated_j)`.
template <typename ValueFn>
WorkDistribution tabulate(const ProtocolSpec& p, DistributionKind kind, ValueFn&& value) {
    WorkDistribution out;
    out.kind = kind;
    const std::size_t d = p.dim();
    out.points.reserve(d * d);
    std::vector<Vector> finals;
    finals.reserve(d);
    for (std::size_t j = 0; j < d; ++j) finals.push_back(p.backpropagated_final_level(j));
    for (std::size_t i = 0; i < d; ++i) {
        const Vector level = p.h_initial().eigenvector(i);
        for (std::size_t j = 0; j < d; ++j) {
            WorkPoint pt;
            pt.i = i;
            pt.j = j;
            pt.w = p.h_final().energies()[j] - p.h_initial().energies()[i];
            pt.value = value(level, finals[j]);
            pt.pairs = {{i, j}};
            out.points.push_back(std::move(pt));
        }
    }
    return out;
}

template <typename Item, typename WOf, typename Merge>
void chain_group(std::vector<Item>& items, double merge_tol, WOf w_of, Merge merge) {
    std::stable_sort(items.begin(), items.end(), [&](const Item& a, const Item& b) { return w_of(a) < w_of(b); });
    std::size_t start = 0;
    for (std::size_t k = 1; k <= items.size(); ++k) {
        if (k == items.size() || w_of(items[k]) - w_of(items[k - 1]) > merge_tol) {
            merge(start, k);
            start = k;
        }
    }
}

}  // namespace

WorkSupport work_support(const ProtocolSpec& p, double merge_tol) {
    struct Entry {
        double w;
        std::size_t i, j;
    };
    std::vector<Entry> entries;
    const std::size_t d = p.dim();
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            entries.push_back({p.h_final().energies()[j] - p.h_initial().energies()[i], i, j});
        }
    }
    WorkSupport support;
    chain_group(entries, merge_tol, [](const Entry& e) { return e.w; },
                [&](std::size_t first, std::size_t last) {
                    WorkGroup g;
                    g.w = entries[first].w;
                    for (std::size_t k = first; k < last; ++k) g.pairs.emplace_back(entries[k].i, entries[k].j);
                    support.matching_gaps = support.matching_gaps || g.pairs.size() > 1;
                    support.groups.push_back(std::move(g));
                });
    return support;
}

std::vector<PovmElement> tpm_povm(const ProtocolSpec& p) {
    std::vector<PovmElement> out;
    const std::size_t d = p.dim();
    for (std::size_t i = 0; i < d; ++i) {
        const Matrix level = p.h_initial().level_projector(i);
        const Vector level_vec = p.h_initial().eigenvector(i);
        for (std::size_t j = 0; j < d; ++j) {
            const double transition = std::norm(p.h_final().eigenvector(j).dot(p.unitary() * level_vec));
            out.push_back({transition * level, i, j});
        }
    }
    return out;
}

WorkDistribution tpm_distribution(const DensityMatrix& rho, const ProtocolSpec& p) {
    require_same_dim(rho, p);
    const Matrix& r = rho.matrix();
    return tabulate(p, DistributionKind::Tpm, [&](const Vector& level, const Vector& back) {
        const double population = level.dot(r * level).real();
        return population * std::norm(back.dot(level));
    });
}

WorkDistribution weak_distribution(const DensityMatrix& rho, const ProtocolSpec& p, DegeneracyPolicy policy) {
    require_same_dim(rho, p);
    const Matrix& r = rho.matrix();
    // Re tr(rho |i><i| Pi_j) = Re <i|back><back|rho|i>
    auto out = tabulate(p, DistributionKind::Weak, [&](const Vector& level, const Vector& back) {
        return (level.dot(back) * back.dot(r * level)).real();
    });
    apply_policy(p, policy, out);
    return out;
}

double branch_overlap(double s) {
    if (!std::isfinite(s) || !(s > 0.0)) throw Error(ErrorKind::InvalidArgument, "pointer spread s must be positive");
    return std::exp(-1.0 / (4.0 * s * s));
}

WorkDistribution finite_s_distribution(const DensityMatrix& rho, const ProtocolSpec& p, double s,
                                       DegeneracyPolicy policy) {
    require_same_dim(rho, p);
    const double overlap = branch_overlap(s);
    const Matrix& r = rho.matrix();
    // tr(Pi E rho E) + overlap * Re tr(Pi E rho E^perp), with E = |i><i|, Pi = |b><b|.
    auto out = tabulate(p, DistributionKind::FiniteS, [&](const Vector& level, const Vector& back) {
        const Complex b_i = back.dot(level);
        const double population = level.dot(r * level).real();
        const double diagonal = std::norm(b_i) * population;
        const Complex cross = b_i * (level.dot(r * back) - population * std::conj(b_i));
        return diagonal + overlap * cross.real();
    });
    out.s = s;
    apply_policy(p, policy, out);
    return out;
}

double average_work(const WorkDistribution& d) {
    double sum = 0.0;
    for (const auto& pt : d.points) sum += pt.value * pt.w;
    return sum;
}

WorkDistribution merge_by_work(const WorkDistribution& d, double merge_tol) {
    WorkDistribution out = d;
    out.points.clear();
    out.aggregated = true;
    std::vector<WorkPoint> items = d.points;
    chain_group(items, merge_tol, [](const WorkPoint& pt) { return pt.w; },
                [&](std::size_t first, std::size_t last) {
                    WorkPoint merged = items[first];
                    for (std::size_t k = first + 1; k < last; ++k) {
                        merged.value += items[k].value;
                        merged.pairs.insert(merged.pairs.end(), items[k].pairs.begin(), items[k].pairs.end());
                    }
                    out.points.push_back(std::move(merged));
                });
    return out;
}

}  // namespace workfluct
