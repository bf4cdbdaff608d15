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

#include "workfluct/serialize.hpp"

#include <charconv>
#include <cmath>

#include "workfluct/errors.hpp"

namespace workfluct::io {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

double number(const json& j, const char* what) {
    if (!j.is_number()) parse_error(std::string(what) + " must be a number");
    return j.get<double>();
}

}  // namespace

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(to_json(v(k)));
    return out;
}

json to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

json to_json(const HamiltonianSpec& h) {
    json vectors = json::array();
    for (std::size_t k = 0; k < h.dim(); ++k) vectors.push_back(to_json(h.eigenvector(k)));
    return json{{"energies", h.energies()}, {"eigenvectors", std::move(vectors)}};
}

json to_json(const Schedule& s) {
    json segs = json::array();
    for (const auto& seg : s.segments) segs.push_back(json{{"h", to_json(seg.hamiltonian)}, {"dt", seg.duration}});
    return json{{"segments", std::move(segs)}};
}

json to_json(const UnitarySpec& u) {
    if (const auto* m = std::get_if<Matrix>(&u)) return json{{"unitary", to_json(*m)}};
    return to_json(std::get<Schedule>(u));
}

json to_json(const WorkDistribution& d) {
    json points = json::array();
    for (const auto& pt : d.points) {
        json p{{"w", pt.w}, {"i", pt.i}, {"j", pt.j}, {"value", pt.value}};
        if (pt.pairs.size() > 1) {
            json pairs = json::array();
            for (const auto& [i, j] : pt.pairs) pairs.push_back(json::array({i, j}));
            p["pairs"] = std::move(pairs);
        }
        points.push_back(std::move(p));
    }
    json out{{"kind", to_string(d.kind)}, {"points", std::move(points)}, {"aggregated", d.aggregated}};
    if (d.s) out["s"] = *d.s;
    if (d.degenerate_basis) out["degenerate_basis"] = to_json(*d.degenerate_basis);
    return out;
}

json to_json(const FtReport& r) {
    json out{{"lhs", r.lhs},
             {"rhs", r.rhs},
             {"residual", r.residual},
             {"abs_residual", r.abs_residual},
             {"rel_residual", r.rel_residual},
             {"passed", r.passed},
             {"thermal_state", r.thermal_state}};
    out["upsilon"] = r.upsilon ? json(*r.upsilon) : json(nullptr);
    if (r.seed) out["seed"] = *r.seed;
    return out;
}

json to_json(const ContextualityReport& r) {
    return json{{"witness", r.witness},
                {"p_pi", r.p_pi},
                {"s", r.s},
                {"p_d", r.p_d},
                {"e_d", to_json(r.e_d)},
                {"p_minus", r.p_minus},
                {"gap", r.gap},
                {"condition_2c", r.condition_2c},
                {"asymptotic_gap", r.asymptotic_gap}};
}

json to_json(const ThresholdResult& r) {
    json out{{"witness", r.witness},
             {"holds_at_10x", r.holds_at_10x},
             {"holds_at_100x", r.holds_at_100x},
             {"fails_just_below", r.fails_just_below},
             {"flips_on_log_grid", r.flips_on_log_grid},
             {"non_monotone", r.non_monotone}};
    out["s_star"] = r.s_star ? json(*r.s_star) : json(nullptr);
    return out;
}

json to_json_header(const pointer::PointerOracleResult& r, double s) {
    return json{{"s", s}, {"q_j", r.q_j}, {"mean_x", r.mean_x}};
}

// ---------------------------------------------------------------------------

Complex complex_from_json(const json& j) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (!j.is_array() || j.size() != 2) parse_error("complex number must be [re, im]");
    return Complex(number(j[0], "real part"), number(j[1], "imaginary part"));
}

Vector vector_from_json(const json& j) {
    if (!j.is_array() || j.empty()) parse_error("vector must be a non-empty array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t k = 0; k < j.size(); ++k) v(static_cast<Eigen::Index>(k)) = complex_from_json(j[k]);
    return v;
}

Matrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) parse_error("matrix must be a non-empty array");
    const std::size_t rows = j.size();
    const bool complex_rows = j[0].is_array() && !j[0].empty() && j[0][0].is_array();
    // A real-valued square matrix written as rows of plain numbers.
    bool real_rows = !complex_rows;
    for (const auto& row : j) {
        real_rows = real_rows && row.is_array() && row.size() == rows && !row.empty() && row[0].is_number();
    }
    if (complex_rows || real_rows) {
        const std::size_t cols = j[0].size();
        Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        for (std::size_t r = 0; r < rows; ++r) {
            if (!j[r].is_array() || j[r].size() != cols) parse_error("matrix rows must have equal length");
            for (std::size_t c = 0; c < cols; ++c) {
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from_json(j[r][c]);
            }
        }
        return m;
    }
    const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(rows))));
    if (n * n != rows) parse_error("flat matrix length must be a perfect square");
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < rows; ++k) {
        m(static_cast<Eigen::Index>(k / n), static_cast<Eigen::Index>(k % n)) = complex_from_json(j[k]);
    }
    return m;
}

HamiltonianSpec hamiltonian_from_json(const json& j) {
    if (!j.is_object()) parse_error("Hamiltonian must be an object");
    if (j.contains("matrix")) return eigh(matrix_from_json(j.at("matrix")));
    if (!j.contains("energies") || !j.at("energies").is_array()) parse_error("Hamiltonian needs \"energies\"");
    std::vector<double> energies;
    for (const auto& e : j.at("energies")) energies.push_back(number(e, "energy"));
    if (!j.contains("eigenvectors")) return HamiltonianSpec::diagonal(energies);
    const json& vecs = j.at("eigenvectors");
    if (!vecs.is_array() || vecs.size() != energies.size()) parse_error("need one eigenvector per energy");
    const auto n = static_cast<Eigen::Index>(energies.size());
    Matrix columns(n, n);
    for (std::size_t k = 0; k < vecs.size(); ++k) {
        const Vector v = vector_from_json(vecs[k]);
        if (v.size() != n) parse_error("eigenvector length must equal the number of energies");
        columns.col(static_cast<Eigen::Index>(k)) = v;
    }
    return HamiltonianSpec::from_eigensystem(std::move(energies), columns);
}

UnitarySpec unitary_from_json(const json& j) {
    if (j.is_array()) return UnitarySpec(matrix_from_json(j));
    if (!j.is_object()) parse_error("drive must be an object or a matrix");
    if (j.contains("unitary")) return UnitarySpec(matrix_from_json(j.at("unitary")));
    if (!j.contains("segments") || !j.at("segments").is_array()) parse_error("drive needs \"unitary\" or \"segments\"");
    Schedule s;
    for (const auto& seg : j.at("segments")) {
        if (!seg.is_object() || !seg.contains("h") || !seg.contains("dt")) parse_error("segment needs \"h\" and \"dt\"");
        s.segments.push_back({matrix_from_json(seg.at("h")), number(seg.at("dt"), "dt")});
    }
    return UnitarySpec(std::move(s));
}

// ---------------------------------------------------------------------------

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string to_csv(const WorkDistribution& d) {
    std::string out = "w,i,j,value\n";
    for (const auto& pt : d.points) {
        out += format_double(pt.w) + "," + std::to_string(pt.i) + "," + std::to_string(pt.j) + "," +
               format_double(pt.value) + "\n";
    }
    return out;
}

std::string density_csv(const pointer::PointerOracleResult& r) {
    std::string out = "x,density\n";
    for (const auto& [x, density] : r.per_x_density) out += format_double(x) + "," + format_double(density) + "\n";
    return out;
}

}  // namespace workfluct::io
