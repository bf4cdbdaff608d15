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

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "workfluct/contextuality.hpp"
#include "workfluct/fluctuation.hpp"
#include "workfluct/pointer_sim.hpp"
#include "workfluct/quantum_core.hpp"
#include "workfluct/work_stats.hpp"

// JSON and CSV encodings. Complex numbers are [re, im] pairs; matrices are
// row-major arrays of rows. Malformed input raises Error(ParseError).
namespace workfluct::io {

using json = nlohmann::json;

json to_json(Complex z);
json to_json(const Vector& v);
json to_json(const Matrix& m);
json to_json(const HamiltonianSpec& h);
json to_json(const Schedule& s);
json to_json(const UnitarySpec& u);
json to_json(const WorkDistribution& d);
json to_json(const FtReport& r);
json to_json(const ContextualityReport& r);
json to_json(const ThresholdResult& r);
/// Header object {s, q_j, mean_x}; the density goes to CSV.
json to_json_header(const pointer::PointerOracleResult& r, double s);

Complex complex_from_json(const json& j);
Vector vector_from_json(const json& j);
/// Accepts nested rows or a flat row-major list of d*d entries.
Matrix matrix_from_json(const json& j);
/// {"energies": [...], "eigenvectors": [[...], ...]} (eigenvectors optional,
/// defaulting to the computational basis) or {"matrix": M}.
HamiltonianSpec hamiltonian_from_json(const json& j);
/// {"unitary": M}, {"segments": [{"h": M, "dt": t}, ...]} or a bare matrix.
UnitarySpec unitary_from_json(const json& j);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

/// Rows "w,i,j,value" with that header.
std::string to_csv(const WorkDistribution& d);
/// Rows "x,density" with that header.
std::string density_csv(const pointer::PointerOracleResult& r);

}  // namespace workfluct::io
