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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "workfluct/contextuality.hpp"
#include "workfluct/errors.hpp"
#include "workfluct/fluctuation.hpp"
#include "workfluct/pointer_sim.hpp"
#include "workfluct/quantum_core.hpp"
#include "workfluct/serialize.hpp"
#include "workfluct/tolerance.hpp"
#include "workfluct/work_stats.hpp"

namespace py = pybind11;
using namespace workfluct;

namespace {

py::object optional_float(const std::optional<double>& v) { return v ? py::cast(*v) : py::none(); }

}  // namespace

PYBIND11_MODULE(_workfluct, m) {
    m.doc() = "Work statistics, fluctuation theorems and weak-value witnesses";

    // Messages are "<Kind>: <detail>" so callers can branch on the kind.
    static py::handle error_type = py::exception<Error>(m, "WorkfluctError", PyExc_ValueError).release();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetString(error_type.ptr(), (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
        }
    });

    m.def("set_strict_mode", &set_strict_mode);
    m.def("strict_mode", &strict_mode);

    py::class_<DensityMatrix>(m, "DensityMatrix")
        .def_static("from_matrix", &validate_density, py::arg("matrix"))
        .def_static("pure", &DensityMatrix::pure, py::arg("psi"))
        .def_static("maximally_mixed", &DensityMatrix::maximally_mixed, py::arg("dim"))
        .def_property_readonly("matrix", &DensityMatrix::matrix)
        .def_property_readonly("dim", &DensityMatrix::dim);

    py::class_<HamiltonianSpec>(m, "Hamiltonian")
        .def_static("diagonal", &HamiltonianSpec::diagonal, py::arg("energies"))
        .def_static("from_eigensystem", &HamiltonianSpec::from_eigensystem, py::arg("energies"),
                    py::arg("eigenvectors"))
        .def_static("from_matrix", &eigh, py::arg("matrix"))
        .def_property_readonly("energies", &HamiltonianSpec::energies)
        .def_property_readonly("eigenvectors", &HamiltonianSpec::eigenvectors)
        .def_property_readonly("matrix", &HamiltonianSpec::matrix)
        .def_property_readonly("degenerate", &HamiltonianSpec::degenerate)
        .def_property_readonly("dim", &HamiltonianSpec::dim);

    py::class_<ThermalConfig>(m, "Thermal")
        .def(py::init([](double beta) { return ThermalConfig::make(beta); }), py::arg("beta"))
        .def_readonly("beta", &ThermalConfig::beta);

    py::class_<ProtocolSpec>(m, "Protocol")
        .def(py::init([](HamiltonianSpec h0, const Matrix& u, HamiltonianSpec ht) {
                 return ProtocolSpec(std::move(h0), UnitarySpec(u), std::move(ht));
             }),
             py::arg("h_initial"), py::arg("unitary"), py::arg("h_final"))
        .def_static(
            "from_schedule",
            [](HamiltonianSpec h0, const std::vector<std::pair<Matrix, double>>& segments, HamiltonianSpec ht) {
                Schedule s;
                for (const auto& [h, dt] : segments) s.segments.push_back(ScheduleSegment{h, dt});
                return ProtocolSpec(std::move(h0), UnitarySpec(std::move(s)), std::move(ht));
            },
            py::arg("h_initial"), py::arg("segments"), py::arg("h_final"))
        .def_property_readonly("h_initial", &ProtocolSpec::h_initial)
        .def_property_readonly("h_final", &ProtocolSpec::h_final)
        .def_property_readonly("unitary", &ProtocolSpec::unitary)
        .def_property_readonly("dim", &ProtocolSpec::dim)
        .def("final_projector", &ProtocolSpec::final_projector, py::arg("j"));

    m.def("gibbs_state", &gibbs_state, py::arg("h"), py::arg("thermal"));
    m.def("dephase", &dephase, py::arg("rho"), py::arg("h"));

    py::class_<WorkPoint>(m, "WorkPoint")
        .def_readonly("w", &WorkPoint::w)
        .def_readonly("i", &WorkPoint::i)
        .def_readonly("j", &WorkPoint::j)
        .def_readonly("value", &WorkPoint::value)
        .def_readonly("pairs", &WorkPoint::pairs)
        .def("__repr__", [](const WorkPoint& p) {
            return "WorkPoint(w=" + io::format_double(p.w) + ", i=" + std::to_string(p.i) +
                   ", j=" + std::to_string(p.j) + ", value=" + io::format_double(p.value) + ")";
        });

    py::class_<WorkDistribution>(m, "WorkDistribution")
        .def_property_readonly("kind", [](const WorkDistribution& d) { return std::string(to_string(d.kind)); })
        .def_property_readonly("s", [](const WorkDistribution& d) { return optional_float(d.s); })
        .def_readonly("aggregated", &WorkDistribution::aggregated)
        .def_readonly("points", &WorkDistribution::points)
        .def("total", &WorkDistribution::total)
        .def("to_json", [](const WorkDistribution& d) { return io::to_json(d).dump(); })
        .def("to_csv", &io::to_csv);

    m.def("tpm_distribution", &tpm_distribution, py::arg("rho"), py::arg("protocol"));
    m.def(
        "weak_distribution",
        [](const DensityMatrix& rho, const ProtocolSpec& p, bool use_stored_basis) {
            return weak_distribution(rho, p, use_stored_basis ? DegeneracyPolicy::UseStoredBasis : DegeneracyPolicy::Reject);
        },
        py::arg("rho"), py::arg("protocol"), py::arg("use_stored_basis") = false);
    m.def(
        "finite_s_distribution",
        [](const DensityMatrix& rho, const ProtocolSpec& p, double s, bool use_stored_basis) {
            return finite_s_distribution(rho, p, s,
                                         use_stored_basis ? DegeneracyPolicy::UseStoredBasis : DegeneracyPolicy::Reject);
        },
        py::arg("rho"), py::arg("protocol"), py::arg("s"), py::arg("use_stored_basis") = false);
    m.def("average_work", &average_work, py::arg("distribution"));
    m.def("merge_by_work", &merge_by_work, py::arg("distribution"), py::arg("merge_tol"));

    py::class_<FtReport>(m, "FtReport")
        .def_readonly("lhs", &FtReport::lhs)
        .def_readonly("rhs", &FtReport::rhs)
        .def_readonly("residual", &FtReport::residual)
        .def_readonly("rel_residual", &FtReport::rel_residual)
        .def_property_readonly("upsilon", [](const FtReport& r) { return optional_float(r.upsilon); })
        .def_readonly("passed", &FtReport::passed)
        .def_readonly("thermal_state", &FtReport::thermal_state);

    m.def("delta_f", &delta_f, py::arg("h_initial"), py::arg("h_final"), py::arg("thermal"));
    m.def("jarzynski_check", &jarzynski_check, py::arg("rho"), py::arg("protocol"), py::arg("thermal"),
          py::arg("tol") = 1e-10);
    m.def("allahverdyan_check", &allahverdyan_check, py::arg("rho"), py::arg("protocol"), py::arg("thermal"),
          py::arg("tol") = 1e-10);
    m.def("upsilon", &upsilon, py::arg("rho"), py::arg("protocol"), py::arg("thermal"));

    py::class_<ContextualityReport>(m, "ContextualityReport")
        .def_readonly("witness", &ContextualityReport::witness)
        .def_readonly("p_pi", &ContextualityReport::p_pi)
        .def_readonly("s", &ContextualityReport::s)
        .def_readonly("p_d", &ContextualityReport::p_d)
        .def_readonly("e_d", &ContextualityReport::e_d)
        .def_readonly("p_minus", &ContextualityReport::p_minus)
        .def_readonly("gap", &ContextualityReport::gap)
        .def_readonly("condition_2c", &ContextualityReport::condition_2c)
        .def_readonly("asymptotic_gap", &ContextualityReport::asymptotic_gap);

    py::class_<NegativeState>(m, "NegativeState")
        .def_property_readonly("rho", [](const NegativeState& n) { return n.rho.matrix(); })
        .def_readonly("state", &NegativeState::state)
        .def_readonly("witness_min", &NegativeState::witness_min);

    m.def("weak_value", &weak_value, py::arg("rho"), py::arg("e"), py::arg("pi"));
    m.def("lemma1_report", &lemma1_report, py::arg("rho"), py::arg("e"), py::arg("pi"), py::arg("s"));
    m.def(
        "s_threshold",
        [](const DensityMatrix& rho, const Matrix& e, const Matrix& pi) { return optional_float(s_threshold(rho, e, pi).s_star); },
        py::arg("rho"), py::arg("e"), py::arg("pi"));
    m.def("s_matrix", &s_matrix, py::arg("e"), py::arg("pi"), py::arg("s"));
    m.def("find_negative_state", &find_negative_state, py::arg("e"), py::arg("pi"));

    m.def(
        "closed_form_pointer_mean",
        [](const DensityMatrix& rho, const Matrix& e, const Matrix& pi, double s) {
            const auto r = pointer::closed_form_pointer_mean(rho, e, pi, s);
            return py::make_tuple(r.q_j, r.mean_x);
        },
        py::arg("rho"), py::arg("e"), py::arg("pi"), py::arg("s"));
    m.def(
        "grid_pointer_mean",
        [](const DensityMatrix& rho, const Matrix& e, const Matrix& pi, double s) {
            const auto r = pointer::postselected_pointer_mean(rho, e, pi, pointer::PointerConfig::defaults(s));
            return py::make_tuple(r.q_j, r.mean_x);
        },
        py::arg("rho"), py::arg("e"), py::arg("pi"), py::arg("s"));
}
