// SPDX-License-Identifier: Apache-2.0
//
// rislocate: RIS-aided mmWave localization simulator and sparse recovery toolkit
// Copyright (C) 2026 The rislocate authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "rislocate/config.hpp"
#include "rislocate/errors.hpp"
#include "rislocate/experiments.hpp"
#include "rislocate/report.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

namespace py = pybind11;
using namespace rislocate;

namespace {

py::dict row_dict(const ResultRow& r) {
    py::dict d;
    d["sweep_variable"] = std::string(sweep_variable_name(r.variable));
    if (r.position)
        d["sweep_value"] = py::make_tuple(r.position->x(), r.position->y());
    else
        d["sweep_value"] = r.sweep_value;
    d["solver"] = std::string(solver_name(r.solver));
    d["metric"] = std::string(metric_name(r.metric));
    d["value"] = r.value;
    d["n_trials"] = r.n_trials;
    d["n_failed"] = r.n_failed;
    return d;
}

std::string results_csv(const ExperimentResult& r) {
    std::ostringstream out;
    write_results_csv(out, r);
    return out.str();
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Two-stage RIS-assisted mmWave localization simulator";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    auto invalid = py::register_exception<InvalidArgument>(m, "InvalidArgument", error.ptr());
    py::register_exception<InvalidPathError>(m, "InvalidPathError", invalid.ptr());
    py::register_exception<InvalidDelayError>(m, "InvalidDelayError", invalid.ptr());
    py::register_exception<InvalidRisConfigError>(m, "InvalidRisConfigError", invalid.ptr());
    py::register_exception<ShapeError>(m, "ShapeError", invalid.ptr());
    py::register_exception<SpatialFrequencyOverflowError>(m, "SpatialFrequencyOverflowError", error.ptr());
    py::register_exception<GridAngleError>(m, "GridAngleError", error.ptr());
    py::register_exception<ResidualCollapseError>(m, "ResidualCollapseError", error.ptr());
    py::register_exception<IllPosedError>(m, "IllPosedError", error.ptr());
    py::register_exception<AmbiguityError>(m, "AmbiguityError", error.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", error.ptr());

    m.attr("SPEED_OF_LIGHT") = kSpeedOfLight;

    py::enum_<Segment>(m, "Segment").value("BS_RIS", Segment::BsRis).value("RIS_UE", Segment::RisUe);
    py::enum_<SolverKind>(m, "Solver")
        .value("TMSBL", SolverKind::Tmsbl)
        .value("GSBL", SolverKind::Gsbl)
        .value("SBL", SolverKind::Sbl)
        .value("OMP", SolverKind::Omp)
        .value("AMP", SolverKind::Amp);
    py::enum_<Algorithm>(m, "Algorithm")
        .value("DCS_SOMP", Algorithm::DcsSomp)
        .value("SBL", Algorithm::Sbl)
        .value("GSBL", Algorithm::Gsbl)
        .value("TMSBL", Algorithm::Tmsbl)
        .value("AMP", Algorithm::Amp);
    py::enum_<SweepVariable>(m, "SweepVariable")
        .value("SNR_DB", SweepVariable::SnrDb)
        .value("N_BLOCKS", SweepVariable::NBlocks)
        .value("N_ELEMENTS", SweepVariable::NElements)
        .value("RIS_POSITION", SweepVariable::RisPosition);

    py::class_<Scene>(m, "Scene")
        .def(py::init<>())
        .def_readwrite("bs", &Scene::bs)
        .def_readwrite("ris", &Scene::ris)
        .def_readwrite("ue", &Scene::ue)
        .def_readwrite("scatterers_br", &Scene::scatterers_br)
        .def_readwrite("scatterers_rm", &Scene::scatterers_rm)
        .def("validate", &Scene::validate);

    py::class_<ArrayConfig>(m, "ArrayConfig")
        .def(py::init<>())
        .def_readwrite("n_bs", &ArrayConfig::n_bs)
        .def_readwrite("n_ue", &ArrayConfig::n_ue)
        .def_readwrite("n_ris", &ArrayConfig::n_ris)
        .def_readwrite("spacing", &ArrayConfig::spacing);

    py::class_<WaveformConfig>(m, "WaveformConfig")
        .def(py::init<>())
        .def_readwrite("carrier_hz", &WaveformConfig::carrier_hz)
        .def_readwrite("bandwidth_hz", &WaveformConfig::bandwidth_hz)
        .def_readwrite("n_subcarriers", &WaveformConfig::n_subcarriers)
        .def_readwrite("n_blocks", &WaveformConfig::n_blocks)
        .def_readwrite("n_stage1_symbols", &WaveformConfig::n_stage1_symbols)
        .def_readwrite("transmit_energy", &WaveformConfig::transmit_energy)
        .def_readwrite("noise_variance", &WaveformConfig::noise_variance)
        .def_readwrite("reflection_loss_db", &WaveformConfig::reflection_loss_db)
        .def_property_readonly("wavelength", &WaveformConfig::wavelength)
        .def("validate", &WaveformConfig::validate);

    py::class_<PathGeometry>(m, "PathGeometry")
        .def_readonly("segment", &PathGeometry::segment)
        .def_readonly("path_index", &PathGeometry::path_index)
        .def_readonly("distance", &PathGeometry::distance)
        .def_readonly("toa", &PathGeometry::toa)
        .def_readonly("departure_angle", &PathGeometry::departure_angle)
        .def_readonly("arrival_angle", &PathGeometry::arrival_angle);

    m.def("path_distance", &path_distance, py::arg("scene"), py::arg("segment"), py::arg("path_index"));
    m.def(
        "path_angles",
        [](const Scene& s, Segment seg, int idx) {
            const auto a = path_angles(s, seg, idx);
            return py::make_tuple(a.departure, a.arrival);
        },
        py::arg("scene"), py::arg("segment"), py::arg("path_index"));
    m.def("path_geometry", &path_geometry, py::arg("scene"), py::arg("segment"), py::arg("path_index"));
    m.def("recover_position", &recover_position, py::arg("ris_position"), py::arg("aor"), py::arg("toa_rm"));

    m.def("steering_vector", &steering_vector, py::arg("n_elements"), py::arg("angle"), py::arg("spacing") = 0.5);
    m.def("path_loss", &path_loss, py::arg("distance"), py::arg("is_los"), py::arg("reflection_loss_db"),
          py::arg("wavelength"));

    py::class_<DftDictionary>(m, "DftDictionary")
        .def_readonly("n", &DftDictionary::n)
        .def_readonly("grid", &DftDictionary::grid)
        .def_readonly("matrix", &DftDictionary::matrix)
        .def("angle", &DftDictionary::angle, py::arg("l"), py::arg("spacing") = 0.5);
    m.def("dft_dictionary", &dft_dictionary, py::arg("n"));
    m.def("grid_to_angle", &grid_to_angle, py::arg("index"), py::arg("n"), py::arg("spacing") = 0.5);

    py::class_<SparseEstimate>(m, "SparseEstimate")
        .def_readonly("channel_matrix", &SparseEstimate::channel_matrix)
        .def_readonly("hyperparameters", &SparseEstimate::hyperparameters)
        .def_readonly("correlation", &SparseEstimate::correlation)
        .def_readonly("iterations_used", &SparseEstimate::iterations_used)
        .def_readonly("converged", &SparseEstimate::converged)
        .def_readonly("residual_history", &SparseEstimate::residual_history);

    const auto problem = [](const CMat& y, const CMat& psi, const RVec& noise, int max_iterations, double tol) {
        MmvProblem p;
        p.observations = y;
        p.sensing = psi;
        p.noise_cov_diag = noise;
        p.max_iterations = max_iterations;
        p.convergence_tol = tol;
        return p;
    };
    m.def(
        "tmsbl",
        [problem](const CMat& y, const CMat& psi, const RVec& noise, int k, double tol) {
            return tmsbl(problem(y, psi, noise, k, tol));
        },
        py::arg("observations"), py::arg("sensing"), py::arg("noise_cov_diag"), py::arg("max_iterations") = 100,
        py::arg("tolerance") = 1e-6, py::call_guard<py::gil_scoped_release>());
    m.def(
        "gsbl",
        [problem](const CMat& y, const CMat& psi, const RVec& noise, int k, double tol) {
            return gsbl(problem(y, psi, noise, k, tol));
        },
        py::arg("observations"), py::arg("sensing"), py::arg("noise_cov_diag"), py::arg("max_iterations") = 100,
        py::arg("tolerance") = 1e-6, py::call_guard<py::gil_scoped_release>());
    m.def(
        "amp",
        [problem](const CMat& y, const CMat& psi, const RVec& noise) {
            return amp_mmv(problem(y, psi, noise, 100, 1e-6));
        },
        py::arg("observations"), py::arg("sensing"), py::arg("noise_cov_diag"));
    m.def(
        "omp",
        [](const CVec& y, const CMat& a, int n_atoms) {
            const auto r = omp(y, a, n_atoms);
            return py::make_tuple(r.indices, r.coefficients);
        },
        py::arg("y"), py::arg("a"), py::arg("n_atoms"));
    m.def("flop_estimate", &flop_estimate, py::arg("algorithm"), py::arg("n_ris"), py::arg("n_subcarriers"),
          py::arg("n_blocks"));

    m.def(
        "complexity_report",
        [](std::uint64_t n_ris, std::uint64_t n_sub, std::uint64_t n_blocks) {
            py::list out;
            for (const auto& r : complexity_report(n_ris, n_sub, n_blocks)) {
                py::dict d;
                d["algorithm"] = std::string(algorithm_name(r.algorithm));
                d["order_estimate"] = r.order_estimate;
                d["note"] = r.note;
                out.append(d);
            }
            return out;
        },
        py::arg("n_ris") = 8, py::arg("n_subcarriers") = 10, py::arg("n_blocks") = 60);

    py::class_<ExperimentResult>(m, "ExperimentResult")
        .def_readonly("seed", &ExperimentResult::seed)
        .def_property_readonly("rows",
                               [](const ExperimentResult& r) {
                                   py::list out;
                                   for (const auto& row : r.rows) out.append(row_dict(row));
                                   return out;
                               })
        .def("to_csv", &results_csv);

    py::class_<RunConfig>(m, "RunConfig")
        .def_readwrite("scene", &RunConfig::scene)
        .def_readwrite("arrays", &RunConfig::arrays)
        .def_readwrite("waveform", &RunConfig::waveform)
        .def_readwrite("snr_db", &RunConfig::snr_db)
        .def_readwrite("solvers", &RunConfig::solvers)
        .def("echo", &echo_config);
    m.def("parse_config_text", &parse_config_text, py::arg("text"));

    m.def(
        "run_sweep",
        [](const RunConfig& config, std::optional<std::uint64_t> seed, std::optional<int> n_trials) {
            config.validate();
            auto spec = config.sweep_spec();
            if (seed) spec.seed = *seed;
            if (n_trials) spec.n_trials = *n_trials;
            py::gil_scoped_release release;
            return run_sweep(spec);
        },
        py::arg("config"), py::arg("seed") = py::none(), py::arg("n_trials") = py::none());

    m.def(
        "localize_once",
        [](const Scene& scene, double snr_db, SolverKind solver, std::uint64_t seed) {
            Scenario s;
            s.scene = scene;
            s.snr_db = snr_db;
            Rng rng = derive_rng(seed, 0);
            const auto trial = prepare_trial(s.scene, s.arrays, s.resolved_waveform(), rng);
            const auto est = solve_trial(trial, solver);
            py::dict d;
            d["position"] = est.position;
            d["aor"] = est.aor;
            d["toa_cascade"] = est.toa_cascade;
            d["toa_ris_ue"] = est.toa_ris_ue;
            d["dominant_row"] = est.dominant_row;
            return d;
        },
        py::arg("scene"), py::arg("snr_db") = 0.0, py::arg("solver") = SolverKind::Tmsbl, py::arg("seed") = 1);
}
