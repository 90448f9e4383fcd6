// Copyright 2026 The iontomo authors
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
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "iontomo/experiments.hpp"
#include "iontomo/simulator.hpp"
#include "iontomo/stats.hpp"

namespace py = pybind11;
using namespace iontomo;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Fuzzy-measurement tomography of trapped-ion qubit registers from "
              "fluorescence photon counts";

    py::class_<Rng>(m, "Rng")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def_property_readonly("seed", &Rng::seed)
        .def("child", &Rng::child, py::arg("index"))
        .def("uniform", &Rng::uniform)
        .def("normal", &Rng::normal)
        .def("poisson", &Rng::poisson, py::arg("mean"))
        .def("exponential", &Rng::exponential, py::arg("rate"));

    py::class_<ReadoutPhysics>(m, "ReadoutPhysics")
        .def(py::init<double, double, double, double>(), py::arg("exposure"),
             py::arg("decay_rate"), py::arg("bright_rate"), py::arg("dark_rate"))
        .def_readonly("exposure", &ReadoutPhysics::exposure)
        .def_readonly("decay_rate", &ReadoutPhysics::decay_rate)
        .def_readonly("bright_rate", &ReadoutPhysics::bright_rate)
        .def_readonly("dark_rate", &ReadoutPhysics::dark_rate);

    py::class_<CountDistribution>(m, "CountDistribution")
        .def_readonly("pmf", &CountDistribution::pmf)
        .def_readonly("tail_mass", &CountDistribution::tail_mass)
        .def_property_readonly("max_count", &CountDistribution::max_count);

    m.def("regularized_lower_gamma", &regularized_lower_gamma, py::arg("x"), py::arg("a"));
    m.def("bright_pmf", &bright_pmf, py::arg("phys"), py::arg("k"));
    m.def("decay_pmf", &decay_pmf, py::arg("phys"), py::arg("k"));
    m.def("dark_pmf", &dark_pmf, py::arg("phys"), py::arg("k"));
    m.def("truncate", &iontomo::truncate, py::arg("pmf"), py::arg("tail_tol"),
          py::arg("hard_cap") = 10000);
    m.def("truncate_at", &truncate_at, py::arg("pmf"), py::arg("max_count"));
    m.def("truncated_bright", &truncated_bright, py::arg("phys"), py::arg("tail_tol") = 1e-12);
    m.def("truncated_dark", &truncated_dark, py::arg("phys"), py::arg("tail_tol") = 1e-12);
    m.def("truncated_decay", &truncated_decay, py::arg("phys"), py::arg("tail_tol") = 1e-12);
    m.def(
        "readout_errors",
        [](const ReadoutPhysics& phys, int k0) {
            const ReadoutErrors e = readout_errors(phys, k0);
            return py::make_tuple(e.eps10, e.eps01);
        },
        py::arg("phys"), py::arg("k0"));
    m.def("optimal_threshold", &optimal_threshold, py::arg("phys"),
          py::arg("tail_tol") = 1e-12);

    py::class_<PureState>(m, "PureState")
        .def(py::init<CVector>(), py::arg("amplitudes"))
        .def_readonly("amplitudes", &PureState::amplitudes)
        .def_property_readonly("dim", &PureState::dim);

    py::class_<DensityMatrix>(m, "DensityMatrix")
        .def(py::init<CMatrix>(), py::arg("matrix"))
        .def_static("from_pure", &DensityMatrix::from_pure, py::arg("state"))
        .def_readonly("matrix", &DensityMatrix::matrix)
        .def_property_readonly("dim", &DensityMatrix::dim);

    py::class_<BasisUnitary>(m, "BasisUnitary")
        .def(py::init<CMatrix, std::string>(), py::arg("matrix"), py::arg("label"))
        .def_readonly("matrix", &BasisUnitary::matrix)
        .def_readonly("label", &BasisUnitary::label);

    py::class_<MeasurementProtocol>(m, "MeasurementProtocol")
        .def_readonly("bases", &MeasurementProtocol::bases)
        .def_readonly("shot_fractions", &MeasurementProtocol::shot_fractions)
        .def_property_readonly("basis_count", &MeasurementProtocol::basis_count);

    m.def("haar_random_pure", &haar_random_pure, py::arg("dim"), py::arg("rng"));
    m.def("fidelity", py::overload_cast<const PureState&, const PureState&>(&fidelity));
    m.def("fidelity", py::overload_cast<const PureState&, const DensityMatrix&>(&fidelity));
    m.def("fidelity", py::overload_cast<const DensityMatrix&, const PureState&>(&fidelity));
    m.def("fidelity", py::overload_cast<const DensityMatrix&, const DensityMatrix&>(&fidelity));
    m.def("pauli_bases", &pauli_bases, py::arg("n_qubits"));
    m.def("allocate_shots", &allocate_shots, py::arg("total"), py::arg("basis_count"));

    py::enum_<MeasurementModel>(m, "MeasurementModel")
        .value("ideal_projector", MeasurementModel::ideal_projector)
        .value("threshold", MeasurementModel::threshold)
        .value("photon_count", MeasurementModel::photon_count);

    py::class_<Effect>(m, "Effect")
        .def_readonly("matrix", &Effect::matrix)
        .def_readonly("label", &Effect::label);

    py::class_<Povm>(m, "Povm")
        .def_readonly("effects", &Povm::effects)
        .def_readonly("dim", &Povm::dim)
        .def_readonly("model", &Povm::model)
        .def_property_readonly("size", &Povm::size);

    m.def("threshold_povm", &threshold_povm, py::arg("eps10"), py::arg("eps01"));
    m.def("photon_count_povm", &photon_count_povm, py::arg("bright"), py::arg("dark"));
    m.def("ideal_projector_povm", &ideal_projector_povm);
    m.def("tensor_povm", &tensor_povm, py::arg("parts"));
    m.def("rotate_povm", &rotate_povm, py::arg("basis"), py::arg("povm"));
    m.def("model_povm", &model_povm, py::arg("model"), py::arg("phys"), py::arg("k0") = 0,
          py::arg("tail_tol") = 1e-12);
    m.def("register_povm", &register_povm, py::arg("model"), py::arg("phys"), py::arg("k0"),
          py::arg("tail_tol"), py::arg("n_qubits"));

    py::class_<BasisPovm>(m, "BasisPovm")
        .def_readonly("basis", &BasisPovm::basis)
        .def_readonly("povm", &BasisPovm::povm);
    m.def("protocol_povms", &protocol_povms, py::arg("protocol"), py::arg("model"));

    py::class_<BasisRecord>(m, "BasisRecord")
        .def_readonly("basis_label", &BasisRecord::basis_label)
        .def_readonly("shots", &BasisRecord::shots)
        .def_readonly("counts", &BasisRecord::counts);

    py::class_<Dataset>(m, "Dataset")
        .def_readonly("records", &Dataset::records)
        .def_readonly("model", &Dataset::model)
        .def_readonly("seed", &Dataset::seed)
        .def_readonly("total_shots", &Dataset::total_shots)
        .def_readonly("threshold_k0", &Dataset::threshold_k0);

    m.def("outcome_probabilities", &outcome_probabilities, py::arg("state"), py::arg("povm"));
    m.def("sample_multinomial", &sample_multinomial, py::arg("probs"), py::arg("shots"),
          py::arg("rng"));
    m.def("simulate_physical", &simulate_physical, py::arg("state"), py::arg("basis"),
          py::arg("phys"), py::arg("shots"), py::arg("fold_max_count"), py::arg("rng"));
    m.def("run_experiment", &run_experiment, py::arg("state"), py::arg("protocol"),
          py::arg("phys"), py::arg("total_shots"), py::arg("model"), py::arg("k0"),
          py::arg("tail_tol"), py::arg("rng"));
    m.def("reduce_to_threshold", &reduce_to_threshold, py::arg("dataset"), py::arg("k0"));

    py::class_<MleOptions>(m, "MleOptions")
        .def(py::init<>())
        .def_readwrite("tol", &MleOptions::tol)
        .def_readwrite("max_iter", &MleOptions::max_iter)
        .def_readwrite("rank", &MleOptions::rank);

    py::class_<ReconstructionResult>(m, "ReconstructionResult")
        .def_readonly("estimate", &ReconstructionResult::estimate)
        .def_readonly("log_likelihood", &ReconstructionResult::log_likelihood)
        .def_readonly("iterations", &ReconstructionResult::iterations)
        .def_readonly("converged", &ReconstructionResult::converged)
        .def_readonly("rank_deficient", &ReconstructionResult::rank_deficient)
        .def_readonly("loglik_trace", &ReconstructionResult::loglik_trace)
        .def_readonly("fidelity", &ReconstructionResult::fidelity);

    m.def("log_likelihood", &log_likelihood, py::arg("dataset"), py::arg("povms"),
          py::arg("state"));
    m.def(
        "reconstruct",
        [](const Dataset& dataset, const std::vector<BasisPovm>& povms,
           const MleOptions& options, const PureState* truth) {
            return reconstruct(dataset, povms, options, truth);
        },
        py::arg("dataset"), py::arg("povms"), py::arg("options") = MleOptions{},
        py::arg("truth") = nullptr);
    m.def("invert_binary_response", &invert_binary_response, py::arg("p0_distorted"),
          py::arg("eps10"), py::arg("eps01"));

    py::class_<FisherResult>(m, "FisherResult")
        .def_readonly("matrix", &FisherResult::matrix)
        .def_readonly("skipped", &FisherResult::skipped);
    m.def("fisher_information", &fisher_information, py::arg("state"), py::arg("povms"),
          py::arg("shots_per_basis"));

    py::class_<LossSpectrum>(m, "LossSpectrum")
        .def_readonly("d", &LossSpectrum::d)
        .def_readonly("nu", &LossSpectrum::nu)
        .def_readonly("shots", &LossSpectrum::shots)
        .def("total", &LossSpectrum::total);
    m.def("loss_spectrum", &loss_spectrum, py::arg("information"), py::arg("state"),
          py::arg("shots"));
    m.def("mean_loss", &mean_loss, py::arg("spectrum"));
    m.def("char_function", &char_function, py::arg("spectrum"), py::arg("t"));

    py::class_<PdfOptions>(m, "PdfOptions")
        .def(py::init<>())
        .def_readwrite("range_multiplier", &PdfOptions::range_multiplier)
        .def_readwrite("min_points", &PdfOptions::min_points)
        .def_readwrite("max_points", &PdfOptions::max_points)
        .def_readwrite("char_cutoff", &PdfOptions::char_cutoff)
        .def_readwrite("max_terms", &PdfOptions::max_terms);

    py::class_<LossDistribution>(m, "LossDistribution")
        .def_readonly("grid", &LossDistribution::grid)
        .def_readonly("density", &LossDistribution::density)
        .def_readonly("cell_width", &LossDistribution::cell_width)
        .def_readonly("mass", &LossDistribution::mass)
        .def_readonly("mean", &LossDistribution::mean)
        .def("cdf", &LossDistribution::cdf, py::arg("x"));
    m.def("loss_pdf", &loss_pdf, py::arg("spectrum"), py::arg("options") = PdfOptions{});

    m.def(
        "ks_test",
        [](std::vector<double> sample, const std::function<double(double)>& cdf) {
            const KsResult result = ks_test(std::move(sample), cdf);
            return py::make_tuple(result.statistic, result.p_value);
        },
        py::arg("sample"), py::arg("cdf"));
}
