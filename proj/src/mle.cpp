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

#include "iontomo/mle.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

namespace iontomo {

namespace {

constexpr double kProbFloor = 1e-300;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct ResolvedOutcome {
    const CMatrix* effect;
    double count;
};

// Join observed outcomes to effect matrices by basis label and outcome label.
std::vector<ResolvedOutcome> resolve_outcomes(const Dataset& dataset,
                                              const std::vector<BasisPovm>& povms) {
    std::map<std::string, const Povm*> by_basis;
    for (const auto& entry : povms) {
        by_basis[entry.basis.label] = &entry.povm;
    }
    std::vector<ResolvedOutcome> resolved;
    for (const auto& record : dataset.records) {
        const auto basis_it = by_basis.find(record.basis_label);
        if (basis_it == by_basis.end()) {
            throw std::invalid_argument("mle: dataset basis '" + record.basis_label +
                                        "' has no POVM");
        }
        std::map<OutcomeLabel, const CMatrix*> by_label;
        for (const auto& effect : basis_it->second->effects) {
            by_label[effect.label] = &effect.matrix;
        }
        for (const auto& [label, count] : record.counts) {
            if (count < 0.0) {
                throw std::invalid_argument("mle: negative outcome count");
            }
            if (count == 0.0) {
                continue;
            }
            const auto effect_it = by_label.find(label);
            if (effect_it == by_label.end()) {
                throw std::invalid_argument("mle: outcome '" + label_to_string(label) +
                                            "' in basis '" + record.basis_label +
                                            "' has no effect");
            }
            resolved.push_back({effect_it->second, count});
        }
    }
    return resolved;
}

// Outcome probabilities tr(E * root * root^dagger) for every observed outcome.
void outcome_probs(const std::vector<ResolvedOutcome>& outcomes, const CMatrix& root,
                   std::vector<double>& probs) {
    probs.resize(outcomes.size());
    for (std::size_t j = 0; j < outcomes.size(); ++j) {
        probs[j] = ((*outcomes[j].effect) * root).cwiseProduct(root.conjugate()).sum().real();
    }
}

double loglik_from_probs(const std::vector<ResolvedOutcome>& outcomes,
                         const std::vector<double>& probs) {
    double total = 0.0;
    for (std::size_t j = 0; j < outcomes.size(); ++j) {
        if (probs[j] <= 0.0) {
            return kNegInf;
        }
        total += outcomes[j].count * std::log(std::max(probs[j], kProbFloor));
    }
    return total;
}

CMatrix initial_root(int dim, int rank) {
    CMatrix root = CMatrix::Zero(dim, rank);
    for (int k = 0; k < rank; ++k) {
        root(k % dim, k) = 1.0;
    }
    // Deterministic symmetry-breaking perturbation.
    Rng pert(0x696f6e746f6d6fULL);
    for (int i = 0; i < dim; ++i) {
        for (int k = 0; k < rank; ++k) {
            root(i, k) += 1e-3 * Complex(pert.normal(), pert.normal());
        }
    }
    root /= root.norm();
    return root;
}

}  // namespace

RootState::RootState(CMatrix root_in) : root(std::move(root_in)) {
    if (root.rows() < 1 || root.cols() < 1) {
        throw std::invalid_argument("RootState: empty root");
    }
    if (std::abs(root.squaredNorm() - 1.0) > 1e-10) {
        throw std::invalid_argument("RootState: trace of root * root^dagger differs from one");
    }
}

DensityMatrix RootState::to_density() const {
    CMatrix rho = root * root.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(std::move(rho));
}

double log_likelihood(const Dataset& dataset, const std::vector<BasisPovm>& povms,
                      const DensityMatrix& state) {
    const auto outcomes = resolve_outcomes(dataset, povms);
    double total = 0.0;
    for (const auto& outcome : outcomes) {
        double p = ((*outcome.effect) * state.matrix).trace().real();
        if (p <= 0.0) {
            return kNegInf;
        }
        total += outcome.count * std::log(std::max(p, kProbFloor));
    }
    return total;
}

ReconstructionResult reconstruct(const Dataset& dataset, const std::vector<BasisPovm>& povms,
                                 const MleOptions& options, const PureState* truth) {
    const int dim = povms.front().povm.dim;
    const int rank = options.rank == 0 ? dim : options.rank;
    if (rank < 1 || rank > dim) {
        throw std::invalid_argument("reconstruct: rank must lie in [1, dim]");
    }
    const auto outcomes = resolve_outcomes(dataset, povms);
    if (outcomes.empty()) {
        throw std::invalid_argument("reconstruct: dataset has no counts");
    }
    double total_counts = 0.0;
    for (const auto& outcome : outcomes) {
        total_counts += outcome.count;
    }

    CMatrix root = initial_root(dim, rank);
    std::vector<double> probs;
    outcome_probs(outcomes, root, probs);
    double loglik = loglik_from_probs(outcomes, probs);

    ReconstructionResult result{RootState(root).to_density(), 0.0, 0, false, false, {}, std::nullopt};
    result.loglik_trace.push_back(loglik);

    double step = 1.0;
    CMatrix trial;
    std::vector<double> trial_probs;
    for (int iter = 1; iter <= options.max_iter && std::isfinite(loglik); ++iter) {
        // Weighted effect sum R = sum_j (count_j / p_j) E_j; R * root / total
        // is the fixed-point map, blended with the current root by `step`.
        CMatrix weighted = CMatrix::Zero(dim, dim);
        for (std::size_t j = 0; j < outcomes.size(); ++j) {
            weighted += (outcomes[j].count / std::max(probs[j], kProbFloor)) *
                        (*outcomes[j].effect);
        }

        double trial_loglik = kNegInf;
        bool accepted = false;
        while (step >= 1e-18) {
            trial = (1.0 - step) * root + (step / total_counts) * (weighted * root);
            trial /= trial.norm();
            outcome_probs(outcomes, trial, trial_probs);
            trial_loglik = loglik_from_probs(outcomes, trial_probs);
            if (trial_loglik >= loglik) {
                accepted = true;
                break;
            }
            step /= 2.0;
        }
        if (!accepted) {
            break;
        }
        const double gain = trial_loglik - loglik;
        root.swap(trial);
        probs.swap(trial_probs);
        loglik = trial_loglik;
        result.loglik_trace.push_back(loglik);
        result.iterations = iter;
        step = std::min(step * 1.4, 4.0);
        if (gain <= options.tol * std::max(1.0, std::abs(loglik))) {
            result.converged = true;
            break;
        }
    }

    result.estimate = RootState(root).to_density();
    result.log_likelihood = loglik;
    if (rank == dim) {
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(result.estimate.matrix,
                                                      Eigen::EigenvaluesOnly);
        result.rank_deficient = solver.eigenvalues().minCoeff() < 1e-10;
    }
    if (truth != nullptr) {
        result.fidelity = fidelity(*truth, result.estimate);
    }
    return result;
}

double invert_binary_response(double p0_distorted, double eps10, double eps01) {
    if (!(eps10 >= 0.0 && eps01 >= 0.0 && eps10 + eps01 < 1.0)) {
        throw std::invalid_argument(
            "invert_binary_response: degenerate channel (eps10 + eps01 must be below 1)");
    }
    const double estimate = (p0_distorted - eps01) / (1.0 - eps10 - eps01);
    return std::min(1.0, std::max(0.0, estimate));
}

}  // namespace iontomo
