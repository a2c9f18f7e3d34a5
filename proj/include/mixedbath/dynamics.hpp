// Copyright 2026 The mixedbath Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// dynamics.hpp: joint system + spin-bath evolution under the mixed-bath generator
//
// The reduced equation for the qubits references the system-bath correlated
// state, so it is not closed in rho_s alone. We evolve the joint density matrix
// over [qubits..., spin-star baths...]:
//
//     d rho / dt = -i [H_total, rho] + sum_j (D_{M_j} (x) id_baths)(rho)
//
// Tracing the baths out of this right-hand side gives exactly
//     -i [H_s, rho_s] + sum_j D_{M_j}(rho_s) + sum_j D_{NM_j}(rho)
// because tr_B [H_B, rho] = 0 and D_{M_j} acts on system factors only.

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/SparseCore>

#include "mixedbath/markov.hpp"
#include "mixedbath/model.hpp"
#include "mixedbath/qmath.hpp"

namespace mixedbath::dynamics {

using model::JointLayout;
using model::JointState;
using SparseMatrix = Eigen::SparseMatrix<cplx>;

// Interaction of qubit `qubit` with its spin-star bath, on the joint space.
struct NmInteraction {
    std::size_t qubit = 0;
    std::size_t bath_factor = 0;
    double temperature = 0.0;
    QOperator h_interaction;
    SparseMatrix h_sparse;  // structural nonzeros of h_interaction
};

// Scratch buffers for GeneratorBundle::apply; one per integrating thread.
struct Workspace {
    Matrix w;
    Matrix y;
    Matrix y_adj;
    Matrix z;
};

class GeneratorBundle {
public:
    GeneratorBundle(JointLayout layout, QOperator h_system, QOperator h_total,
                    std::vector<markov::MarkovDissipator> markov_dissipators,
                    std::vector<NmInteraction> nm_interactions);

    const JointLayout& layout() const noexcept { return layout_; }
    const QOperator& h_system() const noexcept { return h_system_; }
    const QOperator& h_total() const noexcept { return h_total_; }
    const std::vector<markov::MarkovDissipator>& markov_dissipators() const noexcept {
        return markov_;
    }
    const std::vector<NmInteraction>& nm_interactions() const noexcept { return nm_; }

    // out = joint right-hand side at rho. rho must be Hermitian.
    void apply(const Matrix& rho, Matrix& out, Workspace& ws) const;
    QOperator apply(const QOperator& rho) const;

    // Number of stored nonzeros in the compiled kernels.
    std::size_t kernel_nonzeros() const;

private:
    JointLayout layout_;
    QOperator h_system_;
    QOperator h_total_;
    std::vector<markov::MarkovDissipator> markov_;
    std::vector<NmInteraction> nm_;

    // rhs = W + W^dagger + sum_k L_k rho L_k^dagger with W = rho G^dagger,
    // G = -i H_total - 1/2 sum_k L_k^dagger L_k, and L_k = sqrt(rate_k) (L (x) I_B).
    SparseMatrix g_adj_;
    std::vector<SparseMatrix> jump_adj_;
};

// Operator with entries of magnitude <= rel_tol * max|entry| dropped.
SparseMatrix to_sparse(const Matrix& m, double rel_tol = 1e-14);

GeneratorBundle assemble_generator(const model::SimulationConfig& config,
                                   const markov::RateModel& rates = markov::ohmic_rates);

// D_{NM_j}(rho) = -i tr_baths [H_{I_j}, rho], an operator on the qubit register.
QOperator nm_dissipator(const JointState& state, const NmInteraction& interaction,
                        const JointLayout& layout);

// Reduced qubit state tr_baths(rho).
QOperator reduce_to_system(const QOperator& rho, const JointLayout& layout);

// Trace drift allowed in a single step before the step is rejected as unstable.
inline constexpr double kMaxStepDrift = 1e-6;

// Classical fourth-order Runge-Kutta with re-symmetrisation and trace
// renormalisation after every step.
class Rk4Integrator {
public:
    explicit Rk4Integrator(const GeneratorBundle& gen);

    // Advances `state` by dt; returns |tr - 1| measured before renormalisation.
    // Throws InstabilityError if the drift exceeds kMaxStepDrift or entries stop being finite.
    double step(JointState& state, double dt);

private:
    const GeneratorBundle& gen_;
    Workspace ws_;
    Matrix k_;
    Matrix acc_;
    Matrix stage_;
};

JointState rk4_step(const JointState& state, double dt, const GeneratorBundle& gen);

struct SampleInfo {
    std::size_t step = 0;
    double max_step_drift = 0.0;  // largest pre-correction drift since the previous sample
};

// Observers get read-only access to each recorded state.
using Observer = std::function<void(const JointState&, const SampleInfo&)>;

struct EvolutionSummary {
    JointState final_state;
    std::size_t steps = 0;
    std::size_t samples = 0;
    double max_step_drift = 0.0;
};

// Number of fixed steps covering [0, t_max]; ConfigError if t_max is not a multiple of dt.
std::size_t step_count(const model::IntegratorSettings& settings);

// Integrates from t = 0 to t_max. The observer sees step 0, every
// record_stride-th step, and the final step.
EvolutionSummary evolve(const model::SimulationConfig& config, const GeneratorBundle& gen,
                        const Observer& observer);
EvolutionSummary evolve(const model::SimulationConfig& config, const Observer& observer);

}  // namespace mixedbath::dynamics
