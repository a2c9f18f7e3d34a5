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

// thermo.hpp: heat currents, entropy production and the non-Markovianity
// witness along a trajectory.
//
// Sign conventions: J_j = tr(H_s D_j(rho)) is the dissipative rate of change of
// the qubits' energy caused by bath j (positive when the qubits gain energy), and
//
//     sigma = dS/dt - sum_j J_j / T_j.
//
// The witness adds, for every spin-star bath, tr{D_{NM_j} (ln rho_s - ln rho_th_j)}
// with rho_th_j the Gibbs state of the full qubit Hamiltonian at T_j. The
// Markovian dissipators have rho_th_j as a fixed point, so sigma + M >= 0.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mixedbath/dynamics.hpp"
#include "mixedbath/markov.hpp"
#include "mixedbath/model.hpp"
#include "mixedbath/qmath.hpp"

namespace mixedbath::thermo {

struct ThermoRecord {
    double t = 0.0;
    double energy = 0.0;
    double entropy = 0.0;
    double entropy_rate = 0.0;
    std::vector<double> currents;  // one per bath, qubit order
    double epr = 0.0;
    double witness = 0.0;
    double quantifier = 0.0;
    double spohn_margin = 0.0;
    // diagnostics
    double trace_error = 0.0;     // |tr rho_joint - 1|
    double min_eigenvalue = 0.0;  // of rho_joint
    bool log_floored = false;     // ln rho_s is floor-dominated at this sample
    double system_min_eigenvalue = 0.0;
    double epr_relative_form = 0.0;  // sigma evaluated from the relative-entropy form
    double step_drift = 0.0;         // max pre-renormalisation drift since the last sample
};

// Local canonical equilibrium states exp(-H_s/T_j)/Z_j of the whole register,
// one per bath.
struct ReferenceStates {
    std::vector<double> temperatures;
    std::vector<QOperator> states;
    std::vector<QOperator> logs;
};

ReferenceStates build_reference_states(const QOperator& h_s, std::span<const double> temperatures);

// Reduced generator at one joint state, split by origin.
struct ReducedGenerator {
    QOperator rho_s;
    QOperator commutator;               // -i [H_s, rho_s]
    std::vector<QOperator> bath_terms;  // D_{M_j}(rho_s) or D_{NM_j}(rho), qubit order

    QOperator total() const;
};

ReducedGenerator reduce_generator(const model::JointState& state,
                                  const dynamics::GeneratorBundle& gen);

// Share of the commutator given to each bath's partial superoperator: Markovian
// baths split p evenly, spin-star baths split 1 - p evenly. If one kind is
// absent the other receives the whole commutator.
std::vector<double> commutator_weights(const std::vector<bool>& markovian, double p);

double heat_current_markov(const QOperator& rho_s, const markov::MarkovDissipator& dissipator,
                           const QOperator& h_s);
double heat_current_nm(const model::JointState& state, const dynamics::NmInteraction& interaction,
                       const dynamics::GeneratorBundle& gen);

// -tr(total_rhs ln rho_s) with the floored logarithm.
double entropy_rate(const QOperator& rho_s, const QOperator& total_rhs,
                    double eps_log = tol::kLogFloor);

double epr(double entropy_rate, std::span<const double> currents,
           std::span<const double> temperatures);

// tr{term_j (ln rho_s - ln rho_th_j)} for each spin-star bath j.
std::vector<double> witness_terms(std::span<const QOperator> nm_terms, const QOperator& log_rho_s,
                                  std::span<const QOperator> reference_logs);

// Witness and quantifier from a joint state, evaluated with D_{NM_j}.
double witness(const model::JointState& state, const ReferenceStates& refs,
               const dynamics::GeneratorBundle& gen, double eps_log = tol::kLogFloor);
double quantifier(const model::JointState& state, const ReferenceStates& refs,
                  const dynamics::GeneratorBundle& gen, double eps_log = tol::kLogFloor);

inline double spohn_margin(double sigma, double witness) { return sigma + witness; }

// sigma = -tr(L ln rho_s) + sum_j tr(L_j ln rho_th_j) with L_j the partial superoperators
// weighted by commutator_weights(p); ln rho_th_j comes from an independent
// eigendecomposition of each reference state.
double epr_relative_entropy_form(const ReducedGenerator& reduced, const QOperator& log_rho_s,
                                 const ReferenceStates& refs, const std::vector<bool>& markovian,
                                 double p);

// Spohn tolerance for a trajectory: 1e-6 * max(1, max |sigma|).
double spohn_tolerance(std::span<const ThermoRecord> records);

class ThermoEvaluator {
public:
    ThermoEvaluator(const model::SimulationConfig& config, const dynamics::GeneratorBundle& gen);

    ThermoRecord evaluate(const model::JointState& state, double step_drift = 0.0) const;

    const ReferenceStates& references() const noexcept { return refs_; }
    const std::vector<bool>& markovian() const noexcept { return markovian_; }
    double p_weight() const noexcept { return p_; }
    double eps_log() const noexcept { return eps_log_; }

private:
    const dynamics::GeneratorBundle& gen_;
    ReferenceStates refs_;
    std::vector<bool> markovian_;
    double p_;
    double eps_log_;
};

}  // namespace mixedbath::thermo
