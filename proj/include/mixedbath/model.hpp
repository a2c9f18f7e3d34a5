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

// model.hpp: qubits, spin-star baths and their initial states
//
// Conventions: hbar = k_B = 1, energies in units of the bath frequency scale,
// time is the matching dimensionless time. |0> is the excited qubit level
// (sigma^z = +1) and |1> the ground level; sigma^+ = |0><1|, sigma^- = |1><0|.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mixedbath/qmath.hpp"

namespace mixedbath::model {

Matrix sigma_x();
Matrix sigma_y();
Matrix sigma_z();
Matrix sigma_plus();
Matrix sigma_minus();

struct SystemSpec {
    std::vector<double> omegas;  // qubit frequencies, all > 0

    std::size_t num_qubits() const noexcept { return omegas.size(); }
    void validate() const;
};

// Bosonic bath with ohmic spectral density J(w) = kappa * w, eliminated in Born-Markov.
struct MarkovianBath {
    double temperature = 1.0;
    double kappa = 1e-3;
};

// N spin-1/2 particles with H_B = nu J+J-, XY-coupled to their qubit with strength alpha.
struct SpinStarBath {
    double temperature = 1.0;
    double nu = 1.0;
    double alpha = 5e-3;
    int n_spins = 1;
};

using BathSpec = std::variant<MarkovianBath, SpinStarBath>;

double temperature_of(const BathSpec& bath);
bool is_markovian(const BathSpec& bath);
void validate_bath(const BathSpec& bath, std::size_t qubit);

struct GhzState {};
struct ProductBasisState {
    std::string bits;  // one '0'/'1' per qubit, qubit 1 first
};
struct CustomState {
    std::vector<cplx> amplitudes;  // length 2^n, normalised on use
};
using InitialState = std::variant<GhzState, ProductBasisState, CustomState>;

struct IntegratorSettings {
    double dt = 2e-4;
    double t_max = 50.0;
    std::size_t record_stride = 50;
};

struct SimulationConfig {
    SystemSpec system;
    std::vector<BathSpec> baths;  // baths[j] is attached to qubit j
    InitialState initial_state = GhzState{};
    IntegratorSettings integrator;
    double p_weight = 0.5;
    double eps_log = tol::kLogFloor;

    std::size_t num_markovian() const;
    std::size_t num_spin_star() const;
    void validate() const;
};

// Factor layout of the joint state: system qubits first, then one factor per
// spin-star bath in ascending owner-qubit order.
struct JointLayout {
    Dims dims;
    std::size_t num_qubits = 0;
    std::vector<std::optional<std::size_t>> bath_factor;  // per qubit

    std::vector<std::size_t> system_factors() const;
    Dims system_dims() const { return Dims(num_qubits, 2); }
    bool has_baths() const noexcept { return dims.size() > num_qubits; }
};

JointLayout make_layout(const SimulationConfig& config);

struct JointState {
    QOperator rho;
    double t = 0.0;
};

// sum_j (omega_j / 2) sigma^z_j on the qubit register.
QOperator build_system_hamiltonian(const SystemSpec& spec);

struct SpinStarOperators {
    QOperator h_bath;
    QOperator j_plus;
    QOperator j_minus;
};

SpinStarOperators build_spin_star_bath(double nu, int n_spins);

// alpha (sigma^+_q J^- + sigma^-_q J^+) on the joint space of `layout`.
// Throws ConfigError if qubit q has no spin-star factor.
QOperator build_xy_interaction(const JointLayout& layout, std::size_t qubit, double alpha,
                               const SpinStarOperators& bath_ops);

// exp(-h/T)/Z, evaluated with the ground energy shifted to zero.
QOperator gibbs_state(const QOperator& h, double temperature);

QOperator initial_system_state(const SimulationConfig& config);

// rho_s(0) (x) Gibbs states of every spin-star bath.
JointState initial_joint_state(const SimulationConfig& config);

}  // namespace mixedbath::model
