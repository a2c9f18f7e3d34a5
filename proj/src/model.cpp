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

#include "mixedbath/model.hpp"

#include <cmath>
#include <string>

namespace mixedbath::model {

Matrix sigma_x() {
    Matrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

Matrix sigma_y() {
    Matrix m(2, 2);
    m << 0.0, -kI, kI, 0.0;
    return m;
}

Matrix sigma_z() {
    Matrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

Matrix sigma_plus() {
    Matrix m(2, 2);
    m << 0.0, 1.0, 0.0, 0.0;
    return m;
}

Matrix sigma_minus() {
    Matrix m(2, 2);
    m << 0.0, 0.0, 1.0, 0.0;
    return m;
}

void SystemSpec::validate() const {
    if (omegas.empty()) throw ConfigError("system: no qubit frequencies given");
    for (std::size_t j = 0; j < omegas.size(); ++j) {
        if (!(omegas[j] > 0.0) || !std::isfinite(omegas[j])) {
            throw ConfigError("system: omegas[" + std::to_string(j + 1) +
                              "] must be a positive number");
        }
    }
}

double temperature_of(const BathSpec& bath) {
    return std::visit([](const auto& b) { return b.temperature; }, bath);
}

bool is_markovian(const BathSpec& bath) { return std::holds_alternative<MarkovianBath>(bath); }

void validate_bath(const BathSpec& bath, std::size_t qubit) {
    const std::string where = "bath." + std::to_string(qubit + 1);
    if (!(temperature_of(bath) > 0.0) || !std::isfinite(temperature_of(bath))) {
        throw ConfigError(where + ": temperature T must be positive");
    }
    if (const auto* m = std::get_if<MarkovianBath>(&bath)) {
        if (!(m->kappa > 0.0)) throw ConfigError(where + ": kappa must be positive");
    } else {
        const auto& s = std::get<SpinStarBath>(bath);
        if (!(s.nu > 0.0)) throw ConfigError(where + ": nu must be positive");
        if (!(s.alpha >= 0.0)) throw ConfigError(where + ": alpha must be non-negative");
        if (s.n_spins < 1) throw ConfigError(where + ": n_spins must be at least 1");
    }
}

std::size_t SimulationConfig::num_markovian() const {
    std::size_t n = 0;
    for (const auto& b : baths) n += is_markovian(b) ? 1 : 0;
    return n;
}

std::size_t SimulationConfig::num_spin_star() const { return baths.size() - num_markovian(); }

void SimulationConfig::validate() const {
    system.validate();
    if (baths.size() != system.num_qubits()) {
        throw ConfigError("config has " + std::to_string(baths.size()) + " baths for " +
                          std::to_string(system.num_qubits()) +
                          " qubits; exactly one bath per qubit is required");
    }
    for (std::size_t j = 0; j < baths.size(); ++j) validate_bath(baths[j], j);
    if (!(integrator.dt > 0.0)) throw ConfigError("integrator: dt must be positive");
    if (!(integrator.t_max >= 0.0)) throw ConfigError("integrator: t_max must be non-negative");
    if (integrator.record_stride == 0) {
        throw ConfigError("integrator: record_stride must be at least 1");
    }
    if (!(p_weight >= 0.0 && p_weight <= 1.0)) {
        throw ConfigError("output: p_weight must lie in [0, 1]");
    }
    if (!(eps_log > 0.0 && eps_log < 1.0)) {
        throw ConfigError("output: eps_log must lie in (0, 1)");
    }
    const std::size_t n = system.num_qubits();
    if (const auto* p = std::get_if<ProductBasisState>(&initial_state)) {
        if (p->bits.size() != n || p->bits.find_first_not_of("01") != std::string::npos) {
            throw ConfigError("system: product initial state needs exactly " + std::to_string(n) +
                              " characters from {0,1}");
        }
    } else if (const auto* c = std::get_if<CustomState>(&initial_state)) {
        if (c->amplitudes.size() != (std::size_t{1} << n)) {
            throw ConfigError("system: custom amplitude vector has length " +
                              std::to_string(c->amplitudes.size()) + ", expected " +
                              std::to_string(std::size_t{1} << n));
        }
        double norm2 = 0.0;
        for (const auto& a : c->amplitudes) norm2 += std::norm(a);
        if (!(norm2 > 0.0)) throw ConfigError("system: custom amplitude vector has zero norm");
    }
}

std::vector<std::size_t> JointLayout::system_factors() const {
    std::vector<std::size_t> f(num_qubits);
    for (std::size_t j = 0; j < num_qubits; ++j) f[j] = j;
    return f;
}

JointLayout make_layout(const SimulationConfig& config) {
    JointLayout layout;
    layout.num_qubits = config.system.num_qubits();
    layout.dims.assign(layout.num_qubits, 2);
    layout.bath_factor.assign(layout.num_qubits, std::nullopt);
    for (std::size_t j = 0; j < config.baths.size() && j < layout.num_qubits; ++j) {
        if (const auto* s = std::get_if<SpinStarBath>(&config.baths[j])) {
            layout.bath_factor[j] = layout.dims.size();
            layout.dims.push_back(std::size_t{1} << s->n_spins);
        }
    }
    return layout;
}

QOperator build_system_hamiltonian(const SystemSpec& spec) {
    spec.validate();
    const Dims dims(spec.num_qubits(), 2);
    QOperator h = QOperator::zero(dims);
    for (std::size_t j = 0; j < spec.num_qubits(); ++j) {
        h += embed(0.5 * spec.omegas[j] * sigma_z(), j, dims);
    }
    return h;
}

SpinStarOperators build_spin_star_bath(double nu, int n_spins) {
    if (n_spins < 1) throw ConfigError("spin-star bath needs at least one spin");
    const Dims dims(static_cast<std::size_t>(n_spins), 2);
    QOperator jp = QOperator::zero(dims);
    for (std::size_t l = 0; l < dims.size(); ++l) jp += embed(sigma_plus(), l, dims);
    QOperator jm = jp.adjoint();
    QOperator h = cplx(nu) * (jp * jm);
    // The bath is a single factor of the joint space.
    const Dims flat{product(dims)};
    return {QOperator(std::move(h.data()), flat), QOperator(std::move(jp.data()), flat),
            QOperator(std::move(jm.data()), flat)};
}

QOperator build_xy_interaction(const JointLayout& layout, std::size_t qubit, double alpha,
                               const SpinStarOperators& bath_ops) {
    if (qubit >= layout.num_qubits) {
        throw ConfigError("XY interaction: qubit " + std::to_string(qubit + 1) + " does not exist");
    }
    const auto& factor = layout.bath_factor[qubit];
    if (!factor) {
        throw ConfigError("XY interaction: qubit " + std::to_string(qubit + 1) +
                          " is not attached to a spin-star bath");
    }
    if (bath_ops.j_plus.dim() != layout.dims[*factor]) {
        throw DimensionError("XY interaction: bath operators do not match the bath factor");
    }
    const QOperator sp = embed(sigma_plus(), qubit, layout.dims);
    const QOperator sm = embed(sigma_minus(), qubit, layout.dims);
    const QOperator jm = embed(bath_ops.j_minus.data(), *factor, layout.dims);
    const QOperator jp = embed(bath_ops.j_plus.data(), *factor, layout.dims);
    return cplx(alpha) * (sp * jm + sm * jp);
}

QOperator gibbs_state(const QOperator& h, double temperature) {
    if (!(temperature > 0.0)) throw ContractError("gibbs_state: temperature must be positive");
    const auto eig = herm_eig(h);
    const double e0 = eig.values[0];
    QOperator w = mat_func_hermitian(eig, [&](double e) { return std::exp(-(e - e0) / temperature); });
    const double z = w.trace().real();
    w *= cplx(1.0 / z);
    // Restore exact Hermiticity lost in V diag V^dagger.
    w.data() = 0.5 * (w.data() + w.data().adjoint()).eval();
    return w;
}

QOperator initial_system_state(const SimulationConfig& config) {
    const std::size_t n = config.system.num_qubits();
    const std::size_t d = std::size_t{1} << n;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d));
    if (std::holds_alternative<GhzState>(config.initial_state)) {
        psi[0] = 1.0 / std::sqrt(2.0);
        psi[static_cast<Eigen::Index>(d - 1)] = 1.0 / std::sqrt(2.0);
    } else if (const auto* p = std::get_if<ProductBasisState>(&config.initial_state)) {
        if (p->bits.size() != n || p->bits.find_first_not_of("01") != std::string::npos) {
            throw ConfigError("product initial state must have one 0/1 character per qubit");
        }
        std::size_t idx = 0;
        for (char c : p->bits) idx = 2 * idx + static_cast<std::size_t>(c - '0');
        psi[static_cast<Eigen::Index>(idx)] = 1.0;
    } else {
        const auto& amps = std::get<CustomState>(config.initial_state).amplitudes;
        if (amps.size() != d) {
            throw ConfigError("custom amplitude vector has length " + std::to_string(amps.size()) +
                              ", expected " + std::to_string(d));
        }
        for (std::size_t k = 0; k < d; ++k) psi[static_cast<Eigen::Index>(k)] = amps[k];
        const double norm = psi.norm();
        if (!(norm > 0.0)) throw ConfigError("custom amplitude vector has zero norm");
        psi /= norm;
    }
    return {psi * psi.adjoint(), Dims(n, 2)};
}

JointState initial_joint_state(const SimulationConfig& config) {
    config.validate();
    QOperator rho = initial_system_state(config);
    for (const auto& bath : config.baths) {
        if (const auto* s = std::get_if<SpinStarBath>(&bath)) {
            const auto ops = build_spin_star_bath(s->nu, s->n_spins);
            rho = kron(rho, gibbs_state(ops.h_bath, s->temperature));
        }
    }
    return {std::move(rho), 0.0};
}

}  // namespace mixedbath::model
