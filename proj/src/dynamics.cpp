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

#include "mixedbath/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mixedbath::dynamics {

namespace {

// L (x) I on the joint space; system factors come first in the layout.
Matrix lift_to_joint(const Matrix& op_system, const JointLayout& layout) {
    const std::size_t bath_dim = product(layout.dims) / (std::size_t{1} << layout.num_qubits);
    if (bath_dim == 1) return op_system;
    return kron(QOperator(op_system), QOperator::identity({bath_dim})).data();
}

}  // namespace

SparseMatrix to_sparse(const Matrix& m, double rel_tol) {
    const double cutoff = rel_tol * (m.size() ? m.cwiseAbs().maxCoeff() : 0.0);
    std::vector<Eigen::Triplet<cplx>> entries;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (std::abs(m(i, j)) > cutoff) entries.emplace_back(i, j, m(i, j));
        }
    }
    SparseMatrix s(m.rows(), m.cols());
    s.setFromTriplets(entries.begin(), entries.end());
    s.makeCompressed();
    return s;
}

GeneratorBundle::GeneratorBundle(JointLayout layout, QOperator h_system, QOperator h_total,
                                 std::vector<markov::MarkovDissipator> markov_dissipators,
                                 std::vector<NmInteraction> nm_interactions)
    : layout_(std::move(layout)),
      h_system_(std::move(h_system)),
      h_total_(std::move(h_total)),
      markov_(std::move(markov_dissipators)),
      nm_(std::move(nm_interactions)) {
    if (h_total_.dims() != layout_.dims) {
        throw DimensionError("GeneratorBundle: H_total does not live on the joint layout");
    }
    if (h_total_.hermiticity_error() > tol::kHermitian) {
        throw ContractError("GeneratorBundle: H_total is not Hermitian");
    }
    Matrix g = -kI * h_total_.data();
    for (const auto& d : markov_) {
        for (const auto& ch : d.channels()) {
            if (ch.rate == 0.0) continue;
            const Matrix lj = std::sqrt(ch.rate) * lift_to_joint(ch.op.data(), layout_);
            g -= 0.5 * (lj.adjoint() * lj);
            jump_adj_.push_back(to_sparse(lj.adjoint()));
        }
    }
    g_adj_ = to_sparse(g.adjoint());
}

void GeneratorBundle::apply(const Matrix& rho, Matrix& out, Workspace& ws) const {
    ws.w.noalias() = rho * g_adj_;
    out = ws.w + ws.w.adjoint();
    for (const auto& l_adj : jump_adj_) {
        ws.y.noalias() = rho * l_adj;  // rho L^dagger
        ws.y_adj = ws.y.adjoint();     // L rho
        ws.z.noalias() = ws.y_adj * l_adj;
        out += ws.z;
    }
}

QOperator GeneratorBundle::apply(const QOperator& rho) const {
    if (rho.dims() != layout_.dims) throw DimensionError("GeneratorBundle::apply: wrong layout");
    Workspace ws;
    Matrix out;
    apply(rho.data(), out, ws);
    return {std::move(out), rho.dims()};
}

std::size_t GeneratorBundle::kernel_nonzeros() const {
    auto n = static_cast<std::size_t>(g_adj_.nonZeros());
    for (const auto& l : jump_adj_) n += static_cast<std::size_t>(l.nonZeros());
    return n;
}

GeneratorBundle assemble_generator(const model::SimulationConfig& config,
                                   const markov::RateModel& rates) {
    config.validate();
    JointLayout layout = model::make_layout(config);
    QOperator h_s = model::build_system_hamiltonian(config.system);

    QOperator h_total(lift_to_joint(h_s.data(), layout), layout.dims);
    std::vector<markov::MarkovDissipator> dissipators;
    std::vector<NmInteraction> interactions;
    for (std::size_t j = 0; j < config.baths.size(); ++j) {
        if (model::is_markovian(config.baths[j])) {
            dissipators.push_back(markov::build_markov_generator(config, j, rates));
            continue;
        }
        const auto& s = std::get<model::SpinStarBath>(config.baths[j]);
        const auto ops = model::build_spin_star_bath(s.nu, s.n_spins);
        const std::size_t factor = *layout.bath_factor[j];
        h_total += embed(ops.h_bath.data(), factor, layout.dims);
        QOperator h_i = model::build_xy_interaction(layout, j, s.alpha, ops);
        h_total += h_i;
        SparseMatrix sparse = to_sparse(h_i.data());
        interactions.push_back({j, factor, s.temperature, std::move(h_i), std::move(sparse)});
    }
    return {std::move(layout), std::move(h_s), std::move(h_total), std::move(dissipators),
            std::move(interactions)};
}

QOperator reduce_to_system(const QOperator& rho, const JointLayout& layout) {
    if (rho.dims() != layout.dims) throw DimensionError("reduce_to_system: wrong layout");
    if (!layout.has_baths()) return rho;
    return partial_trace(rho, layout.system_factors());
}

QOperator nm_dissipator(const JointState& state, const NmInteraction& interaction,
                        const JointLayout& layout) {
    if (state.rho.dims() != layout.dims) throw DimensionError("nm_dissipator: wrong layout");
    const Matrix& rho = state.rho.data();
    const Matrix comm = interaction.h_sparse * rho - rho * interaction.h_sparse;
    return reduce_to_system(QOperator(-kI * comm, layout.dims), layout);
}

Rk4Integrator::Rk4Integrator(const GeneratorBundle& gen) : gen_(gen) {}

double Rk4Integrator::step(JointState& state, double dt) {
    if (!(dt > 0.0)) throw ContractError("rk4 step: dt must be positive");
    Matrix& rho = state.rho.data();

    gen_.apply(rho, k_, ws_);
    acc_ = k_;
    stage_ = rho + (0.5 * dt) * k_;
    gen_.apply(stage_, k_, ws_);
    acc_ += 2.0 * k_;
    stage_ = rho + (0.5 * dt) * k_;
    gen_.apply(stage_, k_, ws_);
    acc_ += 2.0 * k_;
    stage_ = rho + dt * k_;
    gen_.apply(stage_, k_, ws_);
    acc_ += k_;
    rho += (dt / 6.0) * acc_;

    const cplx tr = rho.trace();
    const double drift = std::abs(tr - 1.0);
    if (!std::isfinite(drift) || !rho.allFinite()) {
        throw InstabilityError("RK4 step produced non-finite entries at t = " +
                                   std::to_string(state.t + dt) + "; reduce dt",
                               state.t);
    }
    if (drift > kMaxStepDrift) {
        throw InstabilityError("RK4 trace drift " + std::to_string(drift) + " at t = " +
                                   std::to_string(state.t + dt) + " exceeds " +
                                   std::to_string(kMaxStepDrift) + "; reduce dt",
                               state.t);
    }
    stage_ = 0.5 * (rho + rho.adjoint());
    rho = stage_ / tr.real();
    state.t += dt;
    return drift;
}

JointState rk4_step(const JointState& state, double dt, const GeneratorBundle& gen) {
    JointState next = state;
    Rk4Integrator(gen).step(next, dt);
    return next;
}

std::size_t step_count(const model::IntegratorSettings& settings) {
    if (!(settings.dt > 0.0)) throw ConfigError("integrator: dt must be positive");
    if (settings.t_max == 0.0) return 0;
    const double ratio = settings.t_max / settings.dt;
    const double n = std::round(ratio);
    if (std::abs(ratio - n) > 1e-6) {
        throw ConfigError("integrator: t_max must be an integer multiple of dt");
    }
    return static_cast<std::size_t>(n);
}

EvolutionSummary evolve(const model::SimulationConfig& config, const GeneratorBundle& gen,
                        const Observer& observer) {
    config.validate();
    const std::size_t n_steps = step_count(config.integrator);
    const std::size_t stride = config.integrator.record_stride;
    const double dt = config.integrator.dt;

    EvolutionSummary summary;
    summary.final_state = model::initial_joint_state(config);
    JointState& state = summary.final_state;
    if (state.rho.dims() != gen.layout().dims) {
        throw DimensionError("evolve: generator does not match the configuration layout");
    }

    double drift_since_sample = 0.0;
    auto record = [&](std::size_t step) {
        if (observer) observer(state, {step, drift_since_sample});
        drift_since_sample = 0.0;
        ++summary.samples;
    };
    record(0);

    Rk4Integrator integrator(gen);
    for (std::size_t k = 1; k <= n_steps; ++k) {
        const double drift = integrator.step(state, dt);
        // Index-based time avoids accumulating dt round-off.
        state.t = static_cast<double>(k) * dt;
        drift_since_sample = std::max(drift_since_sample, drift);
        summary.max_step_drift = std::max(summary.max_step_drift, drift);
        if (k % stride == 0 || k == n_steps) record(k);
    }
    summary.steps = n_steps;
    return summary;
}

EvolutionSummary evolve(const model::SimulationConfig& config, const Observer& observer) {
    const GeneratorBundle gen = assemble_generator(config);
    return evolve(config, gen, observer);
}

}  // namespace mixedbath::dynamics
