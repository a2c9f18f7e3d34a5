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

#include "mixedbath/thermo.hpp"

#include <algorithm>
#include <cmath>

namespace mixedbath::thermo {

ReferenceStates build_reference_states(const QOperator& h_s, std::span<const double> temperatures) {
    const auto eig = herm_eig(h_s);
    const double e0 = eig.values[0];
    ReferenceStates refs;
    for (double t : temperatures) {
        if (!(t > 0.0)) throw ContractError("reference state: temperature must be positive");
        // ln Z relative to the ground energy
        double z = 0.0;
        for (Eigen::Index k = 0; k < eig.values.size(); ++k) z += std::exp(-(eig.values[k] - e0) / t);
        const double log_z = std::log(z);
        refs.temperatures.push_back(t);
        refs.states.push_back(model::gibbs_state(h_s, t));
        refs.logs.push_back(mat_func_hermitian(eig, [&](double e) { return -(e - e0) / t - log_z; }));
    }
    return refs;
}

QOperator ReducedGenerator::total() const {
    QOperator out = commutator;
    for (const auto& term : bath_terms) out += term;
    return out;
}

ReducedGenerator reduce_generator(const model::JointState& state,
                                  const dynamics::GeneratorBundle& gen) {
    ReducedGenerator out;
    out.rho_s = dynamics::reduce_to_system(state.rho, gen.layout());
    out.commutator = -kI * commutator(gen.h_system(), out.rho_s);

    const std::size_t n = gen.layout().num_qubits;
    out.bath_terms.assign(n, QOperator::zero(out.rho_s.dims()));
    for (const auto& d : gen.markov_dissipators()) out.bath_terms[d.qubit()] = d(out.rho_s);
    for (const auto& nm : gen.nm_interactions()) {
        out.bath_terms[nm.qubit] = dynamics::nm_dissipator(state, nm, gen.layout());
    }
    return out;
}

std::vector<double> commutator_weights(const std::vector<bool>& markovian, double p) {
    const auto m = static_cast<std::size_t>(std::count(markovian.begin(), markovian.end(), true));
    const std::size_t n = markovian.size() - m;
    double markov_share = p;
    if (m == 0) markov_share = 0.0;
    if (n == 0) markov_share = 1.0;
    std::vector<double> w(markovian.size(), 0.0);
    for (std::size_t j = 0; j < markovian.size(); ++j) {
        w[j] = markovian[j] ? markov_share / static_cast<double>(m)
                            : (1.0 - markov_share) / static_cast<double>(n);
    }
    return w;
}

double heat_current_markov(const QOperator& rho_s, const markov::MarkovDissipator& dissipator,
                           const QOperator& h_s) {
    return real_trace_product(h_s, dissipator(rho_s));
}

double heat_current_nm(const model::JointState& state, const dynamics::NmInteraction& interaction,
                       const dynamics::GeneratorBundle& gen) {
    return real_trace_product(gen.h_system(),
                              dynamics::nm_dissipator(state, interaction, gen.layout()));
}

double entropy_rate(const QOperator& rho_s, const QOperator& total_rhs, double eps_log) {
    const auto log_rho = floored_log(rho_s, eps_log);
    return -real_trace_product(total_rhs, log_rho.log);
}

double epr(double entropy_rate, std::span<const double> currents,
           std::span<const double> temperatures) {
    if (currents.size() != temperatures.size()) {
        throw DimensionError("epr: one temperature per current is required");
    }
    double sigma = entropy_rate;
    for (std::size_t j = 0; j < currents.size(); ++j) {
        if (!(temperatures[j] > 0.0)) throw ContractError("epr: temperatures must be positive");
        sigma -= currents[j] / temperatures[j];
    }
    return sigma;
}

std::vector<double> witness_terms(std::span<const QOperator> nm_terms, const QOperator& log_rho_s,
                                  std::span<const QOperator> reference_logs) {
    if (nm_terms.size() != reference_logs.size()) {
        throw DimensionError("witness_terms: one reference state per term is required");
    }
    std::vector<double> out;
    out.reserve(nm_terms.size());
    for (std::size_t j = 0; j < nm_terms.size(); ++j) {
        out.push_back(real_trace_product(nm_terms[j], log_rho_s - reference_logs[j], 1e-9));
    }
    return out;
}

namespace {

std::vector<double> nm_witness_terms(const model::JointState& state, const ReferenceStates& refs,
                                     const dynamics::GeneratorBundle& gen, double eps_log) {
    const QOperator rho_s = dynamics::reduce_to_system(state.rho, gen.layout());
    const auto log_rho = floored_log(rho_s, eps_log);
    std::vector<QOperator> terms;
    std::vector<QOperator> logs;
    for (const auto& nm : gen.nm_interactions()) {
        terms.push_back(dynamics::nm_dissipator(state, nm, gen.layout()));
        logs.push_back(refs.logs.at(nm.qubit));
    }
    return witness_terms(terms, log_rho.log, logs);
}

}  // namespace

double witness(const model::JointState& state, const ReferenceStates& refs,
               const dynamics::GeneratorBundle& gen, double eps_log) {
    double m = 0.0;
    for (double term : nm_witness_terms(state, refs, gen, eps_log)) m += term;
    return m;
}

double quantifier(const model::JointState& state, const ReferenceStates& refs,
                  const dynamics::GeneratorBundle& gen, double eps_log) {
    double m = 0.0;
    for (double term : nm_witness_terms(state, refs, gen, eps_log)) m += std::abs(term);
    return m;
}

double epr_relative_entropy_form(const ReducedGenerator& reduced, const QOperator& log_rho_s,
                                 const ReferenceStates& refs, const std::vector<bool>& markovian,
                                 double p) {
    const auto weights = commutator_weights(markovian, p);
    double sigma = -real_trace_product(reduced.total(), log_rho_s);
    for (std::size_t j = 0; j < reduced.bath_terms.size(); ++j) {
        const QOperator partial = cplx(weights[j]) * reduced.commutator + reduced.bath_terms[j];
        const QOperator log_ref = floored_log(refs.states[j], tol::kLogFloor).log;
        sigma += real_trace_product(partial, log_ref);
    }
    return sigma;
}

double spohn_tolerance(std::span<const ThermoRecord> records) {
    double max_sigma = 0.0;
    for (const auto& r : records) max_sigma = std::max(max_sigma, std::abs(r.epr));
    return 1e-6 * std::max(1.0, max_sigma);
}

ThermoEvaluator::ThermoEvaluator(const model::SimulationConfig& config,
                                 const dynamics::GeneratorBundle& gen)
    : gen_(gen), p_(config.p_weight), eps_log_(config.eps_log) {
    std::vector<double> temps;
    for (const auto& b : config.baths) {
        temps.push_back(model::temperature_of(b));
        markovian_.push_back(model::is_markovian(b));
    }
    refs_ = build_reference_states(gen.h_system(), temps);
}

ThermoRecord ThermoEvaluator::evaluate(const model::JointState& state, double step_drift) const {
    ThermoRecord rec;
    rec.t = state.t;
    rec.step_drift = step_drift;

    const auto joint = density_diagnostics(state.rho);
    rec.trace_error = joint.trace_error;
    rec.min_eigenvalue = joint.min_eigenvalue;

    const ReducedGenerator reduced = reduce_generator(state, gen_);
    const QOperator& rho_s = reduced.rho_s;
    const QOperator& h_s = gen_.h_system();
    const auto log_rho = floored_log(rho_s, eps_log_);
    rec.system_min_eigenvalue = log_rho.min_eigenvalue;
    rec.log_floored = log_rho.min_eigenvalue < 10.0 * eps_log_;

    rec.energy = real_trace_product(h_s, rho_s);
    rec.entropy = von_neumann_entropy(rho_s);
    rec.entropy_rate = -real_trace_product(reduced.total(), log_rho.log);

    for (const auto& term : reduced.bath_terms) rec.currents.push_back(real_trace_product(h_s, term));
    rec.epr = epr(rec.entropy_rate, rec.currents, refs_.temperatures);

    std::vector<QOperator> nm_terms;
    std::vector<QOperator> nm_logs;
    for (std::size_t j = 0; j < markovian_.size(); ++j) {
        if (markovian_[j]) continue;
        nm_terms.push_back(reduced.bath_terms[j]);
        nm_logs.push_back(refs_.logs[j]);
    }
    for (double term : witness_terms(nm_terms, log_rho.log, nm_logs)) {
        rec.witness += term;
        rec.quantifier += std::abs(term);
    }
    rec.spohn_margin = spohn_margin(rec.epr, rec.witness);
    rec.epr_relative_form = epr_relative_entropy_form(reduced, log_rho.log, refs_, markovian_, p_);
    return rec;
}

}  // namespace mixedbath::thermo
