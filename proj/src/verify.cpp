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

#include <algorithm>
#include <cmath>
#include <limits>

#include "mixedbath/runner.hpp"

namespace mixedbath::runner {

namespace {

// Worst value of one invariant across samples; passes if worst <= tolerance.
class Check {
public:
    Check(std::string name, double tolerance) : name_(std::move(name)), tolerance_(tolerance) {}

    void observe(double value, double t) {
        if (std::isnan(value)) value = std::numeric_limits<double>::infinity();
        if (!seen_ || value > worst_) {
            worst_ = value;
            worst_t_ = t;
            seen_ = true;
        }
    }

    void fail(const std::string& detail) { error_ = detail; }

    CheckResult result() const {
        CheckResult r;
        r.name = name_;
        r.tolerance = tolerance_;
        r.value = seen_ ? worst_ : 0.0;
        if (error_) {
            r.passed = false;
            r.detail = *error_;
        } else {
            r.passed = seen_ && worst_ <= tolerance_;
            r.detail = seen_ ? "worst at t=" + std::to_string(worst_t_) : "no samples";
        }
        return r;
    }

private:
    std::string name_;
    double tolerance_;
    double worst_ = 0.0;
    double worst_t_ = 0.0;
    bool seen_ = false;
    std::optional<std::string> error_;
};

double spread(std::initializer_list<double> values) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return *hi - *lo;
}

CheckResult detailed_balance_check(const model::SimulationConfig& config, bool corrupt) {
    markov::RateModel rates = markov::ohmic_rates;
    if (corrupt) {
        rates = [](double w, double t, double k) {
            auto r = markov::ohmic_rates(w, t, k);
            r.gamma_up = -r.gamma_up;
            return r;
        };
    }
    CheckResult r;
    r.name = "detailed_balance";
    r.tolerance = 1e-9;
    r.passed = true;
    const QOperator h_s = model::build_system_hamiltonian(config.system);
    double worst = 0.0;
    for (std::size_t j = 0; j < config.baths.size(); ++j) {
        if (!model::is_markovian(config.baths[j])) continue;
        const double temp = model::temperature_of(config.baths[j]);
        try {
            const auto d = markov::build_markov_generator(config, j, rates);
            for (const auto& tr : d.transitions()) {
                if (tr.rates.gamma_down < 0.0 || tr.rates.gamma_up < 0.0) {
                    throw ContractError("negative rate");
                }
                // gamma_down / gamma_up = exp(w/T)
                const double expected = std::exp(tr.omega / temp);
                const double ratio = tr.rates.gamma_down / tr.rates.gamma_up;
                worst = std::max(worst, std::abs(ratio - expected) / expected);
            }
            // The Gibbs state of the register at this bath's temperature is stationary.
            worst = std::max(worst, d(model::gibbs_state(h_s, temp)).max_abs());
        } catch (const Error& e) {
            r.passed = false;
            r.detail = "bath." + std::to_string(j + 1) + ": " + e.what();
            worst = std::numeric_limits<double>::infinity();
        }
    }
    r.value = worst;
    if (!(worst <= r.tolerance)) r.passed = false;
    if (r.passed) r.detail = "rate ratios and Gibbs fixed points within tolerance";
    return r;
}

}  // namespace

bool VerifyReport::passed() const {
    return !checks.empty() &&
           std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const CheckResult* VerifyReport::find(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

nlohmann::json VerifyReport::to_json() const {
    nlohmann::json j;
    j["passed"] = passed();
    j["samples"] = samples;
    j["t_max"] = t_max;
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
        nlohmann::json cj;
        cj["name"] = c.name;
        cj["passed"] = c.passed;
        cj["value"] = std::isfinite(c.value) ? nlohmann::json(c.value) : nlohmann::json("inf");
        cj["tolerance"] = c.tolerance;
        cj["detail"] = c.detail;
        j["checks"].push_back(std::move(cj));
    }
    return j;
}

VerifyReport verify(const model::SimulationConfig& config, const VerifyOptions& options) {
    config.validate();
    model::SimulationConfig cfg = config;
    const double dt = cfg.integrator.dt;
    const double horizon = std::min(cfg.integrator.t_max, options.t_max);
    cfg.integrator.t_max = std::floor(horizon / dt + 1e-9) * dt;

    VerifyReport report;
    report.t_max = cfg.integrator.t_max;

    const dynamics::GeneratorBundle gen = dynamics::assemble_generator(cfg);
    std::vector<model::SimulationConfig> p_cfgs(3, cfg);
    p_cfgs[0].p_weight = 0.0;
    p_cfgs[1].p_weight = 0.5;
    p_cfgs[2].p_weight = 1.0;
    const thermo::ThermoEvaluator evaluator(cfg, gen);
    const thermo::ThermoEvaluator eval_p0(p_cfgs[0], gen);
    const thermo::ThermoEvaluator eval_p5(p_cfgs[1], gen);
    const thermo::ThermoEvaluator eval_p1(p_cfgs[2], gen);
    const auto weights = thermo::commutator_weights(evaluator.markovian(), cfg.p_weight);

    Check closure("closure", 1e-10);
    Check p_invariance("p_invariance", 1e-10);
    Check additivity("current_additivity", 1e-9);
    Check two_form("epr_two_form", 1e-8);
    Check witness_form("witness_commutator_invariance", 1e-10);
    Check quantifier("quantifier_bounds", 1e-12);
    Check sanity("density_matrix_sanity", 1.0);  // value: worst ratio to the bound

    std::vector<thermo::ThermoRecord> records;
    std::optional<std::string> aborted;
    try {
        dynamics::evolve(cfg, gen, [&](const model::JointState& state, const dynamics::SampleInfo& info) {
            const double t = state.t;
            const auto rec = evaluator.evaluate(state, info.max_step_drift);
            records.push_back(rec);

            // Route 1: trace of the joint generator. Route 2: reduced pieces.
            const QOperator joint_rhs = gen.apply(state.rho);
            const QOperator reduced_rhs = dynamics::reduce_to_system(joint_rhs, gen.layout());
            const auto pieces = thermo::reduce_generator(state, gen);
            closure.observe(max_abs_diff(reduced_rhs, pieces.total()), t);

            const auto r0 = eval_p0.evaluate(state);
            const auto r5 = eval_p5.evaluate(state);
            const auto r1 = eval_p1.evaluate(state);
            double s = std::max({spread({r0.epr, r5.epr, r1.epr}),
                                 spread({r0.witness, r5.witness, r1.witness}),
                                 spread({r0.quantifier, r5.quantifier, r1.quantifier}),
                                 spread({r0.epr_relative_form, r5.epr_relative_form,
                                         r1.epr_relative_form})});
            for (std::size_t j = 0; j < rec.currents.size(); ++j) {
                s = std::max(s, spread({r0.currents[j], r5.currents[j], r1.currents[j]}));
            }
            p_invariance.observe(s, t);

            double total_current = 0.0;
            for (double c : rec.currents) total_current += c;
            additivity.observe(
                std::abs(total_current - real_trace_product(gen.h_system(), reduced_rhs)), t);

            two_form.observe(std::abs(rec.epr - rec.epr_relative_form), t);

            // Witness with L_NM (commutator share included) equals the D_NM witness.
            const auto log_rho = floored_log(pieces.rho_s, cfg.eps_log);
            double with_commutator = 0.0;
            for (const auto& nm : gen.nm_interactions()) {
                const QOperator l_nm = cplx(weights[nm.qubit]) * pieces.commutator +
                                       pieces.bath_terms[nm.qubit];
                with_commutator += real_trace_product(
                    l_nm, log_rho.log - evaluator.references().logs[nm.qubit], 1e-9);
            }
            witness_form.observe(std::abs(with_commutator - rec.witness), t);

            double q_excess = std::abs(rec.witness) - rec.quantifier;
            if (gen.nm_interactions().empty()) q_excess = std::max(q_excess, std::abs(rec.quantifier));
            quantifier.observe(q_excess, t);

            sanity.observe(std::max({rec.trace_error / kMaxTraceError,
                                     rec.min_eigenvalue / kMinEigenvalue,
                                     rec.step_drift / kMaxStepDrift}),
                           t);
        });
    } catch (const Error& e) {
        aborted = std::string("trajectory aborted: ") + e.what();
    }
    report.samples = records.size();

    // Checked as -margin <= tol on samples whose log is not floor-dominated.
    Check spohn("spohn_margin", thermo::spohn_tolerance(records));
    for (const auto& r : records) {
        if (!r.log_floored) spohn.observe(-r.spohn_margin, r.t);
    }
    if (aborted) {
        for (Check* c : {&closure, &p_invariance, &additivity, &two_form, &witness_form, &spohn,
                         &quantifier, &sanity}) {
            c->fail(*aborted);
        }
    }

    for (const Check* c : {&closure, &p_invariance, &additivity, &two_form, &witness_form, &spohn,
                           &quantifier, &sanity}) {
        report.checks.push_back(c->result());
    }
    if (auto& s = report.checks[5]; !aborted && s.detail == "no samples") {
        s.passed = true;
        s.detail = "all samples log-floored";
    }
    report.checks.push_back(detailed_balance_check(cfg, options.corrupt_rate_sign));
    return report;
}

}  // namespace mixedbath::runner
