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

#include "mixedbath/runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace mixedbath::runner {

namespace {

void append_number(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

}  // namespace

SimulationResult simulate(const model::SimulationConfig& config) {
    config.validate();
    const dynamics::GeneratorBundle gen = dynamics::assemble_generator(config);
    const thermo::ThermoEvaluator evaluator(config, gen);

    SimulationResult result;
    try {
        const auto summary = dynamics::evolve(
            config, gen, [&](const model::JointState& state, const dynamics::SampleInfo& info) {
                result.records.push_back(evaluator.evaluate(state, info.max_step_drift));
                result.last_good_time = state.t;
            });
        result.steps = summary.steps;
        result.max_step_drift = summary.max_step_drift;
    } catch (const InstabilityError& e) {
        result.error = e.what();
        result.last_good_time = e.last_good_time();
    } catch (const Error& e) {
        // A diverging state can break a functional before the drift guard trips.
        result.error = e.what();
        result.last_good_time = result.records.empty() ? 0.0 : result.records.back().t;
    }
    result.spohn_tolerance = thermo::spohn_tolerance(result.records);
    result.violations = find_violations(result.records, config.num_spin_star() == 0);
    return result;
}

std::vector<Violation> find_violations(std::span<const thermo::ThermoRecord> records,
                                       bool all_markovian) {
    std::vector<Violation> out;
    const double spohn_tol = thermo::spohn_tolerance(records);
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        auto flag = [&](const std::string& what) { out.push_back({i, r.t, what}); };
        if (!r.log_floored && r.spohn_margin < -spohn_tol) {
            flag("Spohn margin " + std::to_string(r.spohn_margin) + " below -" +
                 std::to_string(spohn_tol));
        }
        if (r.trace_error > kMaxTraceError) flag("trace error " + std::to_string(r.trace_error));
        if (r.min_eigenvalue < kMinEigenvalue) {
            flag("negative eigenvalue " + std::to_string(r.min_eigenvalue));
        }
        if (r.step_drift > kMaxStepDrift) flag("step trace drift " + std::to_string(r.step_drift));
        if (all_markovian && r.quantifier != 0.0) {
            flag("non-zero quantifier without spin-star baths");
        }
    }
    return out;
}

std::string csv_header(std::size_t num_baths) {
    std::string h = "t,E,S,dSdt";
    for (std::size_t j = 1; j <= num_baths; ++j) h += ",J_" + std::to_string(j);
    h += ",sigma,M_NM,Mbar_NM,spohn_margin,trace_err,min_eig,log_floored";
    return h;
}

std::string csv_row(const thermo::ThermoRecord& r) {
    std::string row;
    row.reserve(512);
    auto field = [&](double v) {
        if (!row.empty()) row += ',';
        append_number(row, v);
    };
    field(r.t);
    field(r.energy);
    field(r.entropy);
    field(r.entropy_rate);
    for (double j : r.currents) field(j);
    field(r.epr);
    field(r.witness);
    field(r.quantifier);
    field(r.spohn_margin);
    field(r.trace_error);
    field(r.min_eigenvalue);
    row += r.log_floored ? ",1" : ",0";
    return row;
}

void write_csv(std::ostream& out, std::span<const thermo::ThermoRecord> records,
               std::size_t num_baths) {
    out << csv_header(num_baths) << '\n';
    for (const auto& r : records) {
        if (r.currents.size() != num_baths) {
            throw DimensionError("write_csv: record has the wrong number of currents");
        }
        out << csv_row(r) << '\n';
    }
}

std::string plot_script(const std::string& csv_filename) {
    std::ostringstream s;
    s << R"(#!/usr/bin/env python3
"""Plot the non-Markovianity quantifier and the Spohn margin of a mixedbath run."""
import csv
import os
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
path = sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, ")"
      << csv_filename << R"(")
with open(path, newline="") as f:
    rows = list(csv.DictReader(f))

t = [float(r["t"]) for r in rows]
mbar = [float(r["Mbar_NM"]) for r in rows]
margin = [float(r["spohn_margin"]) for r in rows]
floored = [r["log_floored"] == "1" for r in rows]

fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 7), sharex=True)
ax1.plot(t, mbar, lw=0.6)
ax1.set_ylabel(r"$\overline{M}_{NM}^n$ [$k_B\tilde\eta$]")
ax2.plot(t, margin, lw=0.6, label=r"$\sigma + M_{NM}^n$")
ax2.scatter([x for x, fl in zip(t, floored) if fl],
            [y for y, fl in zip(margin, floored) if fl],
            s=6, c="red", label="log floored")
ax2.axhline(0.0, color="k", lw=0.5)
ax2.set_xlabel(r"$\tilde t$")
ax2.set_ylabel(r"$\sigma + M_{NM}^n$ [$k_B\tilde\eta$]")
ax2.legend(loc="best")
fig.tight_layout()
out = os.path.splitext(path)[0] + ".png"
fig.savefig(out, dpi=150)
print("wrote", out)
)";
    return s.str();
}

std::filesystem::path plot_script_path(const std::filesystem::path& csv_path) {
    auto p = csv_path;
    p.replace_filename(csv_path.stem().string() + "_plot.py");
    return p;
}

int run(const model::SimulationConfig& config, const std::filesystem::path& csv_path,
        std::ostream& log) {
    const SimulationResult result = simulate(config);
    {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) throw ConfigError("cannot open '" + csv_path.string() + "' for writing");
        write_csv(out, result.records, config.baths.size());
    }
    {
        const auto script = plot_script_path(csv_path);
        std::ofstream out(script, std::ios::binary);
        if (!out) throw ConfigError("cannot open '" + script.string() + "' for writing");
        out << plot_script(csv_path.filename().string());
    }
    log << "wrote " << result.records.size() << " samples to " << csv_path.string() << '\n';
    log << "steps: " << result.steps << ", max pre-correction trace drift per step: "
        << result.max_step_drift << ", Spohn tolerance: " << result.spohn_tolerance << '\n';
    if (result.error) {
        log << "error: " << *result.error << "\nlast good time: " << result.last_good_time << '\n';
        return 2;
    }
    if (!result.violations.empty()) {
        log << result.violations.size() << " flagged violation(s):\n";
        std::size_t shown = 0;
        for (const auto& v : result.violations) {
            log << "  row " << v.row << " t=" << v.t << ": " << v.what << '\n';
            if (++shown == 20) {
                log << "  ...\n";
                break;
            }
        }
        return 1;
    }
    return 0;
}

}  // namespace mixedbath::runner
