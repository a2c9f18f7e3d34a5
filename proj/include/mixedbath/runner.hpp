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

// runner.hpp: scenario execution, CSV/plot emission and the verification suite

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mixedbath/config.hpp"
#include "mixedbath/thermo.hpp"

namespace mixedbath::runner {

// Per-sample sanity bounds applied by `run` and `verify`.
inline constexpr double kMaxTraceError = 1e-9;
inline constexpr double kMinEigenvalue = -1e-8;
inline constexpr double kMaxStepDrift = 1e-7;

struct Violation {
    std::size_t row = 0;
    double t = 0.0;
    std::string what;
};

struct SimulationResult {
    std::vector<thermo::ThermoRecord> records;
    std::vector<Violation> violations;
    double spohn_tolerance = 0.0;
    double max_step_drift = 0.0;
    std::size_t steps = 0;
    std::optional<std::string> error;  // set if integration aborted
    double last_good_time = 0.0;
};

// Integrates the configuration and evaluates one ThermoRecord per recorded sample.
SimulationResult simulate(const model::SimulationConfig& config);

// Spohn margin (non-floored samples only), trace error, positivity and step drift.
std::vector<Violation> find_violations(std::span<const thermo::ThermoRecord> records,
                                       bool all_markovian);

// Columns: t, E, S, dSdt, J_1..J_k, sigma, M_NM, Mbar_NM, spohn_margin, trace_err,
// min_eig, log_floored. Numbers use 17 significant digits.
std::string csv_header(std::size_t num_baths);
std::string csv_row(const thermo::ThermoRecord& record);
void write_csv(std::ostream& out, std::span<const thermo::ThermoRecord> records,
               std::size_t num_baths);

// Python/matplotlib script plotting Mbar_NM and the Spohn margin against t.
std::string plot_script(const std::string& csv_filename);
std::filesystem::path plot_script_path(const std::filesystem::path& csv_path);

// Writes the CSV and the plot script. Returns 0 on success, 1 if violations were
// flagged, 2 if the integration failed.
int run(const model::SimulationConfig& config, const std::filesystem::path& csv_path,
        std::ostream& log);

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;      // worst observed value
    double tolerance = 0.0;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    std::size_t samples = 0;
    double t_max = 0.0;

    bool passed() const;
    const CheckResult* find(const std::string& name) const;
    nlohmann::json to_json() const;
};

struct VerifyOptions {
    // Horizon of the short trajectory; the config's t_max is used if it is smaller.
    double t_max = 2.0;
    // Test hook: flip the sign of the absorption rate when building the
    // detailed-balance check's dissipators.
    bool corrupt_rate_sign = false;
};

VerifyReport verify(const model::SimulationConfig& config, const VerifyOptions& options = {});

}  // namespace mixedbath::runner
