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

// config.hpp: scenario presets and the sectioned text config format
//
//     [system]
//     omegas = 50, 55, 60, 65
//     initial_state = ghz            # ghz | product | custom
//     bits = 0000                    # product only
//     amplitudes = 0.7071, 0, 0.7071 # custom only (real parts)
//     amplitudes_im = 0, 0, 0        # custom only, optional
//
//     [bath.1]
//     type = markovian               # markovian | spin_star
//     T = 127.33
//     kappa = 1e-3
//
//     [bath.4]
//     type = spin_star
//     T = 68.6
//     nu = 1.0
//     alpha = 5e-3
//     n_spins = 1
//
//     [integrator]
//     dt = 2e-4
//     t_max = 50
//     record_stride = 50
//
//     [output]
//     p_weight = 0.5
//     eps_log = 1e-12

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mixedbath/model.hpp"

namespace mixedbath::runner {

const std::vector<std::string>& preset_names();
bool is_preset(const std::string& name);

// Four-qubit scenarios with w = (50, 55, 60, 65), T = (127.33, 105.57, 95.8, 68.6),
// kappa = 1e-3, nu = 1, alpha = 5e-3 and the GHZ start.
//   fig2a: M M M NM    fig2b: M M NM NM    fig2c: M NM NM NM    all_markov: M M M M
model::SimulationConfig preset(const std::string& name, int n_spins = 1);

model::SimulationConfig parse_config_text(const std::string& text,
                                          const std::string& source = "<config>");
// A preset name or a path to a config file.
model::SimulationConfig parse_config(const std::string& path_or_preset);

std::string to_config_text(const model::SimulationConfig& config);

struct ConfigOverrides {
    std::optional<int> n_spins{};
    std::optional<double> dt{};
    std::optional<double> t_max{};
    std::optional<std::size_t> record_stride{};
    std::optional<double> p_weight{};
    std::optional<double> eps_log{};
};

// Applies the overrides and re-validates.
void apply_overrides(model::SimulationConfig& config, const ConfigOverrides& overrides);

}  // namespace mixedbath::runner
