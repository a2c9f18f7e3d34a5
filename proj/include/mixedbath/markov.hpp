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

// markov.hpp: secular GKSL dissipators for Born-Markov (bosonic) baths

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "mixedbath/model.hpp"
#include "mixedbath/qmath.hpp"

namespace mixedbath::markov {

// A(w) = sum_{e' - e = w} P(e) A P(e'); lowers the energy by w, so that
// [H, A(w)] = -w A(w).
struct Eigenoperator {
    double omega = 0.0;
    QOperator op;
};

// Emission and absorption rates at a positive Bohr frequency.
struct RatePair {
    double gamma_down = 0.0;
    double gamma_up = 0.0;
};

// Relative tolerance used to merge degenerate energies and Bohr frequencies.
inline constexpr double kFrequencyTolerance = 1e-9;

// Sorted by ascending omega. Sum over the result reproduces `a`.
std::vector<Eigenoperator> eigenoperators(const QOperator& h_s, const QOperator& a);

// Ohmic weak-coupling rates: J(w) = kappa w, gamma_down = J (n + 1), gamma_up = J n,
// with n the Bose occupation at temperature T.
RatePair ohmic_rates(double omega, double temperature, double kappa);

using RateModel = std::function<RatePair(double omega, double temperature, double kappa)>;

struct JumpChannel {
    QOperator op;
    double rate = 0.0;
};

// sum_k rate_k (L rho L^dagger - 1/2 {L^dagger L, rho}).
QOperator lindblad_dissipator(const QOperator& rho, std::span<const JumpChannel> channels);

struct Transition {
    double omega = 0.0;
    RatePair rates;
};

// D_{M_j}: the dissipator induced by the Markovian bath on qubit j. Acts on the
// qubit register; immutable once built.
class MarkovDissipator {
public:
    MarkovDissipator(std::size_t qubit, double temperature, std::vector<JumpChannel> channels,
                     std::vector<Transition> transitions);

    std::size_t qubit() const noexcept { return qubit_; }
    double temperature() const noexcept { return temperature_; }
    const std::vector<JumpChannel>& channels() const noexcept { return channels_; }
    const std::vector<Transition>& transitions() const noexcept { return transitions_; }

    QOperator operator()(const QOperator& rho_s) const;

private:
    std::size_t qubit_;
    double temperature_;
    std::vector<JumpChannel> channels_;
    std::vector<Transition> transitions_;
};

// Couples qubit j through sigma^x_j, decomposes it into eigenoperators of the
// system Hamiltonian and attaches (A(w), gamma_down(w)) and (A(w)^dagger, gamma_up(w))
// for each positive Bohr frequency. Throws ConfigError if bath j is not Markovian
// or if a zero-frequency channel appears.
MarkovDissipator build_markov_generator(const model::SimulationConfig& config, std::size_t qubit,
                                        const RateModel& rates = ohmic_rates);

}  // namespace mixedbath::markov
