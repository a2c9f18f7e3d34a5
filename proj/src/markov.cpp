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

#include "mixedbath/markov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mixedbath::markov {

namespace {

struct EnergyLevel {
    double energy;
    Matrix projector;
};

std::vector<EnergyLevel> energy_levels(const QOperator& h) {
    const auto eig = herm_eig(h);
    const double scale = std::max(1.0, eig.values.cwiseAbs().maxCoeff());
    const double tol_e = kFrequencyTolerance * scale;
    const Matrix& v = eig.vectors.data();

    std::vector<EnergyLevel> levels;
    Eigen::Index start = 0;
    const Eigen::Index n = eig.values.size();
    while (start < n) {
        Eigen::Index stop = start + 1;
        while (stop < n && eig.values[stop] - eig.values[start] <= tol_e) ++stop;
        const auto block = v.middleCols(start, stop - start);
        levels.push_back({eig.values.segment(start, stop - start).mean(), block * block.adjoint()});
        start = stop;
    }
    return levels;
}

}  // namespace

std::vector<Eigenoperator> eigenoperators(const QOperator& h_s, const QOperator& a) {
    if (h_s.dims() != a.dims()) throw DimensionError("eigenoperators: layouts differ");
    const auto levels = energy_levels(h_s);
    const double a_scale = std::max(a.max_abs(), 1e-300);

    struct Piece {
        double omega;
        Matrix op;
    };
    std::vector<Piece> pieces;
    double max_omega = 0.0;
    for (const auto& lo : levels) {
        for (const auto& hi : levels) {
            Matrix piece = lo.projector * a.data() * hi.projector;
            if (piece.cwiseAbs().maxCoeff() <= 1e-14 * a_scale) continue;
            const double omega = hi.energy - lo.energy;
            max_omega = std::max(max_omega, std::abs(omega));
            pieces.push_back({omega, std::move(piece)});
        }
    }
    std::sort(pieces.begin(), pieces.end(),
              [](const Piece& x, const Piece& y) { return x.omega < y.omega; });

    const double tol_w = kFrequencyTolerance * std::max(max_omega, 1.0);
    std::vector<Eigenoperator> out;
    for (auto& p : pieces) {
        if (!out.empty() && std::abs(p.omega - out.back().omega) <= tol_w) {
            out.back().op.data() += p.op;
        } else {
            out.push_back({p.omega, QOperator(std::move(p.op), a.dims())});
        }
    }
    return out;
}

RatePair ohmic_rates(double omega, double temperature, double kappa) {
    if (!(omega > 0.0)) throw ContractError("ohmic_rates: frequency must be positive");
    if (!(temperature > 0.0)) throw ContractError("ohmic_rates: temperature must be positive");
    if (!(kappa > 0.0)) throw ContractError("ohmic_rates: kappa must be positive");
    const double spectral = kappa * omega;
    // expm1 overflows to +inf for T -> 0, which gives the vacuum limit n = 0.
    const double occupation = 1.0 / std::expm1(omega / temperature);
    return {spectral * (occupation + 1.0), spectral * occupation};
}

QOperator lindblad_dissipator(const QOperator& rho, std::span<const JumpChannel> channels) {
    QOperator out = QOperator::zero(rho.dims());
    for (const auto& ch : channels) {
        if (ch.rate < 0.0) {
            throw ContractError("lindblad_dissipator: negative rate " + std::to_string(ch.rate));
        }
        if (ch.op.dims() != rho.dims()) throw DimensionError("lindblad_dissipator: layouts differ");
        const Matrix& l = ch.op.data();
        const Matrix ldl = l.adjoint() * l;
        out.data() += ch.rate * (l * rho.data() * l.adjoint() -
                                 0.5 * (ldl * rho.data() + rho.data() * ldl));
    }
    return out;
}

MarkovDissipator::MarkovDissipator(std::size_t qubit, double temperature,
                                   std::vector<JumpChannel> channels,
                                   std::vector<Transition> transitions)
    : qubit_(qubit),
      temperature_(temperature),
      channels_(std::move(channels)),
      transitions_(std::move(transitions)) {
    for (const auto& ch : channels_) {
        if (ch.rate < 0.0) {
            throw ContractError("Markovian dissipator on qubit " + std::to_string(qubit_ + 1) +
                                ": negative rate " + std::to_string(ch.rate));
        }
    }
}

QOperator MarkovDissipator::operator()(const QOperator& rho_s) const {
    return lindblad_dissipator(rho_s, channels_);
}

MarkovDissipator build_markov_generator(const model::SimulationConfig& config, std::size_t qubit,
                                        const RateModel& rates) {
    if (qubit >= config.baths.size()) {
        throw ConfigError("no bath attached to qubit " + std::to_string(qubit + 1));
    }
    const auto* bath = std::get_if<model::MarkovianBath>(&config.baths[qubit]);
    if (!bath) {
        throw ConfigError("bath." + std::to_string(qubit + 1) + " is not Markovian");
    }
    const QOperator h_s = model::build_system_hamiltonian(config.system);
    const QOperator coupling = embed(model::sigma_x(), qubit, h_s.dims());
    const auto ops = eigenoperators(h_s, coupling);

    double max_omega = 0.0;
    for (const auto& e : ops) max_omega = std::max(max_omega, std::abs(e.omega));
    const double tol_w = kFrequencyTolerance * std::max(max_omega, 1.0);

    std::vector<JumpChannel> channels;
    std::vector<Transition> transitions;
    for (const auto& e : ops) {
        if (std::abs(e.omega) <= tol_w) {
            throw ConfigError("bath." + std::to_string(qubit + 1) +
                              ": coupling has a zero-frequency (dephasing) component; the system "
                              "Hamiltonian has degenerate transitions this model does not rate");
        }
        if (e.omega < 0.0) continue;  // adjoint of a positive-frequency entry
        const RatePair r = rates(e.omega, bath->temperature, bath->kappa);
        channels.push_back({e.op, r.gamma_down});
        channels.push_back({e.op.adjoint(), r.gamma_up});
        transitions.push_back({e.omega, r});
    }
    return {qubit, bath->temperature, std::move(channels), std::move(transitions)};
}

}  // namespace mixedbath::markov
