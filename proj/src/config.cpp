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

#include "mixedbath/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace mixedbath::runner {

namespace {

constexpr double kOmegas[] = {50.0, 55.0, 60.0, 65.0};
constexpr double kTemperatures[] = {127.33, 105.57, 95.8, 68.6};
constexpr double kKappa = 1e-3;
constexpr double kNu = 1.0;
constexpr double kAlpha = 5e-3;

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Entry {
    std::string value;
    int line = 0;
};

// section -> key -> entry
using Sections = std::map<std::string, std::map<std::string, Entry>>;

class Parser {
public:
    explicit Parser(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(int line, const std::string& msg) const {
        throw ConfigError(source_ + ":" + std::to_string(line) + ": " + msg);
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(source_ + ": " + msg); }

    Sections read(const std::string& text) {
        Sections sections;
        std::istringstream in(text);
        std::string raw;
        std::string current;
        std::map<std::string, int> section_line;
        int line_no = 0;
        while (std::getline(in, raw)) {
            ++line_no;
            const auto hash = raw.find('#');
            const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') fail(line_no, "malformed section header '" + line + "'");
                current = lower(trim(line.substr(1, line.size() - 2)));
                if (section_line.count(current)) fail(line_no, "duplicate section [" + current + "]");
                section_line[current] = line_no;
                sections[current];
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) fail(line_no, "expected 'key = value', got '" + line + "'");
            if (current.empty()) fail(line_no, "key outside of any section");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) fail(line_no, "empty key");
            auto& sec = sections[current];
            if (sec.count(key)) fail(line_no, "duplicate key '" + key + "' in [" + current + "]");
            sec[key] = {value, line_no};
        }
        return sections;
    }

    double number(const std::string& section, const Entry& e, const std::string& key) const {
        const char* begin = e.value.c_str();
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(begin, &end);
        if (end == begin || *end != '\0' || errno == ERANGE) {
            fail(e.line, "[" + section + "] " + key + ": '" + e.value + "' is not a number");
        }
        return v;
    }

    long integer(const std::string& section, const Entry& e, const std::string& key) const {
        const char* begin = e.value.c_str();
        char* end = nullptr;
        errno = 0;
        const long v = std::strtol(begin, &end, 10);
        if (end == begin || *end != '\0' || errno == ERANGE) {
            fail(e.line, "[" + section + "] " + key + ": '" + e.value + "' is not an integer");
        }
        return v;
    }

    std::vector<double> numbers(const std::string& section, const Entry& e,
                                const std::string& key) const {
        std::vector<double> out;
        std::istringstream in(e.value);
        std::string item;
        while (std::getline(in, item, ',')) {
            out.push_back(number(section, {trim(item), e.line}, key));
        }
        if (out.empty()) fail(e.line, "[" + section + "] " + key + ": empty list");
        return out;
    }

    void check_keys(const std::string& section, const std::map<std::string, Entry>& entries,
                    const std::set<std::string>& allowed) const {
        for (const auto& [key, e] : entries) {
            if (!allowed.count(key)) fail(e.line, "unknown key '" + key + "' in [" + section + "]");
        }
    }

    const Entry& require(const std::string& section, const std::map<std::string, Entry>& entries,
                         const std::string& key) const {
        const auto it = entries.find(key);
        if (it == entries.end()) fail("[" + section + "] is missing required key '" + key + "'");
        return it->second;
    }

private:
    std::string source_;
};

model::BathSpec parse_bath(const Parser& p, const std::string& name,
                           const std::map<std::string, Entry>& entries) {
    const std::string type = lower(p.require(name, entries, "type").value);
    const double t = p.number(name, p.require(name, entries, "T"), "T");
    if (type == "markovian") {
        p.check_keys(name, entries, {"type", "T", "kappa"});
        return model::MarkovianBath{t, p.number(name, p.require(name, entries, "kappa"), "kappa")};
    }
    if (type == "spin_star") {
        p.check_keys(name, entries, {"type", "T", "nu", "alpha", "n_spins"});
        model::SpinStarBath s;
        s.temperature = t;
        s.nu = p.number(name, p.require(name, entries, "nu"), "nu");
        s.alpha = p.number(name, p.require(name, entries, "alpha"), "alpha");
        const auto it = entries.find("n_spins");
        s.n_spins = it == entries.end() ? 1 : static_cast<int>(p.integer(name, it->second, "n_spins"));
        return s;
    }
    p.fail(entries.at("type").line,
           "[" + name + "] type must be 'markovian' or 'spin_star', got '" + type + "'");
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"fig2a", "fig2b", "fig2c", "all_markov"};
    return names;
}

bool is_preset(const std::string& name) {
    const auto& names = preset_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

model::SimulationConfig preset(const std::string& name, int n_spins) {
    std::size_t n_markov = 0;
    if (name == "fig2a") {
        n_markov = 3;
    } else if (name == "fig2b") {
        n_markov = 2;
    } else if (name == "fig2c") {
        n_markov = 1;
    } else if (name == "all_markov") {
        n_markov = 4;
    } else {
        throw ConfigError("unknown preset '" + name + "'");
    }
    model::SimulationConfig cfg;
    cfg.system.omegas.assign(std::begin(kOmegas), std::end(kOmegas));
    for (std::size_t j = 0; j < 4; ++j) {
        if (j < n_markov) {
            cfg.baths.emplace_back(model::MarkovianBath{kTemperatures[j], kKappa});
        } else {
            cfg.baths.emplace_back(model::SpinStarBath{kTemperatures[j], kNu, kAlpha, n_spins});
        }
    }
    cfg.initial_state = model::GhzState{};
    cfg.validate();
    return cfg;
}

model::SimulationConfig parse_config_text(const std::string& text, const std::string& source) {
    Parser p(source);
    const Sections sections = p.read(text);
    model::SimulationConfig cfg;

    std::map<std::size_t, model::BathSpec> baths;
    for (const auto& [name, entries] : sections) {
        if (name == "system") {
            p.check_keys(name, entries, {"omegas", "initial_state", "bits", "amplitudes", "amplitudes_im"});
            cfg.system.omegas = p.numbers(name, p.require(name, entries, "omegas"), "omegas");
            const auto st = entries.find("initial_state");
            const std::string kind = st == entries.end() ? "ghz" : lower(st->second.value);
            if (kind == "ghz") {
                cfg.initial_state = model::GhzState{};
            } else if (kind == "product") {
                cfg.initial_state = model::ProductBasisState{p.require(name, entries, "bits").value};
            } else if (kind == "custom") {
                const auto re = p.numbers(name, p.require(name, entries, "amplitudes"), "amplitudes");
                std::vector<double> im(re.size(), 0.0);
                if (const auto it = entries.find("amplitudes_im"); it != entries.end()) {
                    im = p.numbers(name, it->second, "amplitudes_im");
                    if (im.size() != re.size()) {
                        p.fail(it->second.line, "amplitudes_im must match the length of amplitudes");
                    }
                }
                model::CustomState c;
                for (std::size_t k = 0; k < re.size(); ++k) c.amplitudes.emplace_back(re[k], im[k]);
                cfg.initial_state = std::move(c);
            } else {
                p.fail(st->second.line, "initial_state must be ghz, product or custom");
            }
        } else if (name.rfind("bath.", 0) == 0) {
            const std::string idx = name.substr(5);
            if (idx.empty() || idx.find_first_not_of("0123456789") != std::string::npos ||
                std::stoul(idx) == 0) {
                p.fail("section [" + name + "] must be [bath.<qubit number starting at 1>]");
            }
            baths.emplace(std::stoul(idx) - 1, parse_bath(p, name, entries));
        } else if (name == "integrator") {
            p.check_keys(name, entries, {"dt", "t_max", "record_stride"});
            if (auto it = entries.find("dt"); it != entries.end()) {
                cfg.integrator.dt = p.number(name, it->second, "dt");
            }
            if (auto it = entries.find("t_max"); it != entries.end()) {
                cfg.integrator.t_max = p.number(name, it->second, "t_max");
            }
            if (auto it = entries.find("record_stride"); it != entries.end()) {
                const long s = p.integer(name, it->second, "record_stride");
                if (s < 1) p.fail(it->second.line, "[integrator] record_stride must be at least 1");
                cfg.integrator.record_stride = static_cast<std::size_t>(s);
            }
        } else if (name == "output") {
            p.check_keys(name, entries, {"p_weight", "eps_log"});
            if (auto it = entries.find("p_weight"); it != entries.end()) {
                cfg.p_weight = p.number(name, it->second, "p_weight");
            }
            if (auto it = entries.find("eps_log"); it != entries.end()) {
                cfg.eps_log = p.number(name, it->second, "eps_log");
            }
        } else {
            p.fail("unknown section [" + name + "]");
        }
    }
    if (!sections.count("system")) p.fail("missing [system] section");

    std::size_t expected = 0;
    for (const auto& [idx, bath] : baths) {
        if (idx != expected) {
            p.fail("bath sections must be numbered 1.." + std::to_string(baths.size()) +
                   " without gaps; [bath." + std::to_string(expected + 1) + "] is missing");
        }
        cfg.baths.push_back(bath);
        ++expected;
    }
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        p.fail(e.what());
    }
    return cfg;
}

model::SimulationConfig parse_config(const std::string& path_or_preset) {
    if (is_preset(path_or_preset)) return preset(path_or_preset);
    std::ifstream in(path_or_preset);
    if (!in) {
        throw ConfigError("'" + path_or_preset + "' is neither a preset (fig2a, fig2b, fig2c, "
                          "all_markov) nor a readable config file");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path_or_preset);
}

std::string to_config_text(const model::SimulationConfig& config) {
    std::ostringstream out;
    out << "[system]\nomegas = ";
    for (std::size_t j = 0; j < config.system.omegas.size(); ++j) {
        out << (j ? ", " : "") << fmt17(config.system.omegas[j]);
    }
    out << '\n';
    if (std::holds_alternative<model::GhzState>(config.initial_state)) {
        out << "initial_state = ghz\n";
    } else if (const auto* p = std::get_if<model::ProductBasisState>(&config.initial_state)) {
        out << "initial_state = product\nbits = " << p->bits << '\n';
    } else {
        const auto& amps = std::get<model::CustomState>(config.initial_state).amplitudes;
        out << "initial_state = custom\namplitudes = ";
        for (std::size_t k = 0; k < amps.size(); ++k) out << (k ? ", " : "") << fmt17(amps[k].real());
        out << "\namplitudes_im = ";
        for (std::size_t k = 0; k < amps.size(); ++k) out << (k ? ", " : "") << fmt17(amps[k].imag());
        out << '\n';
    }
    for (std::size_t j = 0; j < config.baths.size(); ++j) {
        out << "\n[bath." << j + 1 << "]\n";
        if (const auto* m = std::get_if<model::MarkovianBath>(&config.baths[j])) {
            out << "type = markovian\nT = " << fmt17(m->temperature) << "\nkappa = " << fmt17(m->kappa)
                << '\n';
        } else {
            const auto& s = std::get<model::SpinStarBath>(config.baths[j]);
            out << "type = spin_star\nT = " << fmt17(s.temperature) << "\nnu = " << fmt17(s.nu)
                << "\nalpha = " << fmt17(s.alpha) << "\nn_spins = " << s.n_spins << '\n';
        }
    }
    out << "\n[integrator]\ndt = " << fmt17(config.integrator.dt)
        << "\nt_max = " << fmt17(config.integrator.t_max)
        << "\nrecord_stride = " << config.integrator.record_stride << '\n';
    out << "\n[output]\np_weight = " << fmt17(config.p_weight) << "\neps_log = " << fmt17(config.eps_log)
        << '\n';
    return out.str();
}

void apply_overrides(model::SimulationConfig& config, const ConfigOverrides& overrides) {
    if (overrides.n_spins) {
        for (auto& b : config.baths) {
            if (auto* s = std::get_if<model::SpinStarBath>(&b)) s->n_spins = *overrides.n_spins;
        }
    }
    if (overrides.dt) config.integrator.dt = *overrides.dt;
    if (overrides.t_max) config.integrator.t_max = *overrides.t_max;
    if (overrides.record_stride) config.integrator.record_stride = *overrides.record_stride;
    if (overrides.p_weight) config.p_weight = *overrides.p_weight;
    if (overrides.eps_log) config.eps_log = *overrides.eps_log;
    config.validate();
}

}  // namespace mixedbath::runner
