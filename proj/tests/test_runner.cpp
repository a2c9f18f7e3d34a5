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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <catch_amalgamated.hpp>

#include "mixedbath/runner.hpp"

using namespace mixedbath;
using namespace mixedbath::runner;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

namespace fs = std::filesystem;

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "mixedbath_test_runner";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::vector<double> fields(const std::string& line) {
    std::vector<double> out;
    std::istringstream in(line);
    for (std::string f; std::getline(in, f, ',');) out.push_back(std::stod(f));
    return out;
}

std::string config_error(const std::string& text) {
    try {
        parse_config_text(text, "test.ini");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

const char* kTwoQubitIni = R"(# two qubits
[system]
omegas = 2.0, 2.5
initial_state = custom
amplitudes = 0.6, 0, 0.5, 0.4
amplitudes_im = 0, 0.3, 0, 0

[bath.1]
type = markovian
T = 1.5
kappa = 0.05

[bath.2]
type = spin_star
T = 0.8
nu = 1.2
alpha = 0.3
n_spins = 1

[integrator]
dt = 1e-3
t_max = 0.5
record_stride = 10

[output]
p_weight = 0.25
eps_log = 1e-12
)";

}  // namespace

TEST_CASE("presets carry the four-qubit parameters", "[runner][preset]") {
    const auto a = preset("fig2a");
    REQUIRE(a.system.omegas == std::vector<double>{50.0, 55.0, 60.0, 65.0});
    REQUIRE(a.baths.size() == 4);
    for (int j = 0; j < 3; ++j) CHECK(model::is_markovian(a.baths[j]));
    const auto* nm = std::get_if<model::SpinStarBath>(&a.baths[3]);
    REQUIRE(nm);
    CHECK(nm->temperature == 68.6);
    CHECK(nm->nu == 1.0);
    CHECK(nm->alpha == 5e-3);
    CHECK(nm->n_spins == 1);
    CHECK(std::get<model::MarkovianBath>(a.baths[0]).temperature == 127.33);
    CHECK(std::get<model::MarkovianBath>(a.baths[1]).temperature == 105.57);
    CHECK(std::get<model::MarkovianBath>(a.baths[2]).temperature == 95.8);
    CHECK(std::get<model::MarkovianBath>(a.baths[0]).kappa == 1e-3);
    CHECK(std::holds_alternative<model::GhzState>(a.initial_state));
    CHECK(a.integrator.dt == 2e-4);
    CHECK(a.integrator.t_max == 50.0);
    CHECK(a.integrator.record_stride == 50);

    CHECK(preset("fig2b").num_spin_star() == 2);
    CHECK(preset("fig2c").num_spin_star() == 3);
    CHECK(preset("all_markov").num_spin_star() == 0);
    CHECK(std::get<model::SpinStarBath>(preset("fig2c", 2).baths[1]).n_spins == 2);
    REQUIRE_THROWS_AS(preset("fig3"), ConfigError);
    CHECK(is_preset("all_markov"));
    CHECK_FALSE(is_preset("all"));
}

TEST_CASE("config text parsing", "[runner][config]") {
    const auto c = parse_config_text(kTwoQubitIni, "two.ini");
    CHECK(c.system.omegas == std::vector<double>{2.0, 2.5});
    REQUIRE(c.baths.size() == 2);
    CHECK(model::is_markovian(c.baths[0]));
    CHECK(std::get<model::SpinStarBath>(c.baths[1]).alpha == 0.3);
    const auto& amps = std::get<model::CustomState>(c.initial_state).amplitudes;
    CHECK(amps[1] == cplx(0.0, 0.3));
    CHECK(c.integrator.record_stride == 10);
    CHECK(c.p_weight == 0.25);

    // Round trip through the writer.
    const auto again = parse_config_text(to_config_text(c));
    CHECK(to_config_text(again) == to_config_text(c));
    const auto fig = preset("fig2b", 2);
    CHECK(to_config_text(parse_config_text(to_config_text(fig))) == to_config_text(fig));

    const fs::path path = scratch_dir() / "two.ini";
    std::ofstream(path) << kTwoQubitIni;
    CHECK(to_config_text(parse_config(path.string())) == to_config_text(c));
    REQUIRE_THROWS_AS(parse_config((scratch_dir() / "missing.ini").string()), ConfigError);
}

TEST_CASE("config errors carry diagnostics", "[runner][config]") {
    CHECK_THAT(config_error("[system]\nomegas = 1\nspeed = 3\n[bath.1]\ntype=markovian\nT=1\nkappa=1\n"),
               ContainsSubstring("test.ini:3") && ContainsSubstring("unknown key 'speed'"));
    CHECK_THAT(config_error("[system]\nomegas = 1, 2, 3, 4\n[bath.1]\ntype=markovian\nT=1\nkappa=1\n"
                            "[bath.2]\ntype=markovian\nT=1\nkappa=1\n[bath.3]\ntype=markovian\nT=1\nkappa=1\n"),
               ContainsSubstring("3 baths") && ContainsSubstring("4 qubits"));
    CHECK_THAT(config_error("[system]\nomegas = 1\n[bath.1]\ntype=markovian\nT=1\nkappa=1\n"
                            "[integrator]\ndt = 0\n"),
               ContainsSubstring("dt must be positive"));
    CHECK_THAT(config_error("[system]\nomegas = 1\n[bath.1]\ntype=markovian\nT=abc\nkappa=1\n"),
               ContainsSubstring("test.ini:5") && ContainsSubstring("not a number"));
    CHECK_THAT(config_error("[system]\nomegas = 1\n[bath.2]\ntype=markovian\nT=1\nkappa=1\n"),
               ContainsSubstring("[bath.1] is missing"));
    CHECK_THAT(config_error("[system]\nomegas = 1\n[weather]\n"), ContainsSubstring("unknown section"));
    CHECK_THAT(config_error("[system]\nomegas = 1\nomegas = 2\n"), ContainsSubstring("duplicate key"));
    CHECK_THAT(config_error("[system]\nomegas = 1\n[bath.1]\ntype=ohmic\nT=1\n"),
               ContainsSubstring("markovian' or 'spin_star"));
}

TEST_CASE("overrides", "[runner][config]") {
    auto c = preset("fig2c");
    apply_overrides(c, {.n_spins = 2, .dt = 1e-3, .t_max = 1.0, .record_stride = 7, .p_weight = 0.0,
                        .eps_log = 1e-10});
    CHECK(std::get<model::SpinStarBath>(c.baths[3]).n_spins == 2);
    CHECK(c.integrator.dt == 1e-3);
    CHECK(c.integrator.t_max == 1.0);
    CHECK(c.integrator.record_stride == 7);
    CHECK(c.p_weight == 0.0);
    CHECK(c.eps_log == 1e-10);
    REQUIRE_THROWS_AS(apply_overrides(c, {.dt = -1.0}), ConfigError);
}

TEST_CASE("CSV schema", "[runner][csv]") {
    CHECK(csv_header(4) ==
          "t,E,S,dSdt,J_1,J_2,J_3,J_4,sigma,M_NM,Mbar_NM,spohn_margin,trace_err,min_eig,log_floored");
    thermo::ThermoRecord r;
    r.t = 0.1;
    r.currents = {1.0, 2.0};
    r.epr = 1.0 / 3.0;
    r.log_floored = true;
    const std::string row = csv_row(r);
    CHECK_THAT(row, ContainsSubstring("0.33333333333333331"));
    CHECK(row.back() == '1');
    CHECK(fields(row).size() == 4 + 2 + 7);
    std::ostringstream out;
    REQUIRE_THROWS_AS(write_csv(out, std::span(&r, 1), 3), DimensionError);
    CHECK(plot_script_path("/x/run.csv") == fs::path("/x/run_plot.py"));
    CHECK_THAT(plot_script("run.csv"), ContainsSubstring("Mbar_NM") && ContainsSubstring("run.csv"));
}

TEST_CASE("run writes the CSV and plot script", "[runner][run]") {
    auto c = parse_config_text(kTwoQubitIni);
    const fs::path csv = scratch_dir() / "two.csv";
    std::ostringstream log;
    CHECK(run(c, csv, log) == 0);
    const auto rows = lines_of(slurp(csv));
    REQUIRE(rows.size() == 1 + 51);
    CHECK(rows[0] == csv_header(2));
    double last_t = -1.0;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const auto f = fields(rows[k]);
        REQUIRE(f.size() == 13);
        CHECK(f[0] > last_t);
        last_t = f[0];
    }
    CHECK_THAT(last_t, WithinAbs(0.5, 1e-12));
    CHECK(fs::exists(plot_script_path(csv)));
    CHECK_THAT(log.str(), ContainsSubstring("wrote 51 samples"));

    c.integrator.t_max = 0.0;
    CHECK(run(c, csv, log) == 0);
    CHECK(lines_of(slurp(csv)).size() == 2);

    const std::string first = slurp(csv);
    CHECK(run(c, csv, log) == 0);
    CHECK(slurp(csv) == first);
}

TEST_CASE("run reports integration failures", "[runner][run]") {
    model::SimulationConfig c;
    c.system.omegas = {1.0};
    c.baths = {model::MarkovianBath{1.0, 50.0}};
    c.integrator = {0.5, 50.0, 1};
    std::ostringstream log;
    CHECK(run(c, scratch_dir() / "bad.csv", log) == 2);
    CHECK_THAT(log.str(), ContainsSubstring("last good time"));
}

TEST_CASE("violations are flagged", "[runner][violations]") {
    std::vector<thermo::ThermoRecord> recs(3);
    recs[0].epr = recs[0].spohn_margin = 2.0;
    recs[1].spohn_margin = -1.0;
    recs[2].spohn_margin = -1.0;
    recs[2].log_floored = true;
    recs[2].trace_error = 1e-6;
    auto v = find_violations(recs, false);
    REQUIRE(v.size() == 2);
    CHECK(v[0].row == 1);
    CHECK_THAT(v[0].what, ContainsSubstring("Spohn"));
    CHECK(v[1].row == 2);
    CHECK_THAT(v[1].what, ContainsSubstring("trace"));

    std::vector<thermo::ThermoRecord> m(1);
    m[0].quantifier = 1e-3;
    CHECK(find_violations(m, true).size() == 1);
    CHECK(find_violations(m, false).empty());
}

TEST_CASE("all_markov: zero quantifier and non-negative EPR", "[runner][run]") {
    const auto result = simulate(preset("all_markov"));
    REQUIRE_FALSE(result.error);
    REQUIRE(result.records.size() == 5001);
    for (const auto& r : result.records) {
        CHECK(r.quantifier == 0.0);
        CHECK(r.spohn_margin == r.epr);
    }
    CHECK(result.violations.empty());
}

TEST_CASE("verify suite", "[runner][verify]") {
    auto c = preset("fig2a");
    const auto report = verify(c);
    CHECK(report.passed());
    CHECK_THAT(report.t_max, WithinAbs(2.0, 1e-12));
    CHECK(report.samples == 201);
    for (const char* name : {"closure", "p_invariance", "current_additivity", "epr_two_form",
                             "witness_commutator_invariance", "spohn_margin", "quantifier_bounds",
                             "density_matrix_sanity", "detailed_balance"}) {
        const CheckResult* r = report.find(name);
        REQUIRE(r);
        CHECK(r->passed);
    }
    const auto json = report.to_json();
    CHECK(json["passed"] == true);
    CHECK(json["checks"].size() == 9);

    const auto corrupt = verify(c, {.t_max = 0.2, .corrupt_rate_sign = true});
    CHECK_FALSE(corrupt.passed());
    REQUIRE(corrupt.find("detailed_balance"));
    CHECK_FALSE(corrupt.find("detailed_balance")->passed);
    CHECK(corrupt.find("closure")->passed);

    const auto markov = verify(preset("all_markov"), {.t_max = 1.0});
    CHECK(markov.passed());
    CHECK(markov.find("spohn_margin")->passed);
}

TEST_CASE("command-line front end", "[runner][cli]") {
    const char* cli = std::getenv("MIXEDBATH_CLI");
    if (!cli) SKIP("MIXEDBATH_CLI not set");
    const fs::path csv = scratch_dir() / "cli.csv";
    const std::string sim = std::string(cli) + " simulate fig2a --out " + csv.string() +
                            " --t-max 0.2 --stride 10 2>/dev/null";
    CHECK(std::system(sim.c_str()) == 0);
    CHECK(lines_of(slurp(csv)).size() == 1 + 101);
    const std::string ver = std::string(cli) + " verify all_markov --horizon 0.2 > /dev/null";
    CHECK(std::system(ver.c_str()) == 0);
    const std::string bad = std::string(cli) + " simulate nope --out x.csv 2>/dev/null";
    CHECK(std::system(bad.c_str()) != 0);
}
