// Copyright 2026 The qec-sense Authors
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


#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "commands.hpp"
#include "table.hpp"

using namespace qecsense::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "qecsense_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(QECSENSE_CLI_PATH) + " " + args + " 2>" + scratch("stderr.txt").string();
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

CommandResult run(std::string_view command, const json& overrides = json::object()) {
  return run_command(resolve_config(command, nullptr, overrides, std::nullopt), 1);
}

json summary_of(const Table& t) {
  for (const auto& m : t.metadata)
    if (m.contains("summary")) return m.at("summary");
  return nullptr;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2000.0) == "2000");
  CHECK(format_double(-0.0) == "-0");
  CHECK(format_double(1e-300) == "1e-300");
  CHECK(format_double(INFINITY) == "inf");
}

TEST_CASE("csv quoting round trip") {
  Table t;
  t.metadata.push_back(json{{"k", "v,\"w\""}});
  t.columns = {"a", "b,c"};
  t.add_row({1.5, std::string("x \"y\", z")});
  t.add_row({-INFINITY, std::string("3.5")});
  t.add_row({0.0, std::string("")});
  const std::string csv = to_csv(t);
  CHECK(csv.find("\"b,c\"") != std::string::npos);
  const Table back = parse_csv(csv);
  CHECK(back.columns == t.columns);
  CHECK(std::get<std::string>(back.rows[0][1]) == "x \"y\", z");
  CHECK(std::get<std::string>(back.rows[1][1]) == "3.5");
  CHECK(std::isinf(std::get<double>(back.rows[1][0])));
  CHECK(to_csv(back) == csv);
  const std::string js = to_json(t);
  CHECK(to_json(parse_json(js)) == js);
  CHECK(to_csv(parse_table(js)) == csv);
  CHECK_THROWS(t.add_row({1.0}));
  CHECK_THROWS(parse_csv("a,b\n1\n"));
}

TEST_CASE("config resolution") {
  const json d = resolve_config("ramsey", nullptr, json::object(), std::nullopt);
  CHECK(d.at("seed") == kDefaultSeed);
  CHECK(d.at("/grid/n_points"_json_pointer) == 2000);
  CHECK(resolve_config("ramsey", nullptr, json::object(), 17).at("seed") == 17);
  CHECK(resolve_config("ramsey", json{{"seed", 5}}, json::object(), 17).at("seed") == 5);
  CHECK(resolve_config("ramsey", json{{"seed", 5}}, json{{"seed", 6}}, 17).at("seed") == 6);
  CHECK_THROWS(resolve_config("ramsey", json{{"params", {{"gama", 1}}}}, nullptr, std::nullopt));
  CHECK_THROWS(resolve_config("ramsey", json{{"params", {{"gamma_err", "x"}}}}, nullptr, std::nullopt));
  CHECK_THROWS(resolve_config("ramsey", json{{"command", "fit"}}, nullptr, std::nullopt));
  CHECK_THROWS(resolve_config("nope", nullptr, nullptr, std::nullopt));
  CHECK_THROWS(parse_seed("12x"));
  CHECK(parse_seed("18446744073709551615") == UINT64_MAX);
  bool found = false;
  for (const auto& f : command_flags("spectrum")) found |= f.name == "window" && f.pointer == "/options/window";
  CHECK(found);
}

TEST_CASE("ramsey columns and embedded config") {
  const auto r = run("ramsey");
  const Table& t = r.table;
  REQUIRE(t.rows.size() == 2000);
  CHECK(t.columns == std::vector<std::string>{"tau", "ideal", "uncorrected", "corrected_sim", "corrected_analytic",
                                              "conjectured"});
  CHECK(t.metadata.front().at("config").at("command") == "ramsey");
  const auto tau = t.numeric_column("tau");
  const auto ideal = t.numeric_column("ideal");
  for (std::size_t i = 0; i < tau.size(); ++i) REQUIRE(std::abs(ideal[i] - std::cos(3.0 * tau[i])) < 1e-13);
  CHECK(summary_of(t).at("rmse_corrected_sim_vs_analytic").get<double>() < 0.002);
}

TEST_CASE("spectrum peaks") {
  const auto s = summary_of(run("spectrum").table);
  const double ideal = s.at("/peaks/ideal/freq"_json_pointer);
  const double corrected = s.at("/peaks/corrected/freq"_json_pointer);
  const double unc = s.at("/peaks/ideal/uncertainty"_json_pointer);
  CHECK(std::abs(ideal - 3.0) <= unc);
  CHECK(s.at("corrected_below_ideal") == true);
  CHECK(s.at("uncorrected_below_ideal") == false);
  CHECK(std::abs(corrected - 2.88) < 0.03);
  const auto hann = summary_of(run("spectrum", json{{"options", {{"window", "hann"}}}}).table);
  CHECK(std::abs(hann.at("/peaks/uncorrected/freq"_json_pointer).get<double>() - 2.985) < 0.005);
}

TEST_CASE("sensitivity summary") {
  const auto r = run("sensitivity");
  const auto s = summary_of(r.table);
  CHECK(s.at("k_opt") == 3);
  CHECK(s.at("tau_opt").get<double>() == doctest::Approx(M_PI / 2));
  CHECK(s.at("proposed_matches_tau_opt") == true);
  CHECK(s.at("above_sql") == true);
}

TEST_CASE("validity grid") {
  const auto t = run("validity", json{{"options", {{"gamma_err_points", 2}, {"gamma_qec_points", 3}}}}).table;
  CHECK(t.rows.size() == 6);
  CHECK(t.columns == std::vector<std::string>{"gamma_err", "gamma_qec", "margin", "valid"});
  const auto one = run("validity", json{{"options",
                                         {{"gamma_err_min", 0.1}, {"gamma_err_max", 0.2}, {"gamma_err_points", 1},
                                          {"gamma_qec_min", 0.1}, {"gamma_qec_max", 5.0}, {"gamma_qec_points", 2}}}})
                       .table;
  CHECK(one.text_column("valid") == std::vector<std::string>{"false", "true"});
}

TEST_CASE("compare kinds") {
  const auto t = run("compare", json{{"options", {{"gamma_qec_points", 3}, {"kind", "full_reduced"}}}}).table;
  CHECK(t.rows.size() == 9);
  const auto rmse = t.numeric_column("rmse");
  const auto mx = t.numeric_column("max_abs");
  for (std::size_t i = 0; i < rmse.size(); ++i) CHECK(rmse[i] <= mx[i]);
  CHECK_THROWS(run("compare", json{{"options", {{"kind", "bogus"}}}}));
  const auto f = run("compare", json{{"options", {{"kind", "frequency"}, {"gamma_qec_points", 2}, {"order", 3},
                                                  {"gamma_qec_min", 5.0}, {"gamma_qec_max", 20.0}}}})
                     .table;
  for (double d : f.numeric_column("rmse")) CHECK(d < 0.01);
}

TEST_CASE("discrete columns") {
  const auto r = run("discrete", json{{"options", {{"p", 0.0}}}});
  const auto& t = r.table;
  CHECK(t.columns.back() == "unbiased_reconstruction");
  CHECK(t.rows.size() == 101);
  const auto ideal = t.numeric_column("ideal");
  const auto cor = t.numeric_column("corrected");
  for (std::size_t i = 0; i < ideal.size(); ++i) CHECK(std::abs(ideal[i] - cor[i]) < 1e-12);
  const auto real = run("discrete", json{{"options", {{"noise", "realistic"}, {"p", 0.02}}}});
  CHECK(real.warnings.size() == 1);
}

TEST_CASE("binary: exit codes, atomic output, round trip") {
  const auto out = scratch("fig1b.csv");
  fs::remove(out);
  REQUIRE(run_cli("run --config " + std::string(QECSENSE_RECIPES_DIR) + "/fig1b.json --out " + out.string()) == 0);
  const std::string first = read_file(out);
  CHECK(parse_csv(first).rows.size() == 2000);

  const auto again = scratch("again.csv");
  REQUIRE(run_cli("reformat " + out.string() + " --out " + again.string()) == 0);
  CHECK(read_file(again) == first);
  const auto js = scratch("fig1b.json");
  REQUIRE(run_cli("reformat " + out.string() + " --format json --out " + js.string()) == 0);
  const auto js2 = scratch("fig1b2.json");
  REQUIRE(run_cli("reformat " + js.string() + " --out " + js2.string()) == 0);
  CHECK(read_file(js2) == read_file(js));
  REQUIRE(run_cli("reformat " + js.string() + " --format csv --out " + again.string()) == 0);
  CHECK(read_file(again) == first);

  // A failing run leaves the previous artifact untouched.
  CHECK(run_cli("ramsey --gamma-err -1 --out " + out.string()) == 1);
  CHECK(read_file(out) == first);
  CHECK(read_file(scratch("stderr.txt")).find("error") != std::string::npos);
  CHECK(run_cli("ramsey --no-such-flag") != 0);
  CHECK(run_cli("discrete --noise sideways") == 1);

  // Seeds: environment default, flag override, recorded in the output.
  const auto fit = scratch("fit.csv");
  const std::string small = "fit --tau-points 1 --tau-min 3 --tau-max 3 --repetitions 100 --shots 400 --out ";
  setenv("QEC_SENSE_SEED", "77", 1);
  const int rc = run_cli(small + fit.string());
  unsetenv("QEC_SENSE_SEED");
  REQUIRE(rc == 0);
  CHECK(parse_csv(read_file(fit)).metadata.front().at("/config/seed"_json_pointer) == 77);
  REQUIRE(run_cli(small + fit.string() + " --seed 78") == 0);
  CHECK(parse_csv(read_file(fit)).metadata.front().at("/config/seed"_json_pointer) == 78);
}

TEST_CASE("every recipe resolves") {
  for (const auto& e : fs::directory_iterator(QECSENSE_RECIPES_DIR)) {
    const json file = json::parse(read_file(e.path()));
    CAPTURE(e.path().string());
    CHECK_NOTHROW(resolve_config(file.at("command").get<std::string>(), file, json::object(), std::nullopt));
  }
}
