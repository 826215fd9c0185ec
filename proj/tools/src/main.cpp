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


#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "qecsense/parallel.hpp"
#include "table.hpp"

namespace {

using nlohmann::json;
using namespace qecsense::cli;

struct Common {
  std::string config_path;
  std::string seed;
  std::string out;
  std::string format;
  unsigned workers = qecsense::default_workers();
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "RunConfig JSON file")->check(CLI::ExistingFile);
  sub->add_option("--seed", c.seed, "RNG seed (overrides QEC_SENSE_SEED and the config file)");
  sub->add_option("--out", c.out, "output path, '-' for stdout");
  sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
}

// Flag text becomes a JSON number or boolean when it parses as one.
json flag_value(const std::string& text) {
  try {
    json v = json::parse(text);
    if (v.is_number() || v.is_boolean()) return v;
  } catch (const json::parse_error&) {
  }
  return text;
}

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("QEC_SENSE_SEED");
  if (!s || !*s) return std::nullopt;
  return parse_seed(s);
}

json overrides_from(const Common& c, const std::map<std::string, std::string>& values, CLI::App* sub,
                    const std::vector<FlagSpec>& flags) {
  json o = json::object();
  for (const auto& f : flags)
    if (sub->get_option("--" + f.name)->count()) o[json::json_pointer(f.pointer)] = flag_value(values.at(f.name));
  if (!c.seed.empty()) o["seed"] = parse_seed(c.seed);
  if (!c.out.empty()) o["output_path"] = c.out;
  if (!c.format.empty()) o["format"] = c.format;
  return o;
}

int execute(const std::string& command, const json& file, const json& overrides, unsigned workers) {
  const json cfg = resolve_config(command, file, overrides, env_seed());
  const auto result = run_command(cfg, workers);
  for (const auto& w : result.warnings) std::cerr << "qec-sense: warning: " << w << "\n";
  const Format fmt = parse_format(cfg.at("format").get<std::string>());
  write_output(cfg.at("output_path").get<std::string>(), render(result.table, fmt));
  return 0;
}

json load_config(const std::string& path) {
  if (path.empty()) return nullptr;
  return json::parse(read_file(path));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qec-sense: bias in error-corrected Ramsey sensing"};
  app.require_subcommand(1);
  app.set_version_flag("--version", QECSENSE_VERSION_STRING);

  Common common;
  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, CLI::App*> subs;
  for (const auto& name : command_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " computation");
    add_common(sub, common);
    for (const auto& f : command_flags(name))
      sub->add_option("--" + f.name, values[name][f.name], f.pointer + " (" + f.help + ")");
    subs[name] = sub;
  }

  CLI::App* run = app.add_subcommand("run", "run the command named in a config file (figure recipes)");
  add_common(run, common);
  run->get_option("--config")->required();

  std::string in_path;
  CLI::App* reformat = app.add_subcommand("reformat", "parse an artifact and write it again");
  reformat->add_option("input", in_path, "artifact to read")->required()->check(CLI::ExistingFile);
  reformat->add_option("--out", common.out, "output path, '-' for stdout");
  reformat->add_option("--format", common.format, "csv or json (default: same as input)")
      ->check(CLI::IsMember({"csv", "json"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (reformat->parsed()) {
      const std::string text = read_file(in_path);
      const Table t = parse_table(text);
      const auto first = text.find_first_not_of(" \t\r\n");
      const Format in_fmt = first != std::string::npos && text[first] == '{' ? Format::json : Format::csv;
      const Format fmt = common.format.empty() ? in_fmt : parse_format(common.format);
      write_output(common.out.empty() ? "-" : common.out, render(t, fmt));
      return 0;
    }
    if (run->parsed()) {
      const json file = load_config(common.config_path);
      if (!file.contains("command") || !file.at("command").is_string())
        throw std::invalid_argument("config file has no \"command\" entry");
      return execute(file.at("command").get<std::string>(), file, overrides_from(common, {}, run, {}),
                     common.workers);
    }
    for (const auto& [name, sub] : subs) {
      if (!sub->parsed()) continue;
      return execute(name, load_config(common.config_path),
                     overrides_from(common, values[name], sub, command_flags(name)), common.workers);
    }
  } catch (const std::exception& e) {
    std::cerr << "qec-sense: error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
