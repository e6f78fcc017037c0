// Copyright 2026 The mdoc Authors
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

// Command-line runner for the benchmark experiments.
//
//   mdoc lq --tau 1 --lambda 30 --out results
//   mdoc highdim --dims 5,10,20 --seed 42
//   mdoc run --config experiment.json
//
// Exit status: 0 when every check passes, 1 when a check fails or a run
// errors, 2 for configuration errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mdoc/mdoc.h"

namespace {

using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfigError = 2;

struct Overrides {
  std::optional<double> tau;
  std::optional<double> lambda;
  std::optional<int> nt;
  std::optional<int> max_iters;
  std::vector<int> dims;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::string config_path;
  bool print_json = false;
};

void add_common_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--tau", o.tau, "Regularization weight tau");
  cmd->add_option("--lambda", o.lambda, "Step parameter lambda");
  cmd->add_option("--nt", o.nt, "Number of time steps");
  cmd->add_option("--max-iters", o.max_iters, "Maximum number of iterations");
  cmd->add_option("--dims", o.dims, "State dimensions for highdim, e.g. 5,10,20")
      ->delimiter(',');
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--config", o.config_path, "JSON config file; flags override its keys");
  cmd->add_flag("--json", o.print_json, "Print the summary JSON to stdout");
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  json j = json::parse(buffer.str());
  if (!j.is_object()) throw std::runtime_error("config file must hold a JSON object");
  return j;
}

int execute(const std::string& experiment, const Overrides& o) {
  json config;
  try {
    config = load_config(o.config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  if (!experiment.empty()) config["experiment"] = experiment;
  if (!config.contains("experiment")) {
    std::cerr << "error: config does not name an experiment\n";
    return kExitConfigError;
  }
  if (o.tau) config["tau"] = *o.tau;
  if (o.lambda) config["lambda"] = *o.lambda;
  if (o.nt) config["nt"] = *o.nt;
  if (o.max_iters) config["max_iters"] = *o.max_iters;
  if (!o.dims.empty()) config["dims"] = o.dims;
  if (o.seed) config["seed"] = *o.seed;
  if (o.out) config["output_dir"] = *o.out;

  char* summary_text = nullptr;
  int passed = 0;
  const mdoc_status status =
      mdoc_run_experiment(config.dump().c_str(), &summary_text, &passed);
  if (status != MDOC_OK) {
    std::cerr << "error (" << mdoc_status_string(status) << "): " << mdoc_last_error() << "\n";
    return status == MDOC_INVALID_ARGUMENT || status == MDOC_IO ? kExitConfigError
                                                                : kExitCheckFailed;
  }
  const json summary = json::parse(summary_text);
  mdoc_string_free(summary_text);

  if (o.print_json) {
    std::cout << summary.dump(2) << "\n";
  } else {
    for (const auto& run : summary["runs"]) {
      std::cout << "run " << run["label"].get<std::string>() << ": "
                << run["iterations"] << " iterations, final cost " << run["final_cost"]
                << ", " << run["termination"].get<std::string>();
      if (run.contains("error")) std::cout << ", error: " << run["error"].get<std::string>();
      std::cout << "\n";
    }
    for (const auto& check : summary["checks"]) {
      std::cout << (check["passed"].get<bool>() ? "PASS " : "FAIL ")
                << check["name"].get<std::string>() << " (worst " << check["worst"]
                << ", tolerance " << check["tolerance"] << ")\n";
    }
    for (const auto& warning : summary["warnings"]) {
      std::cout << "warning: " << warning.get<std::string>() << "\n";
    }
  }
  return passed ? kExitPass : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mirror-descent optimal control experiments"};
  app.require_subcommand(1);

  Overrides overrides;
  std::string chosen;
  for (const char* name : {"lq", "quartic", "highdim", "gradcheck", "custom"}) {
    auto* cmd = app.add_subcommand(name, std::string("Run the ") + name + " experiment");
    add_common_flags(cmd, overrides);
    cmd->callback([&chosen, name] { chosen = name; });
  }
  auto* run_cmd = app.add_subcommand("run", "Run the experiment named in a config file");
  add_common_flags(run_cmd, overrides);
  run_cmd->get_option("--config")->required();
  run_cmd->callback([&chosen] { chosen.clear(); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }
  return execute(chosen, overrides);
}
