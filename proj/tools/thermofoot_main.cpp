// Copyright 2026 The thermofoot Authors
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
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "thermofoot/errors.hpp"
#include "thermofoot/pipeline/config.hpp"
#include "thermofoot/pipeline/stages.hpp"

namespace {

using thermo::pipeline::PipelineConfig;

PipelineConfig resolve_config(const std::string& config_path,
                              std::optional<std::uint64_t> seed,
                              const std::string& out_dir) {
  PipelineConfig cfg;
  if (!config_path.empty()) cfg = PipelineConfig::load(config_path);
  if (seed) {
    cfg.seed = *seed;
    cfg.synth.seed = *seed;
  }
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (const char* env = std::getenv("THERMOFOOT_OUT"); env && *env)
    cfg.out_dir = env;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thermofoot: plantar thermography clustering and risk-factor "
               "association pipeline"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string stage_only;
  app.add_option("--config", config_path, "Pipeline config JSON")
      ->envname("THERMOFOOT_CONFIG");
  app.add_option("--seed", seed, "Override the global seed");
  app.add_option("--out", out_dir, "Override the output directory");

  for (const auto& name : thermo::pipeline::stage_names())
    app.add_subcommand(name, "Run the " + name + " stage");
  auto* all = app.add_subcommand("run-all", "Run the full pipeline");
  all->add_option("--stage-only", stage_only,
                  "Run only this stage of the pipeline");
  auto* dump = app.add_subcommand("print-config",
                                  "Print the resolved config and exit");

  CLI11_PARSE(app, argc, argv);

  try {
    const PipelineConfig cfg = resolve_config(config_path, seed, out_dir);
    if (dump->parsed()) {
      std::cout << cfg.to_json_text();
      return 0;
    }
    for (const auto& name : thermo::pipeline::stage_names()) {
      if (app.get_subcommand(name)->parsed()) {
        thermo::pipeline::run_stage(name, cfg);
        return 0;
      }
    }
    if (all->parsed()) {
      if (!stage_only.empty())
        thermo::pipeline::run_stage(stage_only, cfg);
      else
        thermo::pipeline::run_all(cfg);
      return 0;
    }
  } catch (const thermo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const thermo::MissingPrerequisite& e) {
    std::cerr << "missing prerequisite: " << e.what() << "\n";
    return 1;
  } catch (const thermo::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
