// Copyright 2026 The Interplay Authors
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

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "interplay/pipeline.hpp"

int main(int argc, char** argv) {
  using interplay::Mode;
  CLI::App app{"interplay: simulation and inpainting composition engine"};
  app.set_version_flag("--version", std::string(interplay::kVersion));
  app.require_subcommand(1);

  interplay::PipelineConfig cfg;
  std::string config;
  std::string out = "out";
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  bool offline = false;
  int frames = 0;
  int steps = 0;
  std::string denoiser;
  std::string composite;
  std::string mask;
  std::string reference;
  int part = -1;
  int iterations = -1;
  double step_size = 0.0;

  auto common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config,config", config, "scene config file");
    if (needs_config) opt->required();
    sub->add_option("--out", out, "output directory")->capture_default_str();
    sub->add_option("--set", overrides, "override block.key=value (repeatable)");
    sub->add_option("--seed", seed, "random seed")->capture_default_str();
  };

  auto* plan = app.add_subcommand("plan", "route a scenario and write plan.txt");
  common(plan, true);
  plan->add_flag("--offline", offline, "use the rule engine even when a service is configured");

  auto* simulate = app.add_subcommand("simulate", "run the MPM scene and export the trajectory");
  common(simulate, true);

  auto* optimize = app.add_subcommand("optimize", "fit material parameters to a reference run");
  common(optimize, true);
  optimize->add_option("--reference", reference, "reference trajectory directory");
  optimize->add_option("--part", part, "part label to optimize");
  optimize->add_option("--iterations", iterations, "gradient steps");
  optimize->add_option("--step-size", step_size, "gradient step size");

  auto* inpaint = app.add_subcommand("inpaint", "masked video inpainting of a composite");
  common(inpaint, false);
  inpaint->add_option("--composite", composite, "composite PNG");
  inpaint->add_option("--mask", mask, "mask PNG (255 = keep)");
  inpaint->add_option("--frames", frames, "frame count n");
  inpaint->add_option("--steps", steps, "sampling steps T");
  inpaint->add_option("--denoiser", denoiser, "identity | linear-gaussian | drift")
      ->check(CLI::IsMember({"identity", "linear-gaussian", "drift"}));

  auto* pipeline = app.add_subcommand("pipeline", "plan, then simulate or inpaint");
  common(pipeline, true);
  pipeline->add_flag("--offline", offline, "use the rule engine even when a service is configured");

  CLI11_PARSE(app, argc, argv);

  if (*plan) cfg.mode = Mode::kPlan;
  if (*simulate) cfg.mode = Mode::kSimulate;
  if (*optimize) cfg.mode = Mode::kOptimize;
  if (*inpaint) cfg.mode = Mode::kInpaint;
  if (*pipeline) cfg.mode = Mode::kPipeline;
  cfg.config_path = config;
  cfg.out_dir = out;
  cfg.overrides = overrides;
  cfg.seed = seed;
  cfg.offline = offline;
  cfg.composite = composite;
  cfg.mask = mask;
  if (frames > 0) cfg.frames = frames;
  if (steps > 0) cfg.steps = steps;
  if (!denoiser.empty()) cfg.denoiser = denoiser;
  cfg.reference = reference;
  if (part >= 0) cfg.part = part;
  if (iterations >= 0) cfg.iterations = iterations;
  if (step_size > 0.0) cfg.step_size = step_size;

  const interplay::PipelineResult result = interplay::run_pipeline(cfg);
  if (result.exit_code != 0) {
    std::cerr << "interplay " << interplay::to_string(cfg.mode) << ": " << result.error << "\n";
  } else {
    std::cout << "wrote " << result.manifest_path.string() << "\n";
  }
  return result.exit_code;
}
