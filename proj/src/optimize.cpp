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

#include "interplay/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "interplay/parallel.hpp"

namespace interplay {

namespace {

constexpr double kPoissonGuard = 1e-6;

}  // namespace

OptimizableParams OptimizableParams::from_scene(const Scene& scene,
                                                std::span<const PartLabel> parts,
                                                FreeCoordinates free) {
  OptimizableParams out;
  out.free = free;
  for (PartLabel label : parts) {
    const MaterialParams& m = scene.materials.at(label);
    PartParameters pp;
    pp.part = label;
    pp.log_young_modulus = std::log(m.young_modulus());
    pp.poisson_ratio = m.poisson_ratio();
    pp.log_viscosity = m.viscosity() > 0.0 ? std::log(m.viscosity())
                                           : -std::numeric_limits<double>::infinity();
    out.parts.push_back(pp);
  }
  return out;
}

std::size_t OptimizableParams::dimension() const {
  const std::size_t per_part = static_cast<std::size_t>(free.young_modulus) +
                               static_cast<std::size_t>(free.poisson_ratio) +
                               static_cast<std::size_t>(free.viscosity);
  return per_part * parts.size();
}

std::vector<double> OptimizableParams::to_vector() const {
  std::vector<double> v;
  v.reserve(dimension());
  for (const PartParameters& p : parts) {
    if (free.young_modulus) v.push_back(p.log_young_modulus);
    if (free.poisson_ratio) v.push_back(p.poisson_ratio);
    if (free.viscosity) v.push_back(p.log_viscosity);
  }
  return v;
}

void OptimizableParams::assign(std::span<const double> values) {
  if (values.size() != dimension()) {
    throw ShapeError("parameter vector has " + std::to_string(values.size()) +
                     " entries, expected " + std::to_string(dimension()));
  }
  std::size_t i = 0;
  for (PartParameters& p : parts) {
    if (free.young_modulus) p.log_young_modulus = values[i++];
    if (free.poisson_ratio) p.poisson_ratio = values[i++];
    if (free.viscosity) p.log_viscosity = values[i++];
  }
}

void OptimizableParams::validate() const {
  if (parts.empty()) throw ParameterDomainError("no parts selected for optimization");
  for (const PartParameters& p : parts) {
    const std::string who = "part " + std::to_string(p.part) + ": ";
    if (!std::isfinite(p.log_young_modulus)) {
      throw ParameterDomainError(who + "log_young_modulus must be finite");
    }
    if (!(p.poisson_ratio > kPoissonMin && p.poisson_ratio < kPoissonMax)) {
      throw ParameterDomainError(who + "poisson_ratio outside (" + std::to_string(kPoissonMin) +
                                 ", " + std::to_string(kPoissonMax) + ")");
    }
    if (free.viscosity && !std::isfinite(p.log_viscosity)) {
      throw ParameterDomainError(who +
                                 "viscosity must be > 0 to be optimized in log space");
    }
  }
}

Scene apply_params(const Scene& scene, const OptimizableParams& params) {
  Scene out = scene;
  for (const PartParameters& p : params.parts) {
    const MaterialParams& base = scene.materials.at(p.part);
    const double viscosity = params.free.viscosity ? std::exp(p.log_viscosity) : base.viscosity();
    const MaterialParams updated = MaterialParams::from_elastic(
        std::exp(p.log_young_modulus), p.poisson_ratio, viscosity, base.density());
    out.materials = assign_part_material(out.materials, p.part, updated);
  }
  return out;
}

double trajectory_loss(const Trajectory& simulated, const Trajectory& reference) {
  const auto shape = [](const Trajectory& t) {
    return std::to_string(t.frames.size()) + " frames x " + std::to_string(t.particle_count()) +
           " particles";
  };
  bool match = simulated.frames.size() == reference.frames.size();
  for (std::size_t f = 0; match && f < simulated.frames.size(); ++f) {
    match = simulated.frames[f].size() == reference.frames[f].size();
  }
  if (!match || simulated.frames.empty()) {
    throw ShapeError("trajectory shapes differ: simulated " + shape(simulated) + ", reference " +
                     shape(reference));
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t f = 0; f < simulated.frames.size(); ++f) {
    const ParticleSet& a = simulated.frames[f];
    const ParticleSet& b = reference.frames[f];
    for (std::size_t p = 0; p < a.size(); ++p) {
      sum += (a[p].position - b[p].position).squaredNorm();
    }
    count += a.size();
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

GuidanceObjective reference_trajectory_objective(Trajectory reference) {
  GuidanceObjective obj;
  obj.descriptor = "reference-trajectory MSE";
  obj.evaluate = [ref = std::move(reference)](const Trajectory& sim) {
    return trajectory_loss(sim, ref);
  };
  return obj;
}

std::vector<double> fd_gradient(const std::function<double(std::span<const double>)>& objective,
                                std::span<const double> x, std::span<const double> eps,
                                int threads) {
  if (eps.size() != x.size()) {
    throw ShapeError("eps has " + std::to_string(eps.size()) + " entries, x has " +
                     std::to_string(x.size()));
  }
  for (std::size_t k = 0; k < eps.size(); ++k) {
    if (!(eps[k] > 0.0)) throw ParameterDomainError("eps must be > 0 for every coordinate");
  }
  const std::size_t n = x.size();
  // Evaluation 2k is x + eps_k e_k, 2k + 1 is x - eps_k e_k.
  std::vector<double> values(2 * n);
  parallel_for(2 * n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t e = begin; e < end; ++e) {
      const std::size_t k = e / 2;
      std::vector<double> probe(x.begin(), x.end());
      probe[k] += (e % 2 == 0) ? eps[k] : -eps[k];
      values[e] = objective(probe);
    }
  });
  std::vector<double> grad(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(values[2 * k]) || !std::isfinite(values[2 * k + 1])) {
      throw Error("objective is not finite when perturbing coordinate " + std::to_string(k));
    }
    grad[k] = (values[2 * k] - values[2 * k + 1]) / (2.0 * eps[k]);
  }
  return grad;
}

OptimizeResult optimize_materials(const Scene& scene, const GuidanceObjective& objective,
                                  const OptimizableParams& init, const OptimizeConfig& config) {
  if (config.iterations < 0) throw ParameterDomainError("iterations must be >= 0");
  init.validate();
  OptimizableParams current = init;

  int iteration = 0;
  auto evaluate = [&](const OptimizableParams& params) {
    const Scene trial = apply_params(scene, params);
    if (config.on_evaluate) config.on_evaluate(iteration, trial);
    SimulationResult run = simulate(trial, config.sim_steps, config.dt, config.frame_stride);
    if (!run.ok()) {
      throw OptimizationError(
          "simulation failed at iteration " + std::to_string(iteration) + ": " + *run.failure,
          iteration);
    }
    return objective.evaluate(run.trajectory);
  };

  std::vector<double> eps;
  for (std::size_t p = 0; p < current.parts.size(); ++p) {
    if (current.free.young_modulus) eps.push_back(config.log_eps);
    if (current.free.poisson_ratio) eps.push_back(config.poisson_eps);
    if (current.free.viscosity) eps.push_back(config.log_eps);
  }
  const double nu_lo = kPoissonMin + config.poisson_eps + kPoissonGuard;
  const double nu_hi = kPoissonMax - config.poisson_eps - kPoissonGuard;

  OptimizeResult result;
  result.loss_history.push_back(evaluate(current));
  const double initial = result.loss_history.front();
  const double scale = (config.normalize_loss && initial > 0.0) ? 1.0 / initial : 1.0;
  for (iteration = 1; iteration <= config.iterations; ++iteration) {
    const std::vector<double> x = current.to_vector();
    const std::vector<double> grad = fd_gradient(
        [&](std::span<const double> probe) {
          OptimizableParams trial = current;
          trial.assign(probe);
          return evaluate(trial);
        },
        x, eps, config.threads);
    std::vector<double> next(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) next[k] = x[k] - config.step_size * scale * grad[k];
    current.assign(next);
    for (PartParameters& p : current.parts) {
      p.poisson_ratio = std::clamp(p.poisson_ratio, nu_lo, nu_hi);
    }
    result.loss_history.push_back(evaluate(current));
  }
  result.params = current;
  return result;
}

std::vector<std::filesystem::path> write_optimize_result(const std::filesystem::path& dir,
                                                         const OptimizeResult& result,
                                                         const Scene& scene,
                                                         const std::string& descriptor) {
  std::filesystem::create_directories(dir);
  const Scene final_scene = apply_params(scene, result.params);
  const auto result_path = dir / "result.txt";
  std::FILE* f = std::fopen(result_path.string().c_str(), "w");
  if (f == nullptr) throw ConfigError("cannot write " + result_path.string());
  std::fprintf(f, "objective = %s\n", descriptor.c_str());
  std::fprintf(f, "iterations = %zu\n", result.loss_history.size() - 1);
  std::fprintf(f, "initial_loss = %.17g\n", result.loss_history.front());
  std::fprintf(f, "final_loss = %.17g\n", result.loss_history.back());
  for (const PartParameters& p : result.params.parts) {
    const MaterialParams& m = final_scene.materials.at(p.part);
    std::fprintf(f, "part.%d.young_modulus = %.17g\n", p.part, m.young_modulus());
    std::fprintf(f, "part.%d.poisson_ratio = %.17g\n", p.part, m.poisson_ratio());
    std::fprintf(f, "part.%d.viscosity = %.17g\n", p.part, m.viscosity());
    std::fprintf(f, "part.%d.lame_lambda = %.17g\n", p.part, m.lame_lambda());
    std::fprintf(f, "part.%d.lame_mu = %.17g\n", p.part, m.lame_mu());
  }
  std::fclose(f);

  const auto loss_path = dir / "loss_history.csv";
  f = std::fopen(loss_path.string().c_str(), "w");
  if (f == nullptr) throw ConfigError("cannot write " + loss_path.string());
  std::fputs("iteration,loss\n", f);
  for (std::size_t i = 0; i < result.loss_history.size(); ++i) {
    std::fprintf(f, "%zu,%.17g\n", i, result.loss_history[i]);
  }
  std::fclose(f);
  return {result_path, loss_path};
}

}  // namespace interplay
