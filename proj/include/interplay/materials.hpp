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

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace interplay {

using PartLabel = std::int32_t;

// Poisson ratio is restricted to this open interval. The upper bound keeps the
// (1 - 2 nu) denominator of the Lame closed form away from zero.
inline constexpr double kPoissonMin = -0.45;
inline constexpr double kPoissonMax = 0.49;

// Relative tolerance for the (E, nu) -> (lambda, mu) coupling check.
inline constexpr double kCouplingTolerance = 1e-12;

struct LameParameters {
  double lambda = 0.0;
  double mu = 0.0;
};

// Lame parameters from Young's modulus and Poisson ratio:
//   lambda = E nu / ((1 + nu)(1 - 2 nu)),  mu = E / (2 (1 + nu)).
// Throws ParameterDomainError for E <= 0 or nu outside (kPoissonMin, kPoissonMax).
LameParameters lame_from_elastic(double young_modulus, double poisson_ratio);

// Inverse map, used for round-trip checks.
struct ElasticParameters {
  double young_modulus = 0.0;
  double poisson_ratio = 0.0;
};
ElasticParameters elastic_from_lame(double lambda, double mu);

// Per-part physical parameters. lambda and mu are derived from (E, nu) and can
// not be set independently through the checked constructor.
class MaterialParams {
 public:
  // Validating constructor; throws ParameterDomainError listing every violation.
  static MaterialParams from_elastic(double young_modulus, double poisson_ratio,
                                     double viscosity, double density);

  // Stores the given fields verbatim, bypassing derivation. Only
  // validate_material can tell whether the result is usable.
  static MaterialParams unchecked(double young_modulus, double poisson_ratio,
                                  double lame_lambda, double lame_mu,
                                  double viscosity, double density);

  double young_modulus() const { return young_modulus_; }
  double poisson_ratio() const { return poisson_ratio_; }
  double lame_lambda() const { return lame_lambda_; }
  double lame_mu() const { return lame_mu_; }
  double viscosity() const { return viscosity_; }
  double density() const { return density_; }

  // Dilational wave speed sqrt((lambda + 2 mu) / rho).
  double wave_speed() const;

  bool operator==(const MaterialParams&) const = default;

 private:
  MaterialParams() = default;

  double young_modulus_ = 1.0;
  double poisson_ratio_ = 0.0;
  double lame_lambda_ = 0.0;
  double lame_mu_ = 0.5;
  double viscosity_ = 0.0;
  double density_ = 1.0;
};

struct MaterialDiagnostic {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

MaterialDiagnostic validate_material(const MaterialParams& params);

// Part label -> material. Labels present in a scene must be dense from 0.
class PartMaterialMap {
 public:
  const MaterialParams* find(PartLabel part) const;
  const MaterialParams& at(PartLabel part) const;
  bool contains(PartLabel part) const { return entries_.count(part) > 0; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // True when the labels are exactly {0, 1, ..., size() - 1}.
  bool is_dense() const;

  const std::map<PartLabel, MaterialParams>& entries() const { return entries_; }

  bool operator==(const PartMaterialMap&) const = default;

 private:
  friend PartMaterialMap assign_part_material(PartMaterialMap map, PartLabel part,
                                              const MaterialParams& params);
  std::map<PartLabel, MaterialParams> entries_;
};

// Returns a copy of `map` with `part` bound to `params`. Rejects invalid
// params with the validate_material diagnostic (ParameterDomainError).
PartMaterialMap assign_part_material(PartMaterialMap map, PartLabel part,
                                     const MaterialParams& params);

}  // namespace interplay
