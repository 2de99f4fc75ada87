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

#include "interplay/materials.hpp"

#include <cmath>
#include <sstream>

#include "interplay/errors.hpp"

namespace interplay {

namespace {

std::string format_value(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Range checks shared by lame_from_elastic and validate_material.
void check_elastic_domain(double young_modulus, double poisson_ratio,
                          std::vector<std::string>& out) {
  if (!std::isfinite(young_modulus) || young_modulus <= 0.0) {
    out.push_back("young_modulus must be > 0 (got " + format_value(young_modulus) + ")");
  }
  if (!std::isfinite(poisson_ratio) || poisson_ratio <= kPoissonMin) {
    out.push_back("poisson_ratio must be > " + format_value(kPoissonMin) + " (got " +
                  format_value(poisson_ratio) + ")");
  } else if (poisson_ratio >= kPoissonMax) {
    out.push_back("poisson_ratio must be < " + format_value(kPoissonMax) + " (got " +
                  format_value(poisson_ratio) + ")");
  }
}

bool relative_close(double value, double expected, double tol) {
  const double scale = std::max(std::abs(expected), std::abs(value));
  if (scale == 0.0) return true;
  return std::abs(value - expected) <= tol * scale;
}

}  // namespace

LameParameters lame_from_elastic(double young_modulus, double poisson_ratio) {
  std::vector<std::string> violations;
  check_elastic_domain(young_modulus, poisson_ratio, violations);
  if (!violations.empty()) {
    std::string message = violations.front();
    for (std::size_t i = 1; i < violations.size(); ++i) message += "; " + violations[i];
    throw ParameterDomainError(message);
  }
  const double e = young_modulus;
  const double nu = poisson_ratio;
  return {e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)), e / (2.0 * (1.0 + nu))};
}

ElasticParameters elastic_from_lame(double lambda, double mu) {
  return {mu * (3.0 * lambda + 2.0 * mu) / (lambda + mu), lambda / (2.0 * (lambda + mu))};
}

MaterialParams MaterialParams::from_elastic(double young_modulus, double poisson_ratio,
                                            double viscosity, double density) {
  MaterialParams p;
  p.young_modulus_ = young_modulus;
  p.poisson_ratio_ = poisson_ratio;
  p.viscosity_ = viscosity;
  p.density_ = density;

  std::vector<std::string> violations;
  check_elastic_domain(young_modulus, poisson_ratio, violations);
  if (violations.empty()) {
    const LameParameters lame = lame_from_elastic(young_modulus, poisson_ratio);
    p.lame_lambda_ = lame.lambda;
    p.lame_mu_ = lame.mu;
  }
  MaterialDiagnostic diag = validate_material(p);
  if (!diag.ok()) throw ParameterDomainError("invalid material: " + diag.to_string());
  return p;
}

MaterialParams MaterialParams::unchecked(double young_modulus, double poisson_ratio,
                                         double lame_lambda, double lame_mu,
                                         double viscosity, double density) {
  MaterialParams p;
  p.young_modulus_ = young_modulus;
  p.poisson_ratio_ = poisson_ratio;
  p.lame_lambda_ = lame_lambda;
  p.lame_mu_ = lame_mu;
  p.viscosity_ = viscosity;
  p.density_ = density;
  return p;
}

double MaterialParams::wave_speed() const {
  return std::sqrt((lame_lambda_ + 2.0 * lame_mu_) / density_);
}

std::string MaterialDiagnostic::to_string() const {
  if (violations.empty()) return "ok";
  std::string s;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i > 0) s += "; ";
    s += violations[i];
  }
  return s;
}

MaterialDiagnostic validate_material(const MaterialParams& p) {
  MaterialDiagnostic diag;
  check_elastic_domain(p.young_modulus(), p.poisson_ratio(), diag.violations);
  if (!std::isfinite(p.density()) || p.density() <= 0.0) {
    diag.violations.push_back("density must be > 0 (got " + format_value(p.density()) + ")");
  }
  if (!std::isfinite(p.viscosity()) || p.viscosity() < 0.0) {
    diag.violations.push_back("viscosity must be >= 0 (got " + format_value(p.viscosity()) +
                              ")");
  }
  // The coupling is only meaningful when (E, nu) are in range.
  if (std::isfinite(p.young_modulus()) && p.young_modulus() > 0.0 &&
      p.poisson_ratio() > kPoissonMin && p.poisson_ratio() < kPoissonMax) {
    const LameParameters expected = lame_from_elastic(p.young_modulus(), p.poisson_ratio());
    if (!relative_close(p.lame_lambda(), expected.lambda, kCouplingTolerance)) {
      diag.violations.push_back("lame_lambda violates coupling with (E, nu): stored " +
                                format_value(p.lame_lambda()) + ", expected " +
                                format_value(expected.lambda));
    }
    if (!relative_close(p.lame_mu(), expected.mu, kCouplingTolerance)) {
      diag.violations.push_back("lame_mu violates coupling with (E, nu): stored " +
                                format_value(p.lame_mu()) + ", expected " +
                                format_value(expected.mu));
    }
  }
  return diag;
}

const MaterialParams* PartMaterialMap::find(PartLabel part) const {
  auto it = entries_.find(part);
  return it == entries_.end() ? nullptr : &it->second;
}

const MaterialParams& PartMaterialMap::at(PartLabel part) const {
  const MaterialParams* p = find(part);
  if (p == nullptr) throw ConfigError("no material bound to part " + std::to_string(part));
  return *p;
}

bool PartMaterialMap::is_dense() const {
  PartLabel expected = 0;
  for (const auto& [label, _] : entries_) {
    if (label != expected) return false;
    ++expected;
  }
  return true;
}

PartMaterialMap assign_part_material(PartMaterialMap map, PartLabel part,
                                     const MaterialParams& params) {
  if (part < 0) throw ParameterDomainError("part label must be >= 0");
  MaterialDiagnostic diag = validate_material(params);
  if (!diag.ok()) {
    throw ParameterDomainError("material for part " + std::to_string(part) +
                               " rejected: " + diag.to_string());
  }
  map.entries_.insert_or_assign(part, params);
  return map;
}

}  // namespace interplay
