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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace interplay {

// Base of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value lies outside its permitted parameter domain (E <= 0, nu out of range, ...).
class ParameterDomainError : public Error {
 public:
  using Error::Error;
};

// Text input failed to parse. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, std::size_t column,
             const std::string& message)
      : Error(source + ":" + std::to_string(line) +
              (column > 0 ? ":" + std::to_string(column) : std::string()) +
              ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Configuration parsed but is semantically invalid.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Two objects that must agree in shape do not.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Simulation failure tied to one particle (out of domain, inverted F_E).
class SimulationError : public Error {
 public:
  SimulationError(const std::string& message, std::size_t particle)
      : Error(message), particle_(particle) {}
  std::size_t particle() const { return particle_; }

 private:
  std::size_t particle_;
};

class OutOfDomainError : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

class InversionError : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

// Time step violates the CFL bound.
class CflError : public Error {
 public:
  using Error::Error;
};

// Planner service could not be reached.
class TransportError : public Error {
 public:
  using Error::Error;
};

// Planner service reply does not follow the expected output format.
class FormatError : public Error {
 public:
  FormatError(const std::string& message, std::string raw_response)
      : Error(message), raw_response_(std::move(raw_response)) {}
  const std::string& raw_response() const { return raw_response_; }

 private:
  std::string raw_response_;
};

}  // namespace interplay
