// Copyright 2026 The se2ocp Authors
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
#include <vector>

namespace se2ocp {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configuration sits on or inside the pole of a collision or obstacle
/// potential.
class InfeasibleConfiguration : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a retraction inverse (Cayley pole at
/// a heading gap of pi).
class OutOfDomain : public Error {
 public:
  using Error::Error;
};

/// Continuous integration hit an infeasible configuration.
class StepRejected : public Error {
 public:
  StepRejected(std::size_t step, const std::string& what)
      : Error("step " + std::to_string(step) + ": " + what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

/// The per-step implicit solve did not reach its tolerance.
class NewtonDivergence : public Error {
 public:
  using Error::Error;
};

/// A forward sweep or residual evaluation failed at a given step.
class SweepFailed : public Error {
 public:
  SweepFailed(std::size_t step, const std::string& what)
      : Error("sweep failed at step " + std::to_string(step) + ": " + what),
        step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

struct ValidationIssue {
  std::string code;
  std::string message;
};

/// Carries every violated scenario invariant, each with a stable code.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<ValidationIssue> issues);
  const std::vector<ValidationIssue>& issues() const { return issues_; }
  bool has(const std::string& code) const;

 private:
  std::vector<ValidationIssue> issues_;
};

class IOError : public Error {
 public:
  using Error::Error;
};

}  // namespace se2ocp
