// include/spdot/errors.hpp

// Copyright 2026  The spdot Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include <Eigen/Core>

namespace spdot {

enum class ErrorKind {
  kInvalidInput,
  kNotPositiveDefinite,
  kNumericalFailure,
  kConvergenceFailure,
  kUnsupportedInstance,
  kDegeneratePlan,
};

std::string_view to_string(ErrorKind kind);

/// Base of every exception thrown by the library. The kind is the stable
/// classification; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what)
      : Error(ErrorKind::kInvalidInput, what) {}
};

class NotPositiveDefinite : public Error {
 public:
  explicit NotPositiveDefinite(const std::string& what)
      : Error(ErrorKind::kNotPositiveDefinite, what) {}
};

class NumericalFailure : public Error {
 public:
  explicit NumericalFailure(const std::string& what)
      : Error(ErrorKind::kNumericalFailure, what) {}
};

class UnsupportedInstance : public Error {
 public:
  explicit UnsupportedInstance(const std::string& what)
      : Error(ErrorKind::kUnsupportedInstance, what) {}
};

class DegeneratePlan : public Error {
 public:
  explicit DegeneratePlan(const std::string& what)
      : Error(ErrorKind::kDegeneratePlan, what) {}
};

/// Raised by iterative solvers that run out of iterations. Carries the last
/// iterate (a mean, a scaling vector or a plan depending on the solver) and
/// the residual that failed the stopping test.
class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(const std::string& what, Eigen::MatrixXd last_iterate,
                     double residual, int iterations)
      : Error(ErrorKind::kConvergenceFailure, what),
        last_iterate_(std::move(last_iterate)),
        residual_(residual),
        iterations_(iterations) {}

  const Eigen::MatrixXd& last_iterate() const noexcept { return last_iterate_; }
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  Eigen::MatrixXd last_iterate_;
  double residual_;
  int iterations_;
};

/// An error raised inside the adaptation pipeline, tagged with the step that
/// produced it. kind() is the kind of the underlying failure.
class PipelineError : public Error {
 public:
  PipelineError(std::string step, const Error& cause)
      : Error(cause.kind(), step + ": " + cause.what()), step_(std::move(step)) {}

  const std::string& step() const noexcept { return step_; }

 private:
  std::string step_;
};

}  // namespace spdot
