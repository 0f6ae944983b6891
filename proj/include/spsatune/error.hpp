// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace spsatune {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape problems: dimension mismatch, empty lists, duplicate names.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A value lies outside the domain an operation accepts.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// NaN or infinity where a finite number is required.
class NumericError : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

class TemplateError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration. `field()` is a JSON pointer to the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class CheckpointError : public Error {
 public:
  using Error::Error;
};

class IncompatibleVersionError : public CheckpointError {
 public:
  using CheckpointError::CheckpointError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Raised by the engine when the failure policy gives up on an evaluation.
class ObjectiveAbort : public Error {
 public:
  using Error::Error;
};

}  // namespace spsatune
