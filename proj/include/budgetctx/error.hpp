// Copyright 2026 The budgetctx Authors.
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

#ifndef BUDGETCTX_ERROR_HPP_
#define BUDGETCTX_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace budgetctx {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad caller input or configuration. The CLI maps this family to exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class EmptyDocumentError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Array sizes that must agree do not (features vs. units, non-square kernel).
class ShapeMismatchError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class UnknownMetricError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Malformed corpus or report input. Carries the 1-based line when known.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, long line = 0)
      : ValidationError(what), line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

// All embeddings are zero, so no relevance target exists.
class DegenerateFeaturesError : public Error {
 public:
  using Error::Error;
};

// A bordered Cholesky pivot was not positive: the kernel is not PSD.
class NumericalBreakdownError : public Error {
 public:
  using Error::Error;
};

class IncompleteSweepError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// External embedding / generation service failures. Exit code 3 in the CLI.
class ServiceError : public Error {
 public:
  using Error::Error;
};

class TransportError : public ServiceError {
 public:
  using ServiceError::ServiceError;
};

class HttpStatusError : public ServiceError {
 public:
  HttpStatusError(const std::string& what, int status)
      : ServiceError(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

class DimensionMismatchError : public ServiceError {
 public:
  using ServiceError::ServiceError;
};

}  // namespace budgetctx

#endif  // BUDGETCTX_ERROR_HPP_
