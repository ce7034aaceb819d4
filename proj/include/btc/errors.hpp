// Copyright 2026 The btc-magic Authors
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

#include <stdexcept>
#include <string>

namespace btc {

// Base for every error raised by the library. The CLI maps the
// subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters or configuration.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A numerical method left its domain of validity (step too large,
// impossible event, integrator failure, ...).
class ComputeError : public Error {
 public:
  using Error::Error;
};

// Raised when a stochastic or deterministic step is too large for the
// first-order update rule to be valid.
class StepSizeError : public ComputeError {
 public:
  StepSizeError(const std::string& what, double offending_value)
      : ComputeError(what), value_(offending_value) {}
  double value() const { return value_; }

 private:
  double value_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace btc
