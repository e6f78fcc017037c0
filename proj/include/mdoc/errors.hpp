// Copyright 2026 The mdoc Authors
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

namespace mdoc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

/// A trajectory or cost became non-finite during integration.
class NumericalBlowup : public Error {
 public:
  NumericalBlowup(const std::string& what, std::size_t node)
      : Error(what), node_(node) {}
  /// First grid node at which a non-finite value was produced.
  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

/// The inner prox solver of the mirror step did not reach its tolerance.
class ProxFailure : public Error {
 public:
  ProxFailure(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mdoc
