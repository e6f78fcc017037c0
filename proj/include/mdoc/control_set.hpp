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

#include <functional>
#include <variant>

#include <Eigen/Dense>

namespace mdoc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VecRef = Eigen::Ref<const Eigen::VectorXd>;

/// Closed convex set U of admissible control values.
class ControlSet {
 public:
  struct Unconstrained {};
  struct Box {
    Vector lower;
    Vector upper;
  };
  struct ConvexOracle {
    std::function<Vector(const Vector&)> projection;
  };

  /// U = R^m.
  ControlSet() = default;

  static ControlSet unconstrained() { return ControlSet{}; }
  /// Throws InvalidArgument unless lower <= upper componentwise.
  static ControlSet box(Vector lower, Vector upper);
  static ControlSet oracle(std::function<Vector(const Vector&)> projection);

  bool is_unconstrained() const { return std::holds_alternative<Unconstrained>(set_); }
  bool is_box() const { return std::holds_alternative<Box>(set_); }
  bool is_oracle() const { return std::holds_alternative<ConvexOracle>(set_); }
  const Box& as_box() const { return std::get<Box>(set_); }

  /// Euclidean projection onto U.
  Vector project(const Vector& v) const;

  /// True when |v - project(v)| <= tol.
  bool contains(const Vector& v, double tol = 1e-12) const;

  /// Width of box bounds, or -1 when the set does not fix a dimension.
  Eigen::Index dimension_hint() const;

 private:
  std::variant<Unconstrained, Box, ConvexOracle> set_;
};

}  // namespace mdoc
