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

#include <filesystem>
#include <string>
#include <vector>

#include "mdoc/control_set.hpp"
#include "mdoc/mirror.hpp"
#include "mdoc/problem.hpp"

namespace mdoc {

/// Uniform grid t_k = k T / N on [0, T].
class TimeGrid {
 public:
  TimeGrid(double horizon, int steps);

  double horizon() const { return horizon_; }
  int steps() const { return steps_; }
  Eigen::Index node_count() const { return steps_ + 1; }
  double step() const { return horizon_ / steps_; }
  /// Node times are computed as k * T / N so that t_N == T exactly.
  double node(Eigen::Index k) const {
    return static_cast<double>(k) * horizon_ / static_cast<double>(steps_);
  }
  /// Trapezoidal quadrature weight of node k.
  double weight(Eigen::Index k) const {
    return (k == 0 || k == steps_) ? 0.5 * step() : step();
  }

  /// A grid refined by an integer factor.
  TimeGrid refined(int factor) const;

  bool operator==(const TimeGrid& other) const {
    return horizon_ == other.horizon_ && steps_ == other.steps_;
  }

 private:
  double horizon_;
  int steps_;
};

/// Vector path sampled on a TimeGrid. Column k holds the value at node t_k.
class Trajectory {
 public:
  /// Zero trajectory of the given width.
  Trajectory(TimeGrid grid, int width);
  /// Throws InvalidArgument unless values has node_count() columns and
  /// every entry is finite.
  Trajectory(TimeGrid grid, Matrix values);

  static Trajectory constant(TimeGrid grid, const Vector& value);
  /// Samples fn(t) at every node.
  template <typename Fn>
  static Trajectory sample(TimeGrid grid, int width, Fn&& fn) {
    Matrix values(width, grid.node_count());
    for (Eigen::Index k = 0; k < grid.node_count(); ++k) values.col(k) = fn(grid.node(k));
    return Trajectory(grid, std::move(values));
  }

  const TimeGrid& grid() const { return grid_; }
  int width() const { return static_cast<int>(values_.rows()); }
  Eigen::Index size() const { return values_.cols(); }
  const Matrix& values() const { return values_; }

  auto at(Eigen::Index k) const { return values_.col(k); }

  /// Piecewise-linear interpolation; exact at nodes. Throws OutOfRange
  /// outside [0, T].
  Vector interpolate(double t) const;

  /// max_k |v_k| (Euclidean norm per node).
  double sup_norm() const;
  /// Discrete L2 norm under the trapezoidal rule.
  double l2_norm() const;

 private:
  TimeGrid grid_;
  Matrix values_;
};

Trajectory operator+(const Trajectory& a, const Trajectory& b);
Trajectory operator-(const Trajectory& a, const Trajectory& b);
Trajectory operator*(double s, const Trajectory& a);

/// Trapezoidal integral of a scalar nodal sequence.
double trapezoid(const TimeGrid& grid, const Vector& nodal);

/// Trapezoidal integral of <a_t, b_t>.
double trapezoid_inner(const Trajectory& a, const Trajectory& b);

/// Classical RK4 on the grid, x(0) = x0; control at stage times by linear
/// interpolation. Throws NumericalBlowup naming the first non-finite node.
Trajectory integrate_state(const ProblemSpec& problem, const Trajectory& control);

/// Backward RK4 for p' = -grad_x H0(x, p, u), p_T = -grad g(x_T). State and
/// control at stage times by linear interpolation of the stored nodes.
Trajectory integrate_adjoint(const ProblemSpec& problem, const Trajectory& control,
                             const Trajectory& state);

/// Trapezoidal J^tau = int (f + tau h) dt + g(x_T).
double evaluate_cost(const ProblemSpec& problem, const MirrorMap& mirror, double tau,
                     const Trajectory& control, const Trajectory& state);

/// True iff the sup-norm over nodes is <= bound.
bool bound_check(const Trajectory& traj, double bound);

/// Writes `t,v0,...,v{w-1}`, one row per node, 17 significant digits.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);
std::string trajectory_csv(const Trajectory& traj);
/// Reads a file produced by write_trajectory_csv. The grid is rebuilt from
/// the first and last time stamps and the row count.
Trajectory read_trajectory_csv(const std::filesystem::path& path);

}  // namespace mdoc
