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

#include "mdoc/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "mdoc/csv.hpp"
#include "mdoc/errors.hpp"

namespace mdoc {

TimeGrid::TimeGrid(double horizon, int steps) : horizon_(horizon), steps_(steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InvalidArgument("grid horizon must be positive and finite");
  }
  if (steps < 1) throw InvalidArgument("grid needs at least one step");
}

TimeGrid TimeGrid::refined(int factor) const {
  if (factor < 1) throw InvalidArgument("refinement factor must be >= 1");
  return TimeGrid(horizon_, steps_ * factor);
}

Trajectory::Trajectory(TimeGrid grid, int width)
    : grid_(grid), values_(Matrix::Zero(width, grid.node_count())) {
  if (width < 1) throw InvalidArgument("trajectory width must be positive");
}

Trajectory::Trajectory(TimeGrid grid, Matrix values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.rows() < 1) throw InvalidArgument("trajectory width must be positive");
  if (values_.cols() != grid_.node_count()) {
    throw InvalidArgument("trajectory must hold one value per grid node");
  }
  if (!values_.allFinite()) throw InvalidArgument("trajectory entries must be finite");
}

Trajectory Trajectory::constant(TimeGrid grid, const Vector& value) {
  Matrix values = value.replicate(1, grid.node_count());
  return Trajectory(grid, std::move(values));
}

Vector Trajectory::interpolate(double t) const {
  const double T = grid_.horizon();
  if (!(t >= 0.0 && t <= T)) throw OutOfRange("interpolation time outside [0, T]");
  const double s = t * static_cast<double>(grid_.steps()) / T;
  const auto nearest = static_cast<Eigen::Index>(std::llround(s));
  if (grid_.node(nearest) == t) return values_.col(nearest);
  auto k = static_cast<Eigen::Index>(std::floor(s));
  if (k >= grid_.steps()) k = grid_.steps() - 1;
  const double theta = std::clamp(s - static_cast<double>(k), 0.0, 1.0);
  return (1.0 - theta) * values_.col(k) + theta * values_.col(k + 1);
}

double Trajectory::sup_norm() const {
  return values_.colwise().norm().maxCoeff();
}

double Trajectory::l2_norm() const {
  return std::sqrt(trapezoid(grid_, values_.colwise().squaredNorm().transpose()));
}

namespace {

void require_same_grid(const Trajectory& a, const Trajectory& b) {
  if (!(a.grid() == b.grid()) || a.width() != b.width()) {
    throw InvalidArgument("trajectories live on different grids or widths");
  }
}

}  // namespace

Trajectory operator+(const Trajectory& a, const Trajectory& b) {
  require_same_grid(a, b);
  return Trajectory(a.grid(), a.values() + b.values());
}

Trajectory operator-(const Trajectory& a, const Trajectory& b) {
  require_same_grid(a, b);
  return Trajectory(a.grid(), a.values() - b.values());
}

Trajectory operator*(double s, const Trajectory& a) {
  return Trajectory(a.grid(), s * a.values());
}

double trapezoid(const TimeGrid& grid, const Vector& nodal) {
  if (nodal.size() != grid.node_count()) {
    throw InvalidArgument("quadrature needs one value per grid node");
  }
  const Eigen::Index n = nodal.size();
  const double interior = nodal.segment(1, n - 2).sum();
  return grid.step() * (interior + 0.5 * (nodal[0] + nodal[n - 1]));
}

double trapezoid_inner(const Trajectory& a, const Trajectory& b) {
  require_same_grid(a, b);
  return trapezoid(a.grid(),
                   a.values().cwiseProduct(b.values()).colwise().sum().transpose());
}

Trajectory integrate_state(const ProblemSpec& problem, const Trajectory& control) {
  if (control.width() != problem.control_dim) {
    throw InvalidArgument("control width does not match problem control_dim");
  }
  if (problem.initial_state.size() != problem.state_dim ||
      !problem.initial_state.allFinite()) {
    throw InvalidArgument("initial state has wrong dimension or is not finite");
  }
  const TimeGrid& grid = control.grid();
  const double h = grid.step();
  Matrix x(problem.state_dim, grid.node_count());
  x.col(0) = problem.initial_state;

  Vector um(problem.control_dim);
  for (Eigen::Index k = 0; k < grid.steps(); ++k) {
    const double t = grid.node(k);
    const auto ua = control.at(k);
    const auto ub = control.at(k + 1);
    um = 0.5 * (ua + ub);
    const Vector xk = x.col(k);

    const Vector k1 = problem.drift(t, xk, ua);
    const Vector k2 = problem.drift(t + 0.5 * h, xk + 0.5 * h * k1, um);
    const Vector k3 = problem.drift(t + 0.5 * h, xk + 0.5 * h * k2, um);
    const Vector k4 = problem.drift(t + h, xk + h * k3, ub);
    x.col(k + 1) = xk + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    if (!x.col(k + 1).allFinite()) {
      throw NumericalBlowup("state became non-finite at node " + std::to_string(k + 1),
                            static_cast<std::size_t>(k + 1));
    }
  }
  return Trajectory(grid, std::move(x));
}

Trajectory integrate_adjoint(const ProblemSpec& problem, const Trajectory& control,
                             const Trajectory& state) {
  if (!(control.grid() == state.grid())) {
    throw InvalidArgument("control and state live on different grids");
  }
  if (control.width() != problem.control_dim || state.width() != problem.state_dim) {
    throw InvalidArgument("control/state widths do not match the problem");
  }
  const TimeGrid& grid = control.grid();
  const double h = grid.step();
  const Eigen::Index N = grid.steps();
  Matrix p(problem.state_dim, grid.node_count());
  p.col(N) = -problem.terminal_grad(state.at(N));
  if (!p.col(N).allFinite()) {
    throw NumericalBlowup("adjoint terminal value is non-finite", static_cast<std::size_t>(N));
  }

  auto rhs = [&](double t, const Vector& x, const Vector& pp, const Vector& u) -> Vector {
    return -grad_x_hamiltonian0(problem, t, x, pp, u);
  };

  Vector xm(problem.state_dim), um(problem.control_dim);
  for (Eigen::Index k = N; k > 0; --k) {
    const double t = grid.node(k);
    const Vector xb = state.at(k), xa = state.at(k - 1);
    const Vector ub = control.at(k), ua = control.at(k - 1);
    xm = 0.5 * (xa + xb);
    um = 0.5 * (ua + ub);
    const Vector pk = p.col(k);

    const Vector k1 = rhs(t, xb, pk, ub);
    const Vector k2 = rhs(t - 0.5 * h, xm, pk - 0.5 * h * k1, um);
    const Vector k3 = rhs(t - 0.5 * h, xm, pk - 0.5 * h * k2, um);
    const Vector k4 = rhs(t - h, xa, pk - h * k3, ua);
    p.col(k - 1) = pk - (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    if (!p.col(k - 1).allFinite()) {
      throw NumericalBlowup("adjoint became non-finite at node " + std::to_string(k - 1),
                            static_cast<std::size_t>(k - 1));
    }
  }
  return Trajectory(grid, std::move(p));
}

double evaluate_cost(const ProblemSpec& problem, const MirrorMap& mirror, double tau,
                     const Trajectory& control, const Trajectory& state) {
  if (!(control.grid() == state.grid())) {
    throw InvalidArgument("control and state live on different grids");
  }
  if (tau < 0.0) throw InvalidArgument("tau must be nonnegative");
  const TimeGrid& grid = control.grid();
  Vector running(grid.node_count());
  for (Eigen::Index k = 0; k < grid.node_count(); ++k) {
    running[k] = problem.running_cost(grid.node(k), state.at(k), control.at(k));
    if (tau != 0.0) running[k] += tau * mirror.value(control.at(k));
  }
  return trapezoid(grid, running) + problem.terminal_cost(state.at(grid.steps()));
}

bool bound_check(const Trajectory& traj, double bound) {
  if (!(bound > 0.0)) throw InvalidArgument("bound must be positive");
  return traj.sup_norm() <= bound;
}

namespace {

CsvTable trajectory_table(const Trajectory& traj) {
  CsvTable table;
  table.header.push_back("t");
  for (int i = 0; i < traj.width(); ++i) table.header.push_back("v" + std::to_string(i));
  table.rows.reserve(static_cast<std::size_t>(traj.size()));
  for (Eigen::Index k = 0; k < traj.size(); ++k) {
    std::vector<double> row{traj.grid().node(k)};
    for (int i = 0; i < traj.width(); ++i) row.push_back(traj.values()(i, k));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj) { return to_csv(trajectory_table(traj)); }

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  write_csv(path, trajectory_table(traj));
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  if (table.header.size() < 2 || table.header[0] != "t" || table.rows.size() < 2) {
    throw InvalidArgument("not a trajectory csv: '" + path.string() + "'");
  }
  const int width = static_cast<int>(table.header.size()) - 1;
  const int steps = static_cast<int>(table.rows.size()) - 1;
  if (table.rows.front()[0] != 0.0) {
    throw InvalidArgument("trajectory csv must start at t = 0");
  }
  TimeGrid grid(table.rows.back()[0], steps);
  Matrix values(width, steps + 1);
  for (int k = 0; k <= steps; ++k)
    for (int i = 0; i < width; ++i) values(i, k) = table.rows[k][i + 1];
  return Trajectory(grid, std::move(values));
}

}  // namespace mdoc
