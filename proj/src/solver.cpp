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

#include "mdoc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "mdoc/errors.hpp"
#include "mdoc/reference.hpp"

namespace mdoc {

std::string to_string(Termination termination) {
  switch (termination) {
    case Termination::MaxIters:
      return "max_iters";
    case Termination::ResidualMet:
      return "residual_met";
    case Termination::CostDeltaMet:
      return "cost_delta_met";
    case Termination::Blowup:
      return "blowup";
  }
  return "unknown";
}

MirrorStep mirror_step(const ProblemSpec& problem, const MirrorMap& mirror, double tau,
                       double lambda, const Trajectory& u, const Trajectory& x,
                       const Trajectory& p, const ProxOptions& prox) {
  if (!(u.grid() == x.grid()) || !(u.grid() == p.grid())) {
    throw InvalidArgument("control, state and adjoint must share a grid");
  }
  const TimeGrid& grid = u.grid();
  const int m = problem.control_dim;
  Matrix next(m, grid.node_count()), xi(m, grid.node_count()), eta(m, grid.node_count());
  for (Eigen::Index k = 0; k < grid.node_count(); ++k) {
    const Vector uk = u.at(k);
    const Vector xik =
        grad_u_hamiltonian_tau(problem, mirror, tau, grid.node(k), x.at(k), p.at(k), uk);
    xi.col(k) = xik;
    eta.col(k) = xik + lambda * mirror.gradient(uk);
    next.col(k) = mirror_step_pointwise(mirror, problem.control_set, uk, xik, lambda, prox);
  }
  for (Eigen::Index k = 0; k < grid.node_count(); ++k) {
    if (!next.col(k).allFinite() || !eta.col(k).allFinite()) {
      throw NumericalBlowup("mirror step became non-finite at node " + std::to_string(k),
                            static_cast<std::size_t>(k));
    }
  }
  return MirrorStep{Trajectory(grid, std::move(next)), Trajectory(grid, std::move(xi)),
                    Trajectory(grid, std::move(eta))};
}

double stationarity_residual(const ProblemSpec& problem, const MirrorMap& mirror,
                             double tau, double lambda, const Trajectory& u,
                             const Trajectory& x, const Trajectory& p) {
  const MirrorStep step = mirror_step(problem, mirror, tau, lambda, u, x, p);
  return (step.next.values() - u.values()).colwise().norm().maxCoeff();
}

double admissibility_modulus_check(const Trajectory& u_next, const Trajectory& eta,
                                   double lambda, double sigma_h) {
  if (!(u_next.grid() == eta.grid())) throw InvalidArgument("grids differ");
  if (!(lambda > 0.0) || !(sigma_h > 0.0)) {
    throw InvalidArgument("lambda and sigma_h must be positive");
  }
  double worst = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k + 1 < u_next.size(); ++k) {
    const double modulus = (eta.at(k + 1) - eta.at(k)).norm() / (lambda * sigma_h);
    const double change = (u_next.at(k + 1) - u_next.at(k)).norm();
    worst = std::min(worst, modulus - change);
  }
  return worst;
}

double check_dissipation(std::span<const IterateRecord> records, double lambda,
                         std::optional<double> L) {
  const double coeff = L ? lambda - *L : 0.0;
  double worst = 0.0;
  bool any = false;
  for (std::size_t n = 0; n + 1 < records.size(); ++n) {
    const double a = records[n].cost;
    const double b = records[n + 1].cost;
    if (!std::isfinite(a) || !std::isfinite(b)) continue;
    const double slack = a - b - coeff * records[n].bregman_step;
    worst = any ? std::min(worst, slack) : slack;
    any = true;
  }
  return worst;
}

namespace {

void check_window(std::span<const double> errors, IterWindow window, std::size_t min_first) {
  if (window.first < min_first || window.last < window.first + 1 ||
      window.last >= errors.size()) {
    throw InvalidArgument("fit window must hold at least two in-range points");
  }
  for (std::size_t i = window.first; i <= window.last; ++i) {
    if (!(errors[i] > 0.0) || !std::isfinite(errors[i])) {
      throw InvalidArgument("errors must be positive and finite on the fit window");
    }
  }
}

LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

}  // namespace

LineFit fit_semilog(std::span<const double> errors, IterWindow window) {
  check_window(errors, window, 0);
  std::vector<double> xs, ys;
  for (std::size_t i = window.first; i <= window.last; ++i) {
    xs.push_back(static_cast<double>(i));
    ys.push_back(std::log(errors[i]));
  }
  return least_squares(xs, ys);
}

double fit_geometric_factor(std::span<const double> errors, IterWindow window) {
  return std::exp(fit_semilog(errors, window).slope);
}

double fit_loglog_slope(std::span<const double> errors, IterWindow window) {
  check_window(errors, window, 1);
  std::vector<double> xs, ys;
  for (std::size_t i = window.first; i <= window.last; ++i) {
    xs.push_back(std::log(static_cast<double>(i)));
    ys.push_back(std::log(errors[i]));
  }
  return least_squares(xs, ys).slope;
}

CsvTable trace_table(std::span<const IterateRecord> records,
                     std::optional<double> reference_cost) {
  CsvTable table;
  table.header = {"iter", "cost"};
  if (reference_cost) table.header.push_back("cost_error");
  for (const char* name : {"bregman_step", "residual", "sup_control_change"}) {
    table.header.emplace_back(name);
  }
  for (const auto& r : records) {
    std::vector<double> row{static_cast<double>(r.iter), r.cost};
    if (reference_cost) row.push_back(std::abs(r.cost - *reference_cost));
    row.push_back(r.bregman_step);
    row.push_back(r.residual);
    row.push_back(r.sup_control_change);
    table.rows.push_back(std::move(row));
  }
  return table;
}

SolveReport run(const ProblemSpec& problem, const MirrorMap& mirror,
                const SolverConfig& config, const Trajectory& u0,
                const IterateObserver& observer) {
  problem.validate();
  if (!(config.lambda > 0.0)) throw InvalidArgument("lambda must be positive");
  if (!(config.tau >= 0.0)) throw InvalidArgument("tau must be nonnegative");
  if (config.max_iters < 1) throw InvalidArgument("max_iters must be positive");
  if (!(u0.grid() == config.grid)) throw InvalidArgument("u0 is not on the solver grid");
  if (u0.width() != problem.control_dim) throw InvalidArgument("u0 has wrong width");
  if (std::abs(config.grid.horizon() - problem.horizon) >
      1e-12 * std::max(1.0, problem.horizon)) {
    throw InvalidArgument("solver grid horizon differs from the problem horizon");
  }
  for (Eigen::Index k = 0; k < u0.size(); ++k) {
    if (!problem.control_set.contains(u0.at(k), 1e-12)) {
      throw InvalidArgument("u0 leaves the control set at node " + std::to_string(k));
    }
  }

  std::vector<IterateRecord> records;
  std::vector<Trajectory> controls;
  std::vector<std::string> warnings;
  std::optional<double> ledger_L;
  if (const auto ledger = ledger_for(problem, mirror, config.tau)) {
    ledger_L = ledger->L;
    if (config.lambda < ledger->L) {
      std::ostringstream msg;
      msg << "lambda = " << config.lambda << " is below the ledger constant L = "
          << ledger->L << "; the dissipation guarantee does not apply";
      warnings.push_back(msg.str());
    }
  }

  const double sigma = mirror.strong_convexity();
  Trajectory u = u0;
  Trajectory x(config.grid, problem.state_dim);
  Trajectory p(config.grid, problem.state_dim);
  Termination termination = Termination::MaxIters;
  std::string blowup_message;
  double previous_cost = std::numeric_limits<double>::quiet_NaN();

  for (int n = 0;; ++n) {
    double cost = 0.0;
    std::optional<MirrorStep> step;
    try {
      Trajectory xn = integrate_state(problem, u);
      Trajectory pn = integrate_adjoint(problem, u, xn);
      cost = evaluate_cost(problem, mirror, config.tau, u, xn);
      if (!std::isfinite(cost)) {
        throw NumericalBlowup("cost is non-finite", static_cast<std::size_t>(config.grid.steps()));
      }
      step = mirror_step(problem, mirror, config.tau, config.lambda, u, xn, pn, config.prox);
      x = std::move(xn);
      p = std::move(pn);
    } catch (const NumericalBlowup& e) {
      IterateRecord bad;
      bad.iter = n;
      bad.cost = std::numeric_limits<double>::quiet_NaN();
      records.push_back(bad);
      termination = Termination::Blowup;
      blowup_message = e.what();
      break;
    }

    if (config.record_trajectories) controls.push_back(u);
    if (observer) observer(n, u, x, p);

    const Matrix diff = step->next.values() - u.values();
    IterateRecord rec;
    rec.iter = n;
    rec.cost = cost;
    rec.bregman_step = bregman_integrated(mirror, step->next, u);
    rec.residual = diff.colwise().norm().maxCoeff();
    rec.sup_control_change = diff.cwiseAbs().maxCoeff();
    rec.descent_certificate =
        trapezoid_inner(step->xi, step->next - u) - config.lambda * rec.bregman_step;
    rec.admissibility_slack =
        admissibility_modulus_check(step->next, step->eta, config.lambda, sigma);
    records.push_back(rec);

    if (rec.residual <= config.stop_residual) {
      termination = Termination::ResidualMet;
      break;
    }
    if (config.stop_cost_delta > 0.0 && n > 0 &&
        std::abs(cost - previous_cost) <= config.stop_cost_delta) {
      termination = Termination::CostDeltaMet;
      break;
    }
    if (n >= config.max_iters) {
      termination = Termination::MaxIters;
      break;
    }
    previous_cost = cost;
    u = std::move(step->next);
  }

  return SolveReport{std::move(records),
                     std::move(u),
                     std::move(x),
                     std::move(p),
                     termination,
                     std::nullopt,
                     std::nullopt,
                     ledger_L,
                     std::move(warnings),
                     std::move(controls),
                     std::move(blowup_message)};
}

}  // namespace mdoc
