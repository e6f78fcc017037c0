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

#include "mdoc/mirror.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "mdoc/errors.hpp"
#include "mdoc/trajectory.hpp"

namespace mdoc {

MirrorMap MirrorMap::quadratic() {
  MirrorMap map;
  map.kind_ = Kind::Quadratic;
  map.sigma_ = 1.0;
  return map;
}

MirrorMap MirrorMap::quartic_augmented(double epsilon) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw InvalidArgument("quartic augmentation epsilon must be >= 0");
  }
  MirrorMap map;
  map.kind_ = Kind::QuarticAugmented;
  map.epsilon_ = epsilon;
  map.sigma_ = 1.0;
  return map;
}

MirrorMap MirrorMap::custom(ScalarFn h, VectorFn grad, MatrixFn hessian,
                            double strong_convexity) {
  if (!h || !grad || !hessian) throw InvalidArgument("custom mirror map needs h, grad, hessian");
  if (!(strong_convexity > 0.0)) throw InvalidArgument("sigma_h must be positive");
  MirrorMap map;
  map.kind_ = Kind::Custom;
  map.sigma_ = strong_convexity;
  map.h_ = std::move(h);
  map.grad_ = std::move(grad);
  map.hess_ = std::move(hessian);
  return map;
}

std::string MirrorMap::name() const {
  switch (kind_) {
    case Kind::Quadratic:
      return "quadratic";
    case Kind::QuarticAugmented:
      return "quartic_augmented";
    case Kind::Custom:
      return "custom";
  }
  return "unknown";
}

double MirrorMap::value(const Vector& u) const {
  switch (kind_) {
    case Kind::Quadratic:
      return 0.5 * u.squaredNorm();
    case Kind::QuarticAugmented: {
      const double r2 = u.squaredNorm();
      return 0.5 * r2 + 0.25 * epsilon_ * r2 * r2;
    }
    case Kind::Custom:
      return h_(u);
  }
  return 0.0;
}

Vector MirrorMap::gradient(const Vector& u) const {
  switch (kind_) {
    case Kind::Quadratic:
      return u;
    case Kind::QuarticAugmented:
      return (1.0 + epsilon_ * u.squaredNorm()) * u;
    case Kind::Custom:
      return grad_(u);
  }
  return u;
}

Matrix MirrorMap::hessian(const Vector& u) const {
  const auto m = u.size();
  switch (kind_) {
    case Kind::Quadratic:
      return Matrix::Identity(m, m);
    case Kind::QuarticAugmented:
      return (1.0 + epsilon_ * u.squaredNorm()) * Matrix::Identity(m, m) +
             2.0 * epsilon_ * u * u.transpose();
    case Kind::Custom:
      return hess_(u);
  }
  return Matrix::Identity(m, m);
}

double bregman_pointwise(const MirrorMap& map, const Vector& v, const Vector& u) {
  if (v.size() != u.size()) throw InvalidArgument("bregman arguments differ in size");
  if (map.kind() == MirrorMap::Kind::Quadratic) return 0.5 * (v - u).squaredNorm();
  return map.value(v) - map.value(u) - map.gradient(u).dot(v - u);
}

double bregman_integrated(const MirrorMap& map, const Trajectory& v, const Trajectory& u) {
  if (!(v.grid() == u.grid()) || v.width() != u.width()) {
    throw InvalidArgument("bregman_integrated needs trajectories on the same grid");
  }
  Vector nodal(v.size());
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    nodal[k] = bregman_pointwise(map, v.at(k), u.at(k));
  }
  return trapezoid(v.grid(), nodal);
}

namespace {

void check_step_inputs(const Vector& u, const Vector& xi, double lambda) {
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
  if (u.size() != xi.size()) throw InvalidArgument("u and xi differ in size");
}

// Projected damped Newton on phi(v) = lambda h(v) - eta.v over U.
Vector newton_prox(const MirrorMap& map, const ControlSet& set, const Vector& u,
                   const Vector& xi, double lambda, const ProxOptions& options) {
  const Vector eta = xi + lambda * map.gradient(u);
  auto phi = [&](const Vector& v) { return lambda * map.value(v) - eta.dot(v); };
  auto grad = [&](const Vector& v) -> Vector { return lambda * map.gradient(v) - eta; };
  auto residual = [&](const Vector& v) { return (v - set.project(v - grad(v))).norm(); };

  const bool boxed = set.is_box();
  const auto m = u.size();
  Vector v = set.project(u);
  double res = residual(v);
  // Newton converges quadratically near the solution, so iterating a little
  // past the tolerance costs one or two steps and removes most of the error.
  const double target = 1e-3 * options.tolerance;

  for (int it = 0; it < options.max_iterations && res > target; ++it) {
    const Vector g = grad(v);
    const Matrix H = lambda * map.hessian(v);

    // Bound-active coordinates whose gradient pushes outward stay fixed.
    std::vector<Eigen::Index> free_idx;
    std::vector<bool> active(static_cast<std::size_t>(m), false);
    if (boxed) {
      const auto& box = set.as_box();
      const double eps_active = std::min(1e-8, res);
      for (Eigen::Index i = 0; i < m; ++i) {
        const bool at_lower = v[i] <= box.lower[i] + eps_active && g[i] > 0.0;
        const bool at_upper = v[i] >= box.upper[i] - eps_active && g[i] < 0.0;
        active[static_cast<std::size_t>(i)] = at_lower || at_upper;
      }
    }
    for (Eigen::Index i = 0; i < m; ++i)
      if (!active[static_cast<std::size_t>(i)]) free_idx.push_back(i);

    Vector d = Vector::Zero(m);
    if (!free_idx.empty()) {
      const auto nf = static_cast<Eigen::Index>(free_idx.size());
      Matrix Hf(nf, nf);
      Vector gf(nf);
      for (Eigen::Index a = 0; a < nf; ++a) {
        gf[a] = g[free_idx[a]];
        for (Eigen::Index b = 0; b < nf; ++b) Hf(a, b) = H(free_idx[a], free_idx[b]);
      }
      const Vector df = Hf.llt().solve(gf);
      for (Eigen::Index a = 0; a < nf; ++a) d[free_idx[a]] = df[a];
    }
    for (Eigen::Index i = 0; i < m; ++i)
      if (active[static_cast<std::size_t>(i)]) d[i] = g[i] / H(i, i);

    const double phi0 = phi(v);
    double step = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls, step *= 0.5) {
      Vector trial = set.project(v - step * d);
      const double trial_res = residual(trial);
      if (phi(trial) < phi0 || trial_res < res) {
        v = std::move(trial);
        res = trial_res;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (!(res <= options.tolerance)) {
    throw ProxFailure("mirror step prox solver did not converge", res);
  }
  return v;
}

}  // namespace

Vector mirror_step_pointwise(const MirrorMap& map, const ControlSet& set,
                             const Vector& u, const Vector& xi, double lambda,
                             const ProxOptions& options) {
  check_step_inputs(u, xi, lambda);
  if (map.kind() == MirrorMap::Kind::Quadratic) {
    return set.project(u + xi / lambda);
  }
  if (set.is_oracle()) {
    throw InvalidArgument(
        "convex-oracle control sets support only the quadratic mirror map");
  }
  return newton_prox(map, set, u, xi, lambda, options);
}

double prox_residual(const MirrorMap& map, const ControlSet& set, const Vector& u,
                     const Vector& xi, double lambda, const Vector& v) {
  check_step_inputs(u, xi, lambda);
  const Vector eta = xi + lambda * map.gradient(u);
  const Vector g = lambda * map.gradient(v) - eta;
  return (v - set.project(v - g)).norm();
}

double three_point_check(const MirrorMap& map, const ControlSet& set, const Vector& u,
                         const Vector& ustar, const Vector& w, const Vector& xi,
                         double lambda) {
  check_step_inputs(u, xi, lambda);
  if (!set.contains(w, 1e-9)) throw InvalidArgument("three-point test point outside U");
  const double lhs = xi.dot(w - u) - lambda * bregman_pointwise(map, w, u);
  const double rhs = xi.dot(ustar - u) - lambda * bregman_pointwise(map, ustar, u) -
                     lambda * bregman_pointwise(map, w, ustar);
  return rhs - lhs;
}

}  // namespace mdoc
