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

#include "mdoc/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "mdoc/errors.hpp"
#include "mdoc/random.hpp"

namespace mdoc {

namespace {

void require_dims(const ProblemSpec& problem, VecRef x, VecRef p, VecRef u) {
  if (x.size() != problem.state_dim || p.size() != problem.state_dim ||
      u.size() != problem.control_dim) {
    throw InvalidArgument("dimension mismatch for problem '" + problem.name + "'");
  }
}

double operator_norm(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace

void ProblemSpec::validate() const {
  if (state_dim <= 0 || control_dim <= 0) {
    throw InvalidArgument("state and control dimensions must be positive");
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InvalidArgument("horizon must be positive and finite");
  }
  if (initial_state.size() != state_dim) {
    throw InvalidArgument("initial state has wrong dimension");
  }
  if (!drift || !drift_jac_x || !drift_jac_u || !running_cost || !running_grad_x ||
      !running_grad_u || !terminal_cost || !terminal_grad) {
    throw InvalidArgument("problem '" + name + "' is missing a callback");
  }
  const auto hint = control_set.dimension_hint();
  if (hint >= 0 && hint != control_dim) {
    throw InvalidArgument("control set dimension does not match control_dim");
  }
  if (smoothness) {
    if (!(smoothness->lipschitz_M > 0.0) || !(smoothness->hess_bound_buu > 0.0) ||
        !(smoothness->hess_bound_fuu > 0.0)) {
      throw InvalidArgument("smoothness constants must be strictly positive");
    }
  }
}

double hamiltonian0(const ProblemSpec& problem, double t, VecRef x, VecRef p,
                    VecRef u) {
  require_dims(problem, x, p, u);
  return p.dot(problem.drift(t, x, u)) - problem.running_cost(t, x, u);
}

Vector grad_u_hamiltonian_tau(const ProblemSpec& problem, const MirrorMap& mirror,
                              double tau, double t, VecRef x, VecRef p, VecRef u) {
  if (tau < 0.0) throw InvalidArgument("tau must be nonnegative");
  require_dims(problem, x, p, u);
  Vector grad0 = problem.drift_jac_u(t, x, u).transpose() * p -
                 problem.running_grad_u(t, x, u);
  return grad0 - tau * mirror.gradient(u);
}

Vector grad_x_hamiltonian0(const ProblemSpec& problem, double t, VecRef x,
                           VecRef p, VecRef u) {
  require_dims(problem, x, p, u);
  return problem.drift_jac_x(t, x, u).transpose() * p -
         problem.running_grad_x(t, x, u);
}

ProblemSpec make_lq(double a, double q, double s, double x0, double T) {
  if (q < 0.0 || s < 0.0) throw InvalidArgument("LQ weights q, s must be >= 0");
  if (!(T > 0.0)) throw InvalidArgument("horizon must be positive");

  ProblemSpec p;
  p.name = "lq";
  p.state_dim = 1;
  p.control_dim = 1;
  p.horizon = T;
  p.initial_state = Vector::Constant(1, x0);
  p.drift = [a](double, VecRef x, VecRef u) -> Vector { return a * x + u; };
  p.drift_jac_x = [a](double, VecRef, VecRef) -> Matrix {
    return Matrix::Constant(1, 1, a);
  };
  p.drift_jac_u = [](double, VecRef, VecRef) -> Matrix {
    return Matrix::Identity(1, 1);
  };
  p.running_cost = [q](double, VecRef x, VecRef) { return 0.5 * q * x.squaredNorm(); };
  p.running_grad_x = [q](double, VecRef x, VecRef) -> Vector { return q * x; };
  p.running_grad_u = [](double, VecRef, VecRef) -> Vector { return Vector::Zero(1); };
  p.terminal_cost = [s](VecRef x) { return 0.5 * s * x.squaredNorm(); };
  p.terminal_grad = [s](VecRef x) -> Vector { return s * x; };
  p.convex = true;
  // b_uu = f_uu = 0; the ledger needs positive bounds, so M is reused.
  const double M = std::max({1.0, std::abs(a), q, s});
  p.smoothness = SmoothnessData{M, M, M};
  return p;
}

ProblemSpec make_quartic(double T) {
  if (!(T > 0.0)) throw InvalidArgument("horizon must be positive");

  ProblemSpec p;
  p.name = "quartic";
  p.state_dim = 1;
  p.control_dim = 1;
  p.horizon = T;
  p.initial_state = Vector::Zero(1);
  p.drift = [](double, VecRef, VecRef u) -> Vector { return u; };
  p.drift_jac_x = [](double, VecRef, VecRef) -> Matrix { return Matrix::Zero(1, 1); };
  p.drift_jac_u = [](double, VecRef, VecRef) -> Matrix {
    return Matrix::Identity(1, 1);
  };
  p.running_cost = [](double, VecRef, VecRef) { return 0.0; };
  p.running_grad_x = [](double, VecRef, VecRef) -> Vector { return Vector::Zero(1); };
  p.running_grad_u = [](double, VecRef, VecRef) -> Vector { return Vector::Zero(1); };
  p.terminal_cost = [](VecRef x) {
    const double v = x[0];
    return 0.25 * v * v * v * v;
  };
  p.terminal_grad = [](VecRef x) -> Vector {
    const double v = x[0];
    return Vector::Constant(1, v * v * v);
  };
  p.convex = true;
  return p;
}

HighDimData highdim_data(int d, std::uint64_t seed, const HighDimParams& params) {
  if (d < 1) throw InvalidArgument("dimension must be >= 1");
  if (!(params.T > 0.0)) throw InvalidArgument("horizon must be positive");

  RandomStream normals(seed);
  auto draw = [&]() {
    Matrix m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = normals.normal();
    return m;
  };
  const Matrix m1 = draw();
  const Matrix m2 = draw();
  const Matrix m3 = draw();
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  const Matrix eye = Matrix::Identity(d, d);

  HighDimData data;
  data.A = 0.15 * scale * m1 - 0.6 * eye;
  data.B = 0.6 * scale * m2 + 0.3 * eye;
  data.C = 0.8 * scale * m3;
  data.x_init.resize(d);
  data.x_target.resize(d);
  for (int i = 1; i <= d; ++i) {
    const double angle = static_cast<double>(i) / d * std::numbers::pi;
    data.x_init[i - 1] = 0.4 * std::sin(angle);
    data.x_target[i - 1] = 0.8 * std::cos(angle);
  }
  data.params = params;
  return data;
}

ProblemSpec make_highdim(int d, std::uint64_t seed, const HighDimParams& params) {
  return make_highdim(std::make_shared<const HighDimData>(highdim_data(d, seed, params)));
}

ProblemSpec make_highdim(std::shared_ptr<const HighDimData> data) {
  if (!data) throw InvalidArgument("null high-dimensional data");
  const int d = static_cast<int>(data->A.rows());
  const double dd = static_cast<double>(d);
  const double q = data->params.q;
  const double s = data->params.s;
  const double gamma = data->params.gamma;

  ProblemSpec p;
  p.name = "highdim";
  p.state_dim = d;
  p.control_dim = d;
  p.horizon = data->params.T;
  p.initial_state = data->x_init;
  p.drift = [data, gamma](double, VecRef x, VecRef u) -> Vector {
    return data->A * x + data->B * u + gamma * (data->C * x).array().sin().matrix();
  };
  p.drift_jac_x = [data, gamma](double, VecRef x, VecRef) -> Matrix {
    const Vector c = (data->C * x).array().cos().matrix();
    return data->A + gamma * c.asDiagonal() * data->C;
  };
  p.drift_jac_u = [data](double, VecRef, VecRef) -> Matrix { return data->B; };
  p.running_cost = [q, dd](double, VecRef x, VecRef) {
    return q / (2.0 * dd) * x.squaredNorm();
  };
  p.running_grad_x = [q, dd](double, VecRef x, VecRef) -> Vector { return q / dd * x; };
  p.running_grad_u = [d](double, VecRef, VecRef) -> Vector { return Vector::Zero(d); };
  p.terminal_cost = [data, s, dd](VecRef x) {
    return s / (2.0 * dd) * (x - data->x_target).squaredNorm();
  };
  p.terminal_grad = [data, s, dd](VecRef x) -> Vector {
    return s / dd * (x - data->x_target);
  };
  p.convex = false;

  const double norm_a = operator_norm(data->A);
  const double norm_b = operator_norm(data->B);
  const double norm_c = operator_norm(data->C);
  const double M = std::max({1.0, norm_a + std::abs(gamma) * norm_c, norm_b,
                             std::abs(gamma) * norm_c * norm_c, q / dd, s / dd});
  p.smoothness = SmoothnessData{M, M, M};
  return p;
}

}  // namespace mdoc
