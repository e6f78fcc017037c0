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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>

#include "mdoc/errors.hpp"
#include "mdoc/problem.hpp"
#include "mdoc/random.hpp"
#include "test_support.hpp"

using namespace mdoc;
using mdoc::test::rel_err;
using mdoc::test::vec;

namespace {

Vector random_vector(RandomStream& rng, Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

Vector fd_gradient(const std::function<double(const Vector&)>& fn, const Vector& at) {
  constexpr double h = 1e-5;
  Vector g(at.size());
  for (Eigen::Index i = 0; i < at.size(); ++i) {
    Vector plus = at, minus = at;
    plus[i] += h;
    minus[i] -= h;
    g[i] = (fn(plus) - fn(minus)) / (2.0 * h);
  }
  return g;
}

Matrix fd_jacobian(const std::function<Vector(const Vector&)>& fn, const Vector& at) {
  constexpr double h = 1e-5;
  const Vector f0 = fn(at);
  Matrix J(f0.size(), at.size());
  for (Eigen::Index i = 0; i < at.size(); ++i) {
    Vector plus = at, minus = at;
    plus[i] += h;
    minus[i] -= h;
    J.col(i) = (fn(plus) - fn(minus)) / (2.0 * h);
  }
  return J;
}

double matrix_rel_err(const Matrix& a, const Matrix& b) {
  return (a - b).norm() / std::max({a.norm(), b.norm(), 1e-12});
}

// Relative error, absolute below unit scale where central differences of
// small gradients lose relative accuracy.
double mixed_err(const Vector& a, const Vector& b) {
  return (a - b).norm() / std::max({a.norm(), b.norm(), 1.0});
}

// Worst error of every analytic derivative against central differences over
// `points` random (t, x, u).
double derivative_check(const ProblemSpec& p, int points, std::uint64_t seed) {
  RandomStream rng(seed);
  double worst = 0.0;
  for (int k = 0; k < points; ++k) {
    const double t = rng.uniform(0.0, p.horizon);
    const Vector x = random_vector(rng, p.state_dim);
    const Vector u = random_vector(rng, p.control_dim);

    auto bx = [&](const Vector& xx) -> Vector { return p.drift(t, xx, u); };
    auto bu = [&](const Vector& uu) -> Vector { return p.drift(t, x, uu); };
    auto fx = [&](const Vector& xx) { return p.running_cost(t, xx, u); };
    auto fu = [&](const Vector& uu) { return p.running_cost(t, x, uu); };
    auto g = [&](const Vector& xx) { return p.terminal_cost(xx); };

    worst = std::max(worst, matrix_rel_err(p.drift_jac_x(t, x, u), fd_jacobian(bx, x)));
    worst = std::max(worst, matrix_rel_err(p.drift_jac_u(t, x, u), fd_jacobian(bu, u)));
    worst = std::max(worst, mixed_err(p.running_grad_x(t, x, u), fd_gradient(fx, x)));
    worst = std::max(worst, mixed_err(p.running_grad_u(t, x, u), fd_gradient(fu, u)));
    worst = std::max(worst, mixed_err(p.terminal_grad(x), fd_gradient(g, x)));
  }
  return worst;
}

}  // namespace

TEST_CASE("hamiltonian0 evaluates p.b - f") {
  const ProblemSpec quartic = make_quartic(1.0);
  CHECK(hamiltonian0(quartic, 0.0, vec({0.0}), vec({3.0}), vec({2.0})) == doctest::Approx(6.0));
  CHECK(hamiltonian0(quartic, 0.3, vec({1.7}), vec({0.0}), vec({-4.0})) == 0.0);

  const ProblemSpec lq = make_lq(1.0, 1.0, 1.0, 0.5, 1.0);
  CHECK(hamiltonian0(lq, 0.0, vec({1.0}), vec({1.0}), vec({0.0})) == doctest::Approx(0.5));
}

TEST_CASE("hamiltonian functions reject mismatched dimensions") {
  const ProblemSpec lq = make_lq(1.0, 1.0, 1.0, 0.5, 1.0);
  const MirrorMap h = MirrorMap::quadratic();
  CHECK_THROWS_AS(hamiltonian0(lq, 0.0, vec({1.0, 2.0}), vec({1.0}), vec({0.0})),
                  InvalidArgument);
  CHECK_THROWS_AS(grad_u_hamiltonian_tau(lq, h, 0.0, 0.0, vec({1.0}), vec({1.0}),
                                         vec({0.0, 1.0})),
                  InvalidArgument);
  CHECK_THROWS_AS(grad_x_hamiltonian0(lq, 0.0, vec({1.0}), vec({}), vec({0.0})),
                  InvalidArgument);
  CHECK_THROWS_AS(grad_u_hamiltonian_tau(lq, h, -1.0, 0.0, vec({1.0}), vec({1.0}), vec({0.0})),
                  InvalidArgument);
}

TEST_CASE("grad_u_hamiltonian_tau") {
  const ProblemSpec quartic = make_quartic(1.0);
  const MirrorMap h = MirrorMap::quadratic();
  const Vector x = vec({0.0}), p = vec({-8.0}), u = vec({2.0});
  CHECK(grad_u_hamiltonian_tau(quartic, h, 0.0, 0.0, x, p, u)[0] == doctest::Approx(-8.0));
  CHECK(grad_u_hamiltonian_tau(quartic, h, 0.5, 0.0, x, p, u)[0] == doctest::Approx(-9.0));
  CHECK(grad_u_hamiltonian_tau(quartic, h, 0.0, 0.0, x, vec({0.0}), u)[0] == 0.0);

  SUBCASE("tau enters as an exact subtraction of tau grad h") {
    const ProblemSpec hd = make_highdim(4, 7, HighDimParams{});
    const MirrorMap quartic_map = MirrorMap::quartic_augmented(0.3);
    RandomStream rng(3);
    for (int k = 0; k < 20; ++k) {
      Vector xx(4), pp(4), uu(4);
      for (int i = 0; i < 4; ++i) {
        xx[i] = rng.normal();
        pp[i] = rng.normal();
        uu[i] = rng.normal();
      }
      const double tau = rng.uniform(0.0, 2.0);
      const Vector g0 = grad_u_hamiltonian_tau(hd, quartic_map, 0.0, 0.1, xx, pp, uu);
      const Vector gt = grad_u_hamiltonian_tau(hd, quartic_map, tau, 0.1, xx, pp, uu);
      const Vector expected = g0 - tau * quartic_map.gradient(uu);
      CHECK((gt.array() == expected.array()).all());
    }
  }
}

TEST_CASE("grad_x_hamiltonian0") {
  const ProblemSpec quartic = make_quartic(1.0);
  CHECK(grad_x_hamiltonian0(quartic, 0.2, vec({3.0}), vec({-2.0}), vec({1.0}))[0] == 0.0);

  const ProblemSpec lq = make_lq(1.0, 1.0, 1.0, 0.5, 1.0);
  CHECK(grad_x_hamiltonian0(lq, 0.0, vec({2.0}), vec({3.0}), vec({0.0}))[0] ==
        doctest::Approx(1.0));

  const auto data = std::make_shared<const HighDimData>(highdim_data(6, 11, HighDimParams{}));
  const ProblemSpec hd = make_highdim(data);
  RandomStream rng(5);
  Vector x(6), p(6), u(6);
  for (int i = 0; i < 6; ++i) {
    x[i] = rng.normal();
    p[i] = rng.normal();
    u[i] = rng.normal();
  }
  const Vector c = (data->C * x).array().cos().matrix();
  const Vector expected =
      (data->A.transpose() + data->C.transpose() * c.asDiagonal()) * p - x / 6.0;
  CHECK(rel_err(grad_x_hamiltonian0(hd, 0.0, x, p, u), expected) < 1e-14);
}

TEST_CASE("make_lq") {
  const ProblemSpec lq = make_lq(1.0, 1.0, 1.0, 0.5, 1.0);
  CHECK(lq.state_dim == 1);
  CHECK(lq.control_dim == 1);
  CHECK(lq.convex);
  CHECK(lq.control_set.is_unconstrained());
  REQUIRE(lq.smoothness.has_value());
  CHECK(lq.drift(0.0, vec({2.0}), vec({3.0}))[0] == doctest::Approx(5.0));
  CHECK(lq.terminal_cost(vec({2.0})) == doctest::Approx(2.0));

  const ProblemSpec zero = make_lq(0.0, 0.0, 0.0, 0.0, 1.0);
  CHECK(zero.running_cost(0.5, vec({3.0}), vec({1.0})) == 0.0);
  CHECK(zero.terminal_cost(vec({3.0})) == 0.0);

  CHECK_THROWS_AS(make_lq(1.0, -1.0, 1.0, 0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(make_lq(1.0, 1.0, -1.0, 0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(make_lq(1.0, 1.0, 1.0, 0.0, 0.0), InvalidArgument);
}

TEST_CASE("make_quartic") {
  const ProblemSpec q = make_quartic(1.0);
  CHECK(q.terminal_cost(vec({2.0})) == doctest::Approx(4.0));
  CHECK(q.terminal_grad(vec({0.0}))[0] == 0.0);
  CHECK(q.terminal_grad(vec({2.0}))[0] == doctest::Approx(8.0));
  CHECK(q.convex);
  CHECK_FALSE(q.smoothness.has_value());
  CHECK(q.initial_state[0] == 0.0);
}

TEST_CASE("make_highdim") {
  SUBCASE("deterministic for a seed") {
    const HighDimData a = highdim_data(8, 42, HighDimParams{});
    const HighDimData b = highdim_data(8, 42, HighDimParams{});
    CHECK((a.A.array() == b.A.array()).all());
    CHECK((a.B.array() == b.B.array()).all());
    CHECK((a.C.array() == b.C.array()).all());
    const HighDimData c = highdim_data(8, 43, HighDimParams{});
    CHECK_FALSE((a.A.array() == c.A.array()).all());
  }
  SUBCASE("initial and target states") {
    const HighDimData d = highdim_data(4, 1, HighDimParams{});
    for (int i = 1; i <= 4; ++i) {
      CHECK(d.x_init[i - 1] == doctest::Approx(0.4 * std::sin(i * M_PI / 4)));
      CHECK(d.x_target[i - 1] == doctest::Approx(0.8 * std::cos(i * M_PI / 4)));
    }
  }
  SUBCASE("gamma = 0 leaves the linear drift") {
    HighDimParams params;
    params.gamma = 0.0;
    const auto data = std::make_shared<const HighDimData>(highdim_data(5, 9, params));
    const ProblemSpec p = make_highdim(data);
    const Vector x = Vector::LinSpaced(5, -1.0, 2.0);
    const Vector u = Vector::LinSpaced(5, 0.5, -0.5);
    CHECK(rel_err(p.drift(0.0, x, u), data->A * x + data->B * u) < 1e-15);
  }
  SUBCASE("drift Jacobian is A + gamma diag(cos(Cx)) C") {
    const auto data = std::make_shared<const HighDimData>(highdim_data(5, 2, HighDimParams{}));
    const ProblemSpec p = make_highdim(data);
    const Vector x = Vector::LinSpaced(5, -0.7, 1.3);
    const Vector c = (data->C * x).array().cos().matrix();
    const Matrix expected = data->A + c.asDiagonal() * data->C;
    CHECK(matrix_rel_err(p.drift_jac_x(0.0, x, Vector::Zero(5)), expected) < 1e-15);
  }
  SUBCASE("not convex, carries smoothness data") {
    const ProblemSpec p = make_highdim(3, 42, HighDimParams{});
    CHECK_FALSE(p.convex);
    CHECK(p.smoothness.has_value());
  }
  CHECK_THROWS_AS(make_highdim(0, 1, HighDimParams{}), InvalidArgument);
}

TEST_CASE("analytic derivatives match central differences") {
  CHECK(derivative_check(make_lq(1.0, 1.0, 1.0, 0.5, 1.0), 100, 1) <= 1e-6);
  CHECK(derivative_check(make_lq(-0.7, 2.0, 0.3, 1.0, 2.0), 100, 2) <= 1e-6);
  CHECK(derivative_check(make_quartic(1.0), 100, 3) <= 1e-6);
  for (int d : {1, 3, 10}) {
    CHECK(derivative_check(make_highdim(d, 42, HighDimParams{}), 100, 4 + d) <= 1e-6);
  }
}

TEST_CASE("ProblemSpec::validate") {
  ProblemSpec p = make_lq(1.0, 1.0, 1.0, 0.5, 1.0);
  CHECK_NOTHROW(p.validate());
  SUBCASE("missing callback") {
    p.drift = nullptr;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
  }
  SUBCASE("wrong initial state") {
    p.initial_state = vec({1.0, 2.0});
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
  }
  SUBCASE("box of the wrong width") {
    p.control_set = ControlSet::box(vec({-1.0, -1.0}), vec({1.0, 1.0}));
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
  }
  SUBCASE("nonpositive smoothness constant") {
    p.smoothness = SmoothnessData{1.0, 0.0, 1.0};
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
  }
}

TEST_CASE("ControlSet") {
  SUBCASE("box projection clamps and is idempotent") {
    const ControlSet box = ControlSet::box(vec({-1.0, 0.0}), vec({1.0, 2.0}));
    const Vector p = box.project(vec({3.0, -5.0}));
    CHECK(p[0] == 1.0);
    CHECK(p[1] == 0.0);
    CHECK((box.project(p).array() == p.array()).all());
    CHECK(box.contains(vec({0.5, 1.0})));
    CHECK_FALSE(box.contains(vec({0.5, 2.5})));
    CHECK(box.dimension_hint() == 2);
  }
  SUBCASE("invalid box") {
    CHECK_THROWS_AS(ControlSet::box(vec({1.0}), vec({0.0})), InvalidArgument);
    CHECK_THROWS_AS(ControlSet::box(vec({0.0, 0.0}), vec({1.0})), InvalidArgument);
  }
  SUBCASE("oracle projection onto the unit ball") {
    const ControlSet ball = ControlSet::oracle([](const Vector& v) -> Vector {
      const double n = v.norm();
      return n > 1.0 ? Vector(v / n) : v;
    });
    const Vector p = ball.project(vec({3.0, 4.0}));
    CHECK(p.norm() == doctest::Approx(1.0));
    CHECK(rel_err(ball.project(p), p) < 1e-15);
    CHECK(ball.dimension_hint() == -1);
  }
  SUBCASE("unconstrained is the identity") {
    const ControlSet u = ControlSet::unconstrained();
    const Vector v = vec({1e9, -3.0});
    CHECK((u.project(v).array() == v.array()).all());
  }
}
