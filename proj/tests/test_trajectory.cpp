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

#include <cmath>
#include <limits>

#include "mdoc/csv.hpp"
#include "mdoc/errors.hpp"
#include "mdoc/problem.hpp"
#include "mdoc/reference.hpp"
#include "mdoc/trajectory.hpp"
#include "test_support.hpp"

using namespace mdoc;
using mdoc::test::constant;
using mdoc::test::vec;

namespace {

// x' = x with x(0) = 1.
ProblemSpec exponential_growth() {
  ProblemSpec p = make_lq(1.0, 0.0, 0.0, 1.0, 1.0);
  p.drift = [](double, VecRef x, VecRef) -> Vector { return x; };
  return p;
}

// x' = u, no costs.
ProblemSpec integrator() {
  ProblemSpec p = make_quartic(1.0);
  p.terminal_cost = [](VecRef) { return 0.0; };
  p.terminal_grad = [](VecRef) -> Vector { return Vector::Zero(1); };
  return p;
}

}  // namespace

TEST_CASE("TimeGrid") {
  const TimeGrid g(2.0, 4);
  CHECK(g.node_count() == 5);
  CHECK(g.step() == 0.5);
  CHECK(g.node(0) == 0.0);
  CHECK(g.node(4) == 2.0);
  for (Eigen::Index k = 0; k < 4; ++k) CHECK(g.node(k + 1) > g.node(k));
  CHECK(g.weight(0) == 0.25);
  CHECK(g.weight(2) == 0.5);
  CHECK(g.refined(3) == TimeGrid(2.0, 12));
  CHECK_THROWS_AS(TimeGrid(0.0, 4), InvalidArgument);
  CHECK_THROWS_AS(TimeGrid(1.0, 0), InvalidArgument);
}

TEST_CASE("Trajectory construction") {
  const TimeGrid g(1.0, 2);
  CHECK_THROWS_AS(Trajectory(g, Matrix::Zero(1, 2)), InvalidArgument);
  Matrix bad = Matrix::Zero(1, 3);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(Trajectory(g, bad), InvalidArgument);
  const Trajectory z(g, 3);
  CHECK(z.width() == 3);
  CHECK(z.size() == 3);
  CHECK(z.sup_norm() == 0.0);
}

TEST_CASE("interpolate") {
  const TimeGrid g(1.0, 10);
  const Trajectory u = Trajectory::sample(g, 2, [](double t) { return vec({t * t, -t}); });
  SUBCASE("exact at nodes") {
    for (Eigen::Index k = 0; k < g.node_count(); ++k) {
      CHECK((u.interpolate(g.node(k)) - Vector(u.at(k))).norm() == 0.0);
    }
  }
  SUBCASE("constant trajectory") {
    const Trajectory c = constant(g, 3.5);
    for (double t : {0.0, 0.13, 0.5, 0.999, 1.0}) CHECK(c.interpolate(t)[0] == 3.5);
  }
  SUBCASE("linear between nodes") {
    Matrix v(1, 2);
    v << 0.0, 1.0;
    const Trajectory line(TimeGrid(1.0, 1), v);
    CHECK(line.interpolate(0.25)[0] == doctest::Approx(0.25));
  }
  SUBCASE("outside the horizon") {
    CHECK_THROWS_AS(u.interpolate(-1e-9), OutOfRange);
    CHECK_THROWS_AS(u.interpolate(1.0 + 1e-9), OutOfRange);
  }
}

TEST_CASE("integrate_state") {
  SUBCASE("constant derivative is integrated exactly") {
    const TimeGrid g(1.0, 7);
    const Trajectory x = integrate_state(integrator(), constant(g, 1.0));
    CHECK(x.at(g.steps())[0] == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("exponential growth") {
    const Trajectory x = integrate_state(exponential_growth(), constant(TimeGrid(1.0, 500), 0.0));
    CHECK(std::abs(x.at(500)[0] - std::exp(1.0)) < 1e-10);
  }
  SUBCASE("quartic state is alpha t at every node") {
    const TimeGrid g(1.0, 50);
    const Trajectory x = integrate_state(make_quartic(1.0), constant(g, 1.7));
    for (Eigen::Index k = 0; k < g.node_count(); ++k) {
      CHECK(std::abs(x.at(k)[0] - 1.7 * g.node(k)) < 1e-14);
    }
  }
  SUBCASE("blowup names the node") {
    ProblemSpec p = integrator();
    p.drift = [](double t, VecRef, VecRef) -> Vector {
      return Vector::Constant(1, t > 0.5 ? std::numeric_limits<double>::infinity() : 1.0);
    };
    try {
      integrate_state(p, constant(TimeGrid(1.0, 10), 0.0));
      FAIL("expected a blowup");
    } catch (const NumericalBlowup& e) {
      CHECK(e.node() >= 5);
      CHECK(e.node() <= 6);
    }
  }
  SUBCASE("wrong control width") {
    CHECK_THROWS_AS(integrate_state(make_lq(1, 1, 1, 0.5, 1), Trajectory(TimeGrid(1.0, 4), 2)),
                    InvalidArgument);
  }
}

TEST_CASE("grid refinement order of the state integrator") {
  const ProblemSpec lq = make_lq(1.0, 1.0, 1.0, 0.5, 1.0);
  auto endpoint = [&](int n, auto&& control) {
    const TimeGrid g(1.0, n);
    return integrate_state(lq, Trajectory::sample(g, 1, control)).at(n)[0];
  };
  auto ratio = [&](auto&& control) {
    const double e1 = std::abs(endpoint(20, control) - endpoint(40, control));
    const double e2 = std::abs(endpoint(40, control) - endpoint(80, control));
    return e1 / e2;
  };
  SUBCASE("control linear in t: fourth order") {
    CHECK(ratio([](double t) { return vec({1.0 - 2.0 * t}); }) >= 8.0);
  }
  SUBCASE("smooth nonlinear control: interpolation limits the order to two") {
    CHECK(ratio([](double t) { return vec({std::sin(3.0 * t)}); }) >= 3.9);
  }
}

TEST_CASE("integrate_adjoint") {
  SUBCASE("quartic adjoint is constant -(T alpha)^3") {
    const TimeGrid g(1.0, 40);
    const ProblemSpec q = make_quartic(1.0);
    const Trajectory u = constant(g, 2.0);
    const Trajectory p = integrate_adjoint(q, u, integrate_state(q, u));
    for (Eigen::Index k = 0; k < g.node_count(); ++k) CHECK(p.at(k)[0] == doctest::Approx(-8.0));
  }
  SUBCASE("zero data gives a zero adjoint") {
    const TimeGrid g(1.0, 20);
    const ProblemSpec p = integrator();
    const Trajectory u = Trajectory::sample(g, 1, [](double t) { return vec({std::cos(t)}); });
    CHECK(integrate_adjoint(p, u, integrate_state(p, u)).sup_norm() == 0.0);
  }
  SUBCASE("LQ from rest stays at rest") {
    const TimeGrid g(1.0, 20);
    const ProblemSpec lq = make_lq(1.0, 1.0, 1.0, 0.0, 1.0);
    const Trajectory u = constant(g, 0.0);
    const Trajectory x = integrate_state(lq, u);
    CHECK(x.sup_norm() == 0.0);
    CHECK(integrate_adjoint(lq, u, x).sup_norm() == 0.0);
  }
  SUBCASE("LQ adjoint solves p' = -a p + q x backward") {
    // With a = 1, q = 0 the adjoint is p_t = p_T e^{T - t}.
    const TimeGrid g(1.0, 200);
    const ProblemSpec lq = make_lq(1.0, 0.0, 2.0, 0.5, 1.0);
    const Trajectory u = constant(g, 0.3);
    const Trajectory x = integrate_state(lq, u);
    const Trajectory p = integrate_adjoint(lq, u, x);
    const double pT = -2.0 * x.at(200)[0];
    CHECK(p.at(200)[0] == pT);
    CHECK(std::abs(p.at(0)[0] - pT * std::exp(1.0)) < 1e-9);
  }
  SUBCASE("grid mismatch") {
    const ProblemSpec q = make_quartic(1.0);
    CHECK_THROWS_AS(integrate_adjoint(q, constant(TimeGrid(1.0, 4), 1.0),
                                      constant(TimeGrid(1.0, 5), 1.0)),
                    InvalidArgument);
  }
}

TEST_CASE("evaluate_cost") {
  const MirrorMap h = MirrorMap::quadratic();
  SUBCASE("constant running cost integrates exactly") {
    ProblemSpec p = integrator();
    p.horizon = 2.5;
    p.running_cost = [](double, VecRef, VecRef) { return 1.3; };
    const TimeGrid g(2.5, 9);
    const Trajectory u = constant(g, 0.0);
    CHECK(evaluate_cost(p, h, 0.0, u, integrate_state(p, u)) == doctest::Approx(1.3 * 2.5));
  }
  SUBCASE("quartic values") {
    const ProblemSpec q = make_quartic(1.0);
    const TimeGrid g(1.0, 100);
    const Trajectory u = constant(g, 2.0);
    const Trajectory x = integrate_state(q, u);
    CHECK(evaluate_cost(q, h, 0.0, u, x) == doctest::Approx(4.0));
    CHECK(evaluate_cost(q, h, 0.5, u, x) == doctest::Approx(5.0));
  }
  SUBCASE("additive in the running cost") {
    const TimeGrid g(1.0, 30);
    ProblemSpec p1 = make_lq(0.4, 1.0, 0.0, 1.0, 1.0);
    ProblemSpec p2 = p1;
    ProblemSpec sum = p1;
    p2.running_cost = [](double t, VecRef x, VecRef u) { return t * x[0] + u[0] * u[0]; };
    sum.running_cost = [&](double t, VecRef x, VecRef u) {
      return p1.running_cost(t, x, u) + p2.running_cost(t, x, u);
    };
    const Trajectory u = Trajectory::sample(g, 1, [](double t) { return vec({std::sin(t)}); });
    const Trajectory x = integrate_state(p1, u);
    CHECK(evaluate_cost(sum, h, 0.0, u, x) ==
          doctest::Approx(evaluate_cost(p1, h, 0.0, u, x) + evaluate_cost(p2, h, 0.0, u, x))
              .epsilon(1e-14));
  }
  SUBCASE("grid mismatch") {
    const ProblemSpec q = make_quartic(1.0);
    CHECK_THROWS_AS(evaluate_cost(q, h, 0.0, constant(TimeGrid(1.0, 4), 1.0),
                                  constant(TimeGrid(1.0, 5), 1.0)),
                    InvalidArgument);
  }
}

TEST_CASE("bound_check") {
  const TimeGrid g(1.0, 10);
  CHECK(bound_check(Trajectory(g, 2), 1e-3));
  CHECK_FALSE(bound_check(constant(g, 2.0), 1.0));
  CHECK_THROWS_AS(bound_check(constant(g, 2.0), 0.0), InvalidArgument);

  SUBCASE("states of the unit-rate LQ stay below M_X") {
    // a = 1, |u| <= 1 gives |b| <= M (1 + |x|) with M = 1.
    const ProblemSpec lq = make_lq(1.0, 1.0, 1.0, 0.0, 1.0);
    LedgerInputs in;
    in.M = in.M_buu = in.M_fuu = 1.0;
    in.T = 1.0;
    const double MX = constants_ledger(in).M_X;
    CHECK(MX == doctest::Approx(std::exp(1.0)));
    for (double c : {-1.0, -0.3, 0.6, 1.0}) {
      const Trajectory u = Trajectory::sample(g, 1, [c](double t) { return vec({c * std::cos(5 * t)}); });
      CHECK(bound_check(integrate_state(lq, u), MX));
    }
  }
}

TEST_CASE("trajectory algebra and norms") {
  const TimeGrid g(1.0, 4);
  const Trajectory a = constant(g, 2.0);
  const Trajectory b = constant(g, -1.0);
  CHECK((a + b).at(2)[0] == 1.0);
  CHECK((a - b).at(2)[0] == 3.0);
  CHECK((0.5 * a).at(2)[0] == 1.0);
  CHECK(a.l2_norm() == doctest::Approx(2.0));
  CHECK(trapezoid_inner(a, b) == doctest::Approx(-2.0));
  CHECK_THROWS_AS(a + constant(TimeGrid(1.0, 5), 1.0), InvalidArgument);
}

TEST_CASE("trajectory CSV round trip") {
  const TimeGrid g(1.5, 12);
  const Trajectory u = Trajectory::sample(g, 3, [](double t) {
    return vec({std::sin(t) / 3.0, std::exp(-t) * 1e-17, 1.0 / (1.0 + t)});
  });
  const auto dir = mdoc::test::scratch_dir("trajectory_csv");
  write_trajectory_csv(dir / "u.csv", u);
  const Trajectory back = read_trajectory_csv(dir / "u.csv");
  CHECK(back.grid() == g);
  CHECK((back.values().array() == u.values().array()).all());

  const CsvTable table = parse_csv(trajectory_csv(u));
  REQUIRE(table.header.size() == 4);
  CHECK(table.header[0] == "t");
  CHECK(table.header[3] == "v2");
  CHECK(table.rows.size() == 13);

  CHECK_THROWS_AS(read_trajectory_csv(dir / "missing.csv"), IoError);
}
