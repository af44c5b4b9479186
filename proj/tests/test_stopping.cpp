#include <doctest.h>

#include <cmath>

#include "skorohod/error.hpp"
#include "skorohod/skorohod.hpp"
#include "skorohod/stopping.hpp"

using namespace skorohod;

namespace {
ChaosFunctional X1(const Grid& g) { return ChaosFunctional::isonormal(StepFunction::constant(g, 1.0)); }
}  // namespace

TEST_CASE("stopping rules") {
  Grid g(8);
  auto paths = sample_paths(g, 200, 3);
  auto fixed = GridStoppingTime::deterministic(g, 0.5);
  auto zero = GridStoppingTime::level_hitting(g, 0.0);
  auto far = GridStoppingTime::level_hitting(g, 10.0);
  for (std::size_t p = 0; p < 200; ++p) {
    Eigen::VectorXd dx = paths.path(p);
    CHECK(eval_stopping_time(fixed, dx) == 0.5);
    CHECK(far(dx) == 1.0);
    // level 0: first boundary k >= 1 with X_k >= 0
    auto x = cumulative(dx);
    int k = 1;
    while (k < 8 && x[k] < 0.0) ++k;
    CHECK(zero.boundary(dx) == k);
  }
  Path up(8);
  up << 0.1, 0.1, 0.2, -0.5, 0.3, 0.0, 0.0, 0.0;
  CHECK(GridStoppingTime::level_hitting(g, 0.3).boundary(up) == 3);
  CHECK(GridStoppingTime::level_hitting(g, -0.05).boundary(up) == 4);
  CHECK(GridStoppingTime::first_exit(g, 0.4).boundary(up) == 3);
  CHECK_THROWS_AS(GridStoppingTime::deterministic(g, 0.3), ContractViolation);
  CHECK_THROWS_AS(GridStoppingTime::first_exit(g, 0.0), ContractViolation);
  CHECK(fixed.name() == "fixed(0.5)");
}

TEST_CASE("stopping rules only look at the past") {
  Grid g(16);
  auto paths = sample_paths(g, 300, 5);
  const GridStoppingTime rules[] = {GridStoppingTime::deterministic(g, 0.25), GridStoppingTime::level_hitting(g, 0.3),
                                    GridStoppingTime::level_hitting(g, -0.3), GridStoppingTime::first_exit(g, 0.5)};
  for (const auto& T : rules)
    for (std::size_t p = 0; p < 300; ++p) {
      Eigen::VectorXd dx = paths.path(p);
      const int k = T.boundary(dx);
      Eigen::VectorXd mutated = dx;
      for (int c = k + 1; c <= 16; ++c) mutated[c - 1] = counter_uniform(9, p, c) * 4.0 - 2.0;
      CHECK(T.boundary(mutated) == k);
    }
}

TEST_CASE("optional sampling") {
  Grid g(16);
  auto Y = skorohod_process(ChaosProcess::constant(X1(g)));
  auto batch = sample_paths(g, 20000, 2);
  auto S = GridStoppingTime::deterministic(g, 0.25), T = GridStoppingTime::deterministic(g, 0.75);
  // deterministic times: the defect is zero kernelwise
  CHECK(martingale_defect(Y, 0.25, 0.75).max_abs() <= 1e-12);
  auto tests = optional_sampling_check(Y, S, T, batch, 2);
  CHECK(tests.size() >= 5);
  for (const auto& t : tests) CHECK(std::abs(t.z) <= 3.0);
  auto hit = optional_sampling_check(Y, GridStoppingTime::first_exit(g, 0.5), GridStoppingTime::deterministic(g, 1.0), batch);
  for (const auto& t : hit) CHECK(std::abs(t.z) <= 3.0);
  CHECK_THROWS_AS(optional_sampling_check(Y, T, S, batch), ContractViolation);
}

TEST_CASE("uniform integrability surrogate") {
  Grid g(16);
  auto u = ChaosProcess::constant(X1(g)) + ChaosProcess::brownian(g);
  auto Y = skorohod_process(u);
  const double vhat = v_functional(Y);
  for (const auto& y : Y.values()) CHECK(expectation_of_product(y, y) <= vhat + 1e-12);
}

TEST_CASE("stopped integrals") {
  Grid g(8);
  auto paths = sample_paths(g, 100, 6);
  auto pi = Partition::dyadic(g, 1);
  // u = 1: both sides X_T
  auto ones = ChaosProcess::constant(ChaosFunctional::constant(g, 1.0));
  auto T = GridStoppingTime::level_hitting(g, 0.3);
  for (std::size_t p = 0; p < 100; ++p) {
    auto r = stopped_integral(ones, pi, T, paths.path(p));
    auto x = cumulative(paths.path(p));
    CHECK(r.lhs == doctest::Approx(x[T.boundary(paths.path(p))]));
    CHECK(r.rhs == doctest::Approx(r.lhs));
  }
  // u = X_1 averaged on two dyadic cells, T = hit(0.3)
  auto step = step_approximation(tudor_representation(ChaosProcess::constant(X1(g))), pi);
  auto Ys = skorohod_process(step);
  for (std::size_t p = 0; p < 100; ++p) {
    auto r = stopped_integral(step, pi, T, paths.path(p), &Ys);
    CHECK(std::abs(r.lhs - r.rhs) <= 1e-10);
    // T = 1 is the fixed-time integral
    auto one = stopped_integral(step, pi, GridStoppingTime::deterministic(g, 1.0), paths.path(p));
    CHECK(one.rhs == doctest::Approx(eval(Ys.at_boundary(8), paths.path(p))));
  }
  CHECK_THROWS_AS(stopped_integral(ChaosProcess::constant(X1(g)), pi, T, paths.path(0)), ContractViolation);
}
