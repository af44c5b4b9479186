#include <doctest.h>

#include <cmath>

#include "skorohod/bf.hpp"
#include "skorohod/error.hpp"

using namespace skorohod;

namespace {

ChaosFunctional X(const Grid& g, double a, double b) {
  return ChaosFunctional::isonormal(StepFunction::indicator(g, a, b));
}

ChaosFunctional reassemble(const Grid& g, const std::vector<SplitPair>& pairs) {
  ChaosFunctional sum(g, 0);
  for (const auto& [a, b] : pairs) sum += multiply_disjoint(a, b);
  return sum;
}

}  // namespace

TEST_CASE("forward-backward evaluation") {
  Grid g(8);
  auto paths = sample_paths(g, 20, 2);
  // H1 = X_1, H2 = 1 gives X_t
  BFProcess Z(g, {{X(g, 0, 1), ChaosFunctional::constant(g, 1.0)}});
  // H1 = H2 = X_1 gives X_t (X_1 - X_t)
  BFProcess W(g, {{X(g, 0, 1), X(g, 0, 1)}});
  for (int k = 0; k <= 8; ++k)
    for (std::size_t p = 0; p < 20; ++p) {
      Eigen::VectorXd dx = paths.path(p);
      const double xt = dx.head(k).sum(), x = dx.sum();
      CHECK(bf_eval(Z, g.time(k), dx) == doctest::Approx(xt));
      CHECK(bf_eval(W, g.time(k), dx) == doctest::Approx(xt * (x - xt)));
      CHECK(eval(bf_functional(W, g.time(k)), dx) == doctest::Approx(xt * (x - xt)));
    }
  CHECK_THROWS_AS(BFProcess(g, {{ChaosFunctional::constant(g, 1.0), X(g, 0, 1)}}), ContractViolation);
}

TEST_CASE("forward-backward processes are Skorohod processes") {
  Grid g(8);
  BFProcess W(g, {{X(g, 0, 1), X(g, 0, 1)},
                  {ChaosFunctional::from_kernel(SymKernel::constant(g, 2, 1.0)), X(g, 0.5, 1)}});
  auto Y = bf_skorohod_process(W);
  CHECK(Y.provenance() == Provenance::forward_backward);
  for (int s = 0; s < 8; ++s)
    for (int t = s + 1; t <= 8; ++t) CHECK(martingale_defect(Y, g.time(s), g.time(t)).max_abs() <= 1e-12);
}

TEST_CASE("two-sided split") {
  Grid g(8);
  // order one splits into one pure pair per side
  auto F = X(g, 0, 0.25) + X(g, 0.75, 1);
  auto pairs = split_two_sided(F, 0.25, 0.75);
  REQUIRE(pairs.size() == 2);
  CHECK((pairs[0].first - X(g, 0, 0.25)).max_abs() == 0.0);
  CHECK(pairs[0].second.mean() == 1.0);
  CHECK((pairs[1].second - X(g, 0.75, 1)).max_abs() == 0.0);
  // a product of the two sides has rank one
  auto prod = multiply_disjoint(X(g, 0, 0.25), X(g, 0.75, 1));
  auto p2 = split_two_sided(prod, 0.25, 0.75);
  REQUIRE(p2.size() == 1);
  CHECK((reassemble(g, p2) - prod).max_abs() <= 1e-15);
  // random order-2 functional on the two sides
  std::size_t i = 0;
  auto f = SymKernel::from_function(g, 2, [&](std::span<const Cell> c) {
    bool ok = (c[0] <= 2 || c[0] >= 7) && (c[1] <= 2 || c[1] >= 7);
    return ok ? 2.0 * counter_uniform(3, 0, i++) - 1.0 : 0.0;
  });
  ChaosFunctional R(g, 0.3, {SymKernel::constant(g, 1, 0.0), f});
  auto back = reassemble(g, split_two_sided(R, 0.25, 0.75));
  auto paths = sample_paths(g, 100, 9);
  for (std::size_t p = 0; p < 100; ++p) CHECK(std::abs(eval(back, paths.path(p)) - eval(R, paths.path(p))) <= 1e-10);
  CHECK_THROWS_AS(split_two_sided(X(g, 0.25, 0.5), 0.25, 0.75), ContractViolation);
}

TEST_CASE("BF approximation of the step synthesis") {
  Grid g(4);
  auto paths = sample_paths(g, 100, 12);
  // u = 1 gives X_t
  auto one = ChaosProcess::constant(ChaosFunctional::constant(g, 1.0));
  auto Z1 = bf_approximation(one, Partition::dyadic(g, 1));
  for (std::size_t p = 0; p < 5; ++p)
    for (int k = 0; k <= 4; ++k)
      CHECK(bf_eval(Z1, g.time(k), paths.path(p)) == doctest::Approx(paths.path(p).head(k).sum()));
  // u = X_1 on two dyadic cells: Z equals the synthesized Y^pi pathwise
  auto u = ChaosProcess::constant(X(g, 0, 1));
  auto pi = Partition::dyadic(g, 1);
  auto Z = bf_approximation(u, pi);
  auto Ypi = ito_skorohod_synthesis(step_approximation(tudor_representation(u), pi), pi);
  for (std::size_t p = 0; p < 100; ++p)
    for (int k = 0; k <= 4; ++k)
      CHECK(std::abs(bf_eval(Z, g.time(k), paths.path(p)) - eval(Ypi.at_boundary(k), paths.path(p))) <= 1e-10);
}

TEST_CASE("V residual table for u = X_1 + X_alpha") {
  // V(Y - Z^pi) = 4.5 h and the Sobolev bound is 10 h
  Grid g(16);
  auto u = ChaosProcess::constant(X(g, 0, 1)) + ChaosProcess::brownian(g);
  auto Y = skorohod_process(u);
  auto v = tudor_representation(u);
  for (int d = 1; d <= 4; ++d) {
    auto pi = Partition::dyadic(g, d);
    auto r = v_functional(Y - bf_skorohod_process(bf_approximation(u, pi)));
    CHECK(r == doctest::Approx(4.5 * pi.mesh()));
    CHECK(r <= kernel_norms(v - step_approximation(v, pi)).sobolev12_sq);
  }
}

TEST_CASE("chaos form of a forward-backward process") {
  Grid g(8);
  // X_t: f_{1,1} = 1
  BFProcess Z(g, {{X(g, 0, 1), ChaosFunctional::constant(g, 1.0)}});
  auto f = bf_region_kernels(Z);
  CHECK(f.at(1, 1).values().isApproxToConstant(1.0));
  // single summand with h = 1_[0,1/2], g = 1_[1/2,1]
  BFProcess W(g, {{X(g, 0, 0.5), X(g, 0.5, 1)}});
  auto fw = bf_region_kernels(W);
  auto paths = sample_paths(g, 100, 5);
  for (int k = 0; k <= 8; ++k)
    for (std::size_t p = 0; p < 100; ++p)
      CHECK(std::abs(eval(fw.synthesize(g.time(k)), paths.path(p)) - bf_eval(W, g.time(k), paths.path(p))) <= 1e-10);
  // orders of a BF approximation stay at most one above the integrand
  auto u = ChaosProcess::constant(ChaosFunctional::from_kernel(SymKernel::constant(g, 2, 1.0)));
  auto fz = bf_region_kernels(bf_approximation(u, Partition::dyadic(g, 2)));
  CHECK(fz.max_order() <= 3);
  CHECK_THROWS_AS(bf_region_kernels(BFProcess(g, {{X(g, 0, 0.75), X(g, 0.5, 1)}})), ContractViolation);
}
