#include <doctest.h>

#include <cmath>

#include "skorohod/error.hpp"
#include "skorohod/sym_kernel.hpp"

using namespace skorohod;

namespace {
SymKernel cell_indicator(const Grid& g, int c) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(g.n_cells());
  v[c - 1] = 1.0;
  return SymKernel(g, 1, v);
}
}  // namespace

TEST_CASE("symmetric tensor product of two indicators") {
  // (1_a (x) 1_b + 1_b (x) 1_a)/2 takes the value 1/2 on the block {a,b}
  Grid g(4);
  auto f = tensor0(cell_indicator(g, 1), cell_indicator(g, 3));
  std::vector<int> ab{1, 3}, ba{3, 1}, aa{1, 1};
  CHECK(f.at(ab) == 0.5);
  CHECK(f.at(ba) == 0.5);
  CHECK(f.at(aa) == 0.0);
  // same cell: the tensor square is 1 on {a,a}
  auto sq = tensor0(cell_indicator(g, 2), cell_indicator(g, 2));
  std::vector<int> bb{2, 2};
  CHECK(sq.at(bb) == 1.0);
}

TEST_CASE("expand and symmetrize are inverse on symmetric kernels") {
  Grid g(3);
  auto f = SymKernel::from_function(g, 3, [](std::span<const Cell> c) {
    return c[0] + 10.0 * c[1] + 100.0 * c[2];
  });
  auto raw = expand(f);
  CHECK(raw.size() == 27);
  CHECK(raw.norm_sq() == doctest::Approx(f.norm_sq()));
  auto back = symmetrize(raw);
  CHECK((back - f).max_abs() == 0.0);
}

TEST_CASE("symmetrize averages orderings") {
  Grid g(2);
  RawTensor r(g, 2);
  std::vector<int> t12{1, 2};
  r.at(t12) = 1.0;
  auto s = symmetrize(r);
  std::vector<int> c12{1, 2}, c11{1, 1};
  CHECK(s.at(c12) == 0.5);
  CHECK(s.at(c11) == 0.0);
}

TEST_CASE("norms and inner products") {
  Grid g(4);
  auto h = StepFunction::indicator(g, 0.0, 0.5);
  auto f = SymKernel::tensor_power(h, 2);
  // ||h (x) h||^2 = ||h||^4 = 1/4
  CHECK(f.norm_sq() == doctest::Approx(0.25));
  CHECK(inner(f, SymKernel::constant(g, 2, 1.0)) == doctest::Approx(0.25));
  CHECK(f.support().cells() == std::vector<int>{1, 2});
  CHECK_THROWS_AS(inner(f, SymKernel(g, 3)), ContractViolation);
}

TEST_CASE("projection, region restriction and reversal") {
  Grid g(4);
  auto one = SymKernel::constant(g, 2, 1.0);
  auto p = project(one, TimeSet::before(g, 0.5));
  // ||1_{[0,1/2]^2}||^2 = 1/4
  CHECK(p.norm_sq() == doctest::Approx(0.25));
  double total = 0.0;
  for (int q = 0; q <= 2; ++q) total += restrict_A(one, q, 0.25).norm_sq();
  CHECK(total == doctest::Approx(1.0));
  // exactly one of two variables below 1/4 has measure 2 * 1/4 * 3/4
  CHECK(restrict_A(one, 1, 0.25).norm_sq() == doctest::Approx(0.375));
  auto r = reverse_kernel(p);
  std::vector<int> c34{3, 4}, c12{1, 2};
  CHECK(r.at(c34) == 1.0);
  CHECK(r.at(c12) == 0.0);
  CHECK_THROWS_AS(restrict_A(one, 3, 0.25), ContractViolation);
}

TEST_CASE("access validation") {
  Grid g(4);
  SymKernel f(g, 2);
  std::vector<int> bad{0, 1}, wrong_arity{1};
  CHECK_THROWS_AS(f.at(bad), ContractViolation);
  CHECK_THROWS_AS(f.at(wrong_arity), ContractViolation);
  CHECK_THROWS_AS(SymKernel(g, 2, Eigen::VectorXd::Zero(3)), ContractViolation);
}
