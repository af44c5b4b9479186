#include <doctest.h>

#include <sstream>

#include "skorohod/error.hpp"
#include "skorohod/text_io.hpp"

using namespace skorohod;

TEST_CASE("kernel text form") {
  Grid g(4);
  std::vector<int> c{1, 3};
  SymKernel f(g, 2);
  Eigen::VectorXd v = f.values();
  v[static_cast<Eigen::Index>(f.table().rank(std::span<const int>(c)))] = 0.1;
  f = SymKernel(g, 2, v);
  std::stringstream s;
  write_kernel(s, f);
  CHECK(s.str() == "order 2 cells 4\nentries 1\n1,3=0.10000000000000001\n");
  auto r = read_kernel(s);
  CHECK((r - f).max_abs() == 0.0);
  std::stringstream shuffled("order 2 cells 4\nentries 1\n3,1=0.5\n");
  CHECK(read_kernel(shuffled).at(c) == 0.5);
  std::stringstream bad("order 2 cells 4\nentries 1\n1,5=0.5\n");
  CHECK_THROWS_AS(read_kernel(bad), ContractViolation);
}

TEST_CASE("functional and process round trips") {
  Grid g(4);
  ChaosFunctional F(g, -0.25, {SymKernel::constant(g, 1, 1.0 / 3), SymKernel::constant(g, 2, 2.0)});
  std::stringstream s;
  write_functional(s, F);
  auto G = read_functional(s);
  CHECK(G.mean() == F.mean());
  CHECK((G - F).max_abs() == 0.0);

  auto u = ChaosProcess::brownian(g) + ChaosProcess::constant(F);
  std::stringstream ps;
  write_process(ps, u);
  auto w = read_process(ps);
  for (int a = 1; a <= 4; ++a) {
    CHECK(w.levels(a) == u.levels(a));
    for (int r = 0; r < u.levels(a); ++r) CHECK((w.at(a, r) - u.at(a, r)).max_abs() == 0.0);
  }
  std::stringstream truncated("process cells 4 orders 1\ntime_cell 1 levels 1\n");
  CHECK_THROWS_AS(read_process(truncated), ContractViolation);
}
