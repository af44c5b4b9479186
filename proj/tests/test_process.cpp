#include <doctest.h>

#include "skorohod/error.hpp"
#include "skorohod/process.hpp"

using namespace skorohod;

TEST_CASE("partitions") {
  Grid g(16);
  auto d = Partition::dyadic(g, 2);
  CHECK(d.boundaries() == std::vector<int>{0, 4, 8, 12, 16});
  CHECK(d.cell_of(5) == 1);
  CHECK(d.mesh() == 0.25);
  CHECK(Partition::from_times(g, {0.0, 0.5, 1.0}).cells() == 2);
  CHECK_THROWS_AS(Partition::from_times(g, {0.0, 0.3, 1.0}), ContractViolation);
  CHECK_THROWS_AS(Partition(g, {0, 8, 8, 16}), ContractViolation);
  CHECK_THROWS_AS(Partition::dyadic(g, 5), ContractViolation);
  auto family = dyadic_family(g);
  CHECK(family.size() == 5);
  CHECK(family.back().cells() == 16);
  CHECK(dyadic_family(Grid(12)).back().cells() == 12);
}

TEST_CASE("Brownian integrand carries in-cell levels") {
  Grid g(4);
  auto x = ChaosProcess::brownian(g);
  CHECK(x.ranked());
  CHECK(x.levels(3) == 2);
  std::vector<Cell> own{3}, earlier{1}, later{4};
  CHECK(x.value(3, 1, own, 0) == 0.0);
  CHECK(x.value(3, 1, own, 1) == 1.0);
  CHECK(x.value(3, 1, earlier, 0) == 1.0);
  CHECK(x.value(3, 1, later, 1) == 0.0);
  // averaging alpha over its cell gives half the cell
  auto avg = x.cell_average(3);
  CHECK(avg.kernel(1)[2] == 0.5);
  CHECK(avg.kernel(1)[0] == 1.0);
}

TEST_CASE("levels beyond the multiplicity are canonical") {
  Grid g(2);
  auto a = ChaosProcess::brownian(g) + ChaosProcess::brownian(g);
  auto b = 2.0 * ChaosProcess::brownian(g);
  for (int c = 1; c <= 2; ++c)
    for (int r = 0; r < 2; ++r) CHECK((a.at(c, r) - b.at(c, r)).max_abs() == 0.0);
  // a second-order level-2 entry on a multiset with one copy repeats level 1
  std::vector<std::vector<ChaosFunctional>> levels(2);
  for (int c = 1; c <= 2; ++c)
    for (int r = 0; r < 3; ++r)
      levels[c - 1].push_back(ChaosFunctional::from_kernel(SymKernel::constant(g, 2, r)));
  ChaosProcess p(g, levels);
  std::vector<Cell> one{1, 2}, two{1, 1};
  CHECK(p.value(1, 2, one, 2) == 1.0);
  CHECK(p.value(1, 2, two, 2) == 2.0);
  CHECK(p.at(1, 2).kernel(2).at_sorted(one) == 1.0);
}

TEST_CASE("process validation") {
  Grid g(2);
  CHECK_THROWS_AS(ChaosProcess(g, std::vector<ChaosFunctional>(1, ChaosFunctional::constant(g, 1))),
                  ContractViolation);
  std::vector<std::vector<ChaosFunctional>> bad{{ChaosFunctional::constant(g, 1), ChaosFunctional::constant(g, 2)},
                                                {ChaosFunctional::constant(g, 1)}};
  CHECK_THROWS_AS(ChaosProcess(g, bad), ContractViolation);
  std::vector<ChaosFunctional> ys{ChaosFunctional::constant(g, 0), ChaosFunctional::constant(g, 1),
                                  ChaosFunctional::constant(g, 0)};
  CHECK_THROWS_AS(SkorohodProcess(g, ys, Provenance::direct), ContractViolation);
}
