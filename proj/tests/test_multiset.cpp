#include <doctest.h>

#include <cmath>
#include <numeric>

#include "skorohod/error.hpp"
#include "skorohod/multiset.hpp"

using namespace skorohod;

TEST_CASE("binomial and factorial") {
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(3, 5) == 0);
  CHECK(binomial(67, 4) == 766480);
  CHECK(factorial(4) == 24.0);
}

TEST_CASE("table enumerates sorted multisets") {
  for (int N : {1, 3, 8}) {
    for (int n = 1; n <= 4; ++n) {
      const auto& t = multiset_table(N, n);
      REQUIRE(t.size() == binomial(N + n - 1, n));
      double total = 0.0;
      for (std::size_t i = 0; i < t.size(); ++i) {
        auto c = t.cells(i);
        CHECK(std::is_sorted(c.begin(), c.end()));
        CHECK(t.rank(c) == i);
        total += t.weights()[static_cast<Eigen::Index>(i)];
      }
      // orderings of all blocks add up to N^n
      CHECK(total == doctest::Approx(std::pow(N, n)));
    }
  }
}

TEST_CASE("weights are multinomial") {
  const auto& t = multiset_table(4, 3);
  std::vector<Cell> c{2, 2, 4};
  CHECK(t.weights()[static_cast<Eigen::Index>(t.rank(c))] == 3.0);
  std::vector<Cell> d{1, 1, 1};
  CHECK(t.weights()[static_cast<Eigen::Index>(t.rank(d))] == 1.0);
}

TEST_CASE("runs and edits") {
  std::vector<Cell> c{1, 1, 3};
  auto r = runs(c);
  REQUIRE(r.size() == 2);
  CHECK(r[0].cell == 1);
  CHECK(r[0].count == 2);
  CHECK(remove_one(c, 1) == std::vector<Cell>{1, 3});
  CHECK(insert_one(c, 2) == std::vector<Cell>{1, 1, 2, 3});
}

TEST_CASE("limits") {
  CHECK_THROWS_AS(MultisetTable(0, 1), ContractViolation);
  CHECK_THROWS_AS(MultisetTable(4, 5), ContractViolation);
  CHECK_THROWS_AS(MultisetTable(256, 4), ContractViolation);
  CHECK(multiset_table(256, 2).size() == 32896);
}
