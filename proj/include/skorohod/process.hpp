#pragma once

#include <vector>

#include "skorohod/chaos.hpp"

namespace skorohod {

// Grid-aligned partition 0 = t_0 < ... < t_n = 1, kept as boundary indices.
class Partition {
 public:
  Partition(const Grid& grid, std::vector<int> boundaries);
  static Partition from_times(const Grid& grid, const std::vector<double>& times);
  // 2^depth equal cells; needs 2^depth to divide N.
  static Partition dyadic(const Grid& grid, int depth);
  static Partition finest(const Grid& grid);

  const Grid& grid() const { return grid_; }
  int cells() const { return static_cast<int>(bounds_.size()) - 1; }
  int left(int i) const { return bounds_[i]; }  // boundary index of t_i
  int right(int i) const { return bounds_[i + 1]; }
  const std::vector<int>& boundaries() const { return bounds_; }
  // Partition cell holding grid cell c.
  int cell_of(int grid_cell) const;
  double mesh() const;

 private:
  Grid grid_;
  std::vector<int> bounds_;
};

// Dyadic coarsenings of the grid, coarsest first; always ends with the grid itself.
std::vector<Partition> dyadic_family(const Grid& grid);
int max_dyadic_depth(const Grid& grid);

// Time-indexed family alpha -> u_alpha, one entry per grid cell of alpha.
//
// An entry may also depend on where alpha sits inside its cell relative to the
// kernel variables sharing that cell. Level r then holds the kernel values seen when
// exactly r of those variables lie below alpha. A multiset with m copies of the cell
// only uses levels 0..m; for any multiset the levels are uniformly weighted when
// alpha is averaged over the cell. Example: X_alpha on cell a has order-1 value 0 at
// level 0 and 1 at level 1 on the multiset {a}.
class ChaosProcess {
 public:
  ChaosProcess(const Grid& grid, std::vector<ChaosFunctional> per_cell);
  ChaosProcess(const Grid& grid, std::vector<std::vector<ChaosFunctional>> levels);

  static ChaosProcess constant(const ChaosFunctional& F);
  static ChaosProcess deterministic(const StepFunction& f);
  static ChaosProcess brownian(const Grid& grid);  // u_alpha = X_alpha

  const Grid& grid() const { return grid_; }
  int max_order() const { return max_order_; }
  bool ranked(int cell) const { return levels_[cell - 1].size() > 1; }
  bool ranked() const;
  int levels(int cell) const { return static_cast<int>(levels_[cell - 1].size()); }
  // Level r of time cell `cell`; r is clamped to the stored levels.
  const ChaosFunctional& at(int cell, int level = 0) const;
  // Kernel value of order-n kernel at level r, with r clamped to the multiplicity.
  double value(int cell, int order, std::span<const Cell> sorted, int level) const;
  // Average over alpha in the cell.
  ChaosFunctional cell_average(int cell) const;

  ChaosProcess& operator+=(const ChaosProcess& other);
  ChaosProcess& operator-=(const ChaosProcess& other);
  ChaosProcess& operator*=(double c);
  friend ChaosProcess operator+(ChaosProcess a, const ChaosProcess& b) { return a += b; }
  friend ChaosProcess operator-(ChaosProcess a, const ChaosProcess& b) { return a -= b; }
  friend ChaosProcess operator*(double c, ChaosProcess a) { return a *= c; }

 private:
  void normalize();
  Grid grid_;
  int max_order_;
  std::vector<std::vector<ChaosFunctional>> levels_;
};

enum class Provenance { direct, duc_nualart, ito_skorohod, forward_backward };

// Y_t as a chaos functional at every grid time t = k/N, k = 0..N.
class SkorohodProcess {
 public:
  SkorohodProcess(const Grid& grid, std::vector<ChaosFunctional> values, Provenance provenance);

  const Grid& grid() const { return grid_; }
  Provenance provenance() const { return provenance_; }
  const ChaosFunctional& at_boundary(int k) const { return values_.at(k); }
  const ChaosFunctional& at(double t) const { return values_.at(grid_.boundary(t)); }
  const std::vector<ChaosFunctional>& values() const { return values_; }

  friend SkorohodProcess operator-(const SkorohodProcess& a, const SkorohodProcess& b);

 private:
  Grid grid_;
  std::vector<ChaosFunctional> values_;
  Provenance provenance_;
};

}  // namespace skorohod
