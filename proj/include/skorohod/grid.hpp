#pragma once

#include <span>
#include <vector>

namespace skorohod {

// Uniform grid on [0,1]. Cell c (1-based) is ((c-1)/N, c/N]; boundary k is time k/N.
class Grid {
 public:
  explicit Grid(int n_cells);

  int n_cells() const { return n_; }
  double width() const { return 1.0 / n_; }
  double time(int boundary) const { return static_cast<double>(boundary) / n_; }

  // Boundary index of a grid-aligned time; throws ContractViolation otherwise.
  int boundary(double t) const;
  bool aligned(double t) const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int n_;
};

void require_same_grid(const Grid& a, const Grid& b);

// Finite union of grid cells, the index set A of a sigma-field F_A.
class TimeSet {
 public:
  explicit TimeSet(const Grid& grid);  // empty
  TimeSet(const Grid& grid, std::span<const int> cells);

  static TimeSet full(const Grid& grid);
  // Cells inside (a, b] for grid times a <= b.
  static TimeSet interval(const Grid& grid, double a, double b);
  static TimeSet before(const Grid& grid, double t) { return interval(grid, 0.0, t); }
  static TimeSet after(const Grid& grid, double t) { return interval(grid, t, 1.0); }
  // [0,s] u [t,1]
  static TimeSet outside(const Grid& grid, double s, double t);
  // Same sets addressed by boundary index.
  static TimeSet cells_between(const Grid& grid, int lo, int hi);  // cells lo+1..hi

  const Grid& grid() const { return grid_; }
  bool contains(int cell) const { return member_[cell - 1] != 0; }
  std::vector<int> cells() const;
  bool empty() const;

  TimeSet complement() const;
  TimeSet reversed() const;  // cell c -> N+1-c
  friend TimeSet operator|(const TimeSet& a, const TimeSet& b);
  friend TimeSet operator&(const TimeSet& a, const TimeSet& b);
  friend bool operator==(const TimeSet&, const TimeSet&) = default;

 private:
  Grid grid_;
  std::vector<char> member_;
};

// Strictly increasing selection j_1 < ... < j_m from {1..M}; m = 0 allowed.
class IndexVector {
 public:
  IndexVector(int M, std::vector<int> j);
  int M() const { return M_; }
  int m() const { return static_cast<int>(j_.size()); }
  const std::vector<int>& j() const { return j_; }
  bool selects(int coordinate) const;  // 1-based

 private:
  int M_;
  std::vector<int> j_;
};

// All selections of length m from {1..M}, in lexicographic order.
std::vector<IndexVector> all_index_vectors(int M, int m);

bool delta_region_contains(const IndexVector& j, std::span<const double> x);
bool delta_region_t_contains(const IndexVector& j, double t, std::span<const double> x);
bool a_set_contains(int M, int m, double t, std::span<const double> x);

struct PartitionReport {
  bool covered = true;
  bool disjoint = true;
  std::size_t violations = 0;
};

PartitionReport verify_partition_properties(int M, double t,
                                            const std::vector<std::vector<double>>& points);

}  // namespace skorohod
