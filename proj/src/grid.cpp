#include "skorohod/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "skorohod/error.hpp"

namespace skorohod {

namespace {
constexpr double kAlignTol = 1e-9;

void require_dimension(std::span<const double> x, int M) {
  if (static_cast<int>(x.size()) != M)
    throw ContractViolation("point has " + std::to_string(x.size()) + " coordinates, expected " +
                            std::to_string(M));
}

void require_interior(std::span<const double> x) {
  for (double v : x)
    if (!(v > 0.0 && v < 1.0)) throw ContractViolation("coordinates must lie in (0,1)");
}

// Largest selected coordinate (0 if none) and smallest unselected one (1 if none).
std::pair<double, double> split_extremes(const IndexVector& j, std::span<const double> x) {
  double hi = 0.0, lo = 1.0;
  for (int i = 1; i <= j.M(); ++i) {
    if (j.selects(i))
      hi = std::max(hi, x[i - 1]);
    else
      lo = std::min(lo, x[i - 1]);
  }
  return {hi, lo};
}
}  // namespace

Grid::Grid(int n_cells) : n_(n_cells) {
  if (n_cells < 1) throw ContractViolation("grid needs at least one cell");
}

bool Grid::aligned(double t) const {
  if (!(t >= -kAlignTol && t <= 1.0 + kAlignTol)) return false;
  double scaled = t * n_;
  return std::abs(scaled - std::round(scaled)) <= kAlignTol * n_;
}

int Grid::boundary(double t) const {
  if (!aligned(t))
    throw ContractViolation("time " + std::to_string(t) + " is not on the grid of " +
                            std::to_string(n_) + " cells");
  return static_cast<int>(std::lround(t * n_));
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw ContractViolation("grid mismatch");
}

TimeSet::TimeSet(const Grid& grid) : grid_(grid), member_(grid.n_cells(), 0) {}

TimeSet::TimeSet(const Grid& grid, std::span<const int> cells) : TimeSet(grid) {
  for (int c : cells) {
    if (c < 1 || c > grid.n_cells()) throw ContractViolation("cell index out of range");
    if (member_[c - 1]) throw ContractViolation("duplicate cell index");
    member_[c - 1] = 1;
  }
}

TimeSet TimeSet::full(const Grid& grid) {
  TimeSet s(grid);
  std::fill(s.member_.begin(), s.member_.end(), 1);
  return s;
}

TimeSet TimeSet::cells_between(const Grid& grid, int lo, int hi) {
  if (lo < 0 || hi > grid.n_cells() || lo > hi) throw ContractViolation("bad boundary range");
  TimeSet s(grid);
  for (int c = lo + 1; c <= hi; ++c) s.member_[c - 1] = 1;
  return s;
}

TimeSet TimeSet::interval(const Grid& grid, double a, double b) {
  return cells_between(grid, grid.boundary(a), grid.boundary(b));
}

TimeSet TimeSet::outside(const Grid& grid, double s, double t) {
  return before(grid, s) | after(grid, t);
}

std::vector<int> TimeSet::cells() const {
  std::vector<int> out;
  for (int c = 1; c <= grid_.n_cells(); ++c)
    if (member_[c - 1]) out.push_back(c);
  return out;
}

bool TimeSet::empty() const {
  return std::none_of(member_.begin(), member_.end(), [](char m) { return m != 0; });
}

TimeSet TimeSet::complement() const {
  TimeSet s(grid_);
  for (std::size_t i = 0; i < member_.size(); ++i) s.member_[i] = member_[i] ? 0 : 1;
  return s;
}

TimeSet TimeSet::reversed() const {
  TimeSet s(grid_);
  std::reverse_copy(member_.begin(), member_.end(), s.member_.begin());
  return s;
}

TimeSet operator|(const TimeSet& a, const TimeSet& b) {
  require_same_grid(a.grid_, b.grid_);
  TimeSet s(a.grid_);
  for (std::size_t i = 0; i < s.member_.size(); ++i) s.member_[i] = a.member_[i] | b.member_[i];
  return s;
}

TimeSet operator&(const TimeSet& a, const TimeSet& b) {
  require_same_grid(a.grid_, b.grid_);
  TimeSet s(a.grid_);
  for (std::size_t i = 0; i < s.member_.size(); ++i) s.member_[i] = a.member_[i] & b.member_[i];
  return s;
}

IndexVector::IndexVector(int M, std::vector<int> j) : M_(M), j_(std::move(j)) {
  if (M < 1) throw ContractViolation("index vector needs M >= 1");
  for (std::size_t i = 0; i < j_.size(); ++i) {
    if (j_[i] < 1 || j_[i] > M) throw ContractViolation("index vector component out of range");
    if (i > 0 && j_[i] <= j_[i - 1])
      throw ContractViolation("index vector must be strictly increasing");
  }
}

bool IndexVector::selects(int coordinate) const {
  return std::binary_search(j_.begin(), j_.end(), coordinate);
}

std::vector<IndexVector> all_index_vectors(int M, int m) {
  if (m < 0 || m > M) throw ContractViolation("selection length out of range");
  std::vector<IndexVector> out;
  std::vector<int> j(m);
  for (int i = 0; i < m; ++i) j[i] = i + 1;
  while (true) {
    out.emplace_back(M, j);
    int i = m - 1;
    while (i >= 0 && j[i] == M - m + i + 1) --i;
    if (i < 0) break;
    ++j[i];
    for (int k = i + 1; k < m; ++k) j[k] = j[k - 1] + 1;
  }
  return out;
}

bool delta_region_contains(const IndexVector& j, std::span<const double> x) {
  require_dimension(x, j.M());
  require_interior(x);
  auto [hi, lo] = split_extremes(j, x);
  return hi < lo;
}

bool delta_region_t_contains(const IndexVector& j, double t, std::span<const double> x) {
  require_dimension(x, j.M());
  require_interior(x);
  auto [hi, lo] = split_extremes(j, x);
  return hi < t && t < lo;
}

bool a_set_contains(int M, int m, double t, std::span<const double> x) {
  if (m < 0 || m > M) throw ContractViolation("m out of range 0..M");
  require_dimension(x, M);
  require_interior(x);
  int below = 0, above = 0;
  for (double v : x) {
    if (v < t) ++below;
    if (v > t) ++above;
  }
  return below == m && above == M - m;
}

PartitionReport verify_partition_properties(int M, double t,
                                            const std::vector<std::vector<double>>& points) {
  std::vector<std::vector<IndexVector>> selections;
  for (int m = 0; m <= M; ++m) selections.push_back(all_index_vectors(M, m));

  PartitionReport report;
  for (const auto& x : points) {
    require_dimension(x, M);
    require_interior(x);
    std::vector<double> sorted(x);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw RejectedSample("sample point has tied coordinates");
    if (std::find(sorted.begin(), sorted.end(), t) != sorted.end())
      throw RejectedSample("sample point has a coordinate equal to t");

    int a_hits = 0, t_region_hits = 0, region_hits = 0;
    bool disjoint = true;
    for (int m = 0; m <= M; ++m) {
      bool in_a = a_set_contains(M, m, t, x);
      a_hits += in_a;
      int t_hits_m = 0, hits_m = 0;
      for (const auto& j : selections[m]) {
        t_hits_m += delta_region_t_contains(j, t, x);
        hits_m += delta_region_contains(j, x);
      }
      // The count criterion and the enumeration over j must agree.
      if (in_a != (t_hits_m > 0)) disjoint = false;
      if (hits_m > 1 || t_hits_m > 1) disjoint = false;
      t_region_hits += t_hits_m;
      region_hits += hits_m;
    }
    bool covered = a_hits == 1 && t_region_hits == 1 && region_hits >= 1;
    if (!covered) report.covered = false;
    if (!disjoint) report.disjoint = false;
    if (!covered || !disjoint) ++report.violations;
  }
  return report;
}

}  // namespace skorohod
