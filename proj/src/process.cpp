#include "skorohod/process.hpp"

#include <algorithm>
#include <cmath>

#include "skorohod/error.hpp"

namespace skorohod {

namespace {
int multiplicity(std::span<const Cell> sorted, int cell) {
  return static_cast<int>(std::count(sorted.begin(), sorted.end(), cell));
}
}  // namespace

Partition::Partition(const Grid& grid, std::vector<int> boundaries)
    : grid_(grid), bounds_(std::move(boundaries)) {
  if (bounds_.size() < 2 || bounds_.front() != 0 || bounds_.back() != grid.n_cells())
    throw ContractViolation("partition must run from 0 to 1");
  for (std::size_t i = 1; i < bounds_.size(); ++i)
    if (bounds_[i] <= bounds_[i - 1]) throw ContractViolation("degenerate partition cell");
}

Partition Partition::from_times(const Grid& grid, const std::vector<double>& times) {
  std::vector<int> b;
  for (double t : times) b.push_back(grid.boundary(t));
  return Partition(grid, std::move(b));
}

Partition Partition::dyadic(const Grid& grid, int depth) {
  if (depth < 0 || depth > 30) throw ContractViolation("bad dyadic depth");
  const int pieces = 1 << depth;
  if (grid.n_cells() % pieces != 0)
    throw ContractViolation("dyadic depth too fine for the grid");
  std::vector<int> b;
  for (int i = 0; i <= pieces; ++i) b.push_back(i * (grid.n_cells() / pieces));
  return Partition(grid, std::move(b));
}

Partition Partition::finest(const Grid& grid) {
  std::vector<int> b(grid.n_cells() + 1);
  for (int i = 0; i <= grid.n_cells(); ++i) b[i] = i;
  return Partition(grid, std::move(b));
}

int Partition::cell_of(int grid_cell) const {
  auto it = std::lower_bound(bounds_.begin(), bounds_.end(), grid_cell);
  return static_cast<int>(it - bounds_.begin()) - 1;
}

double Partition::mesh() const {
  int widest = 0;
  for (int i = 0; i < cells(); ++i) widest = std::max(widest, right(i) - left(i));
  return grid_.time(widest);
}

int max_dyadic_depth(const Grid& grid) {
  int d = 0;
  while (grid.n_cells() % (1 << (d + 1)) == 0) ++d;
  return d;
}

std::vector<Partition> dyadic_family(const Grid& grid) {
  std::vector<Partition> family;
  const int depth = max_dyadic_depth(grid);
  for (int d = 0; d <= depth; ++d) family.push_back(Partition::dyadic(grid, d));
  if ((1 << depth) != grid.n_cells()) family.push_back(Partition::finest(grid));
  return family;
}

ChaosProcess::ChaosProcess(const Grid& grid, std::vector<ChaosFunctional> per_cell)
    : grid_(grid), max_order_(0) {
  if (static_cast<int>(per_cell.size()) != grid.n_cells())
    throw ContractViolation("process needs one functional per time cell");
  for (auto& F : per_cell) levels_.push_back({std::move(F)});
  normalize();
}

ChaosProcess::ChaosProcess(const Grid& grid, std::vector<std::vector<ChaosFunctional>> levels)
    : grid_(grid), max_order_(0), levels_(std::move(levels)) {
  if (static_cast<int>(levels_.size()) != grid.n_cells())
    throw ContractViolation("process needs one level list per time cell");
  normalize();
}

void ChaosProcess::normalize() {
  max_order_ = 0;
  for (const auto& cell : levels_) {
    if (cell.empty()) throw ContractViolation("time cell without a value");
    for (const auto& F : cell) {
      require_same_grid(grid_, F.grid());
      max_order_ = std::max(max_order_, F.max_order());
    }
  }
  for (int a = 1; a <= grid_.n_cells(); ++a) {
    auto& cell = levels_[a - 1];
    if (static_cast<int>(cell.size()) > max_order_ + 1)
      throw ContractViolation("more levels than kernel variables can produce");
    for (auto& F : cell) F = F.with_max_order(max_order_);
    for (std::size_t r = 1; r < cell.size(); ++r) {
      if (cell[r].mean() != cell[0].mean())
        throw ContractViolation("levels of a time cell must share the mean");
      // Canonical form: a level beyond the multiplicity repeats the highest valid one.
      std::vector<SymKernel> kernels;
      for (int n = 1; n <= max_order_; ++n) {
        Eigen::VectorXd v = cell[r].kernel(n).values();
        const SymKernel& fn = cell[r].kernel(n);
        for (std::size_t i = 0; i < fn.size(); ++i) {
          int m = multiplicity(fn.cells(i), a);
          if (m < static_cast<int>(r)) v[static_cast<Eigen::Index>(i)] = cell[m].kernel(n)[i];
        }
        kernels.emplace_back(grid_, n, std::move(v));
      }
      cell[r] = ChaosFunctional(grid_, cell[0].mean(), std::move(kernels));
    }
  }
}

ChaosProcess ChaosProcess::constant(const ChaosFunctional& F) {
  return ChaosProcess(F.grid(), std::vector<ChaosFunctional>(F.grid().n_cells(), F));
}

ChaosProcess ChaosProcess::deterministic(const StepFunction& f) {
  std::vector<ChaosFunctional> cells;
  for (int a = 1; a <= f.grid().n_cells(); ++a)
    cells.push_back(ChaosFunctional::constant(f.grid(), f(a)));
  return ChaosProcess(f.grid(), std::move(cells));
}

ChaosProcess ChaosProcess::brownian(const Grid& grid) {
  std::vector<std::vector<ChaosFunctional>> levels;
  for (int a = 1; a <= grid.n_cells(); ++a) {
    Eigen::VectorXd below = Eigen::VectorXd::Zero(grid.n_cells());
    below.head(a - 1).setOnes();
    Eigen::VectorXd with_own = below;
    with_own[a - 1] = 1.0;
    levels.push_back({ChaosFunctional::isonormal(StepFunction(grid, below)),
                      ChaosFunctional::isonormal(StepFunction(grid, with_own))});
  }
  return ChaosProcess(grid, std::move(levels));
}

bool ChaosProcess::ranked() const {
  return std::any_of(levels_.begin(), levels_.end(), [](const auto& c) { return c.size() > 1; });
}

const ChaosFunctional& ChaosProcess::at(int cell, int level) const {
  if (cell < 1 || cell > grid_.n_cells()) throw ContractViolation("time cell out of range");
  const auto& c = levels_[cell - 1];
  return c[std::min<std::size_t>(static_cast<std::size_t>(std::max(level, 0)), c.size() - 1)];
}

double ChaosProcess::value(int cell, int order, std::span<const Cell> sorted,
                           int level) const {
  if (order > max_order_) return 0.0;
  int r = std::min(level, multiplicity(sorted, cell));
  return at(cell, r).kernel(order).at_sorted(sorted);
}

ChaosFunctional ChaosProcess::cell_average(int cell) const {
  if (!ranked(cell)) return at(cell);
  std::vector<SymKernel> kernels;
  for (int n = 1; n <= max_order_; ++n)
    kernels.push_back(SymKernel::from_function(grid_, n, [&](std::span<const Cell> c) {
      int m = multiplicity(c, cell);
      double sum = 0.0;
      for (int r = 0; r <= m; ++r) sum += value(cell, n, c, r);
      return sum / (m + 1);
    }));
  return ChaosFunctional(grid_, at(cell).mean(), std::move(kernels));
}

ChaosProcess& ChaosProcess::operator+=(const ChaosProcess& other) {
  require_same_grid(grid_, other.grid_);
  for (int a = 1; a <= grid_.n_cells(); ++a) {
    int count = std::max(levels(a), other.levels(a));
    std::vector<ChaosFunctional> sum;
    for (int r = 0; r < count; ++r) sum.push_back(at(a, r) + other.at(a, r));
    levels_[a - 1] = std::move(sum);
  }
  normalize();
  return *this;
}

ChaosProcess& ChaosProcess::operator-=(const ChaosProcess& other) {
  ChaosProcess neg = other;
  neg *= -1.0;
  return *this += neg;
}

ChaosProcess& ChaosProcess::operator*=(double c) {
  for (auto& cell : levels_)
    for (auto& F : cell) F *= c;
  return *this;
}

SkorohodProcess::SkorohodProcess(const Grid& grid, std::vector<ChaosFunctional> values,
                                 Provenance provenance)
    : grid_(grid), values_(std::move(values)), provenance_(provenance) {
  if (static_cast<int>(values_.size()) != grid.n_cells() + 1)
    throw ContractViolation("process needs a functional at every grid time");
  if (values_.front().max_abs() > 1e-12) throw ContractViolation("Y_0 must vanish");
  for (const auto& F : values_) {
    require_same_grid(grid, F.grid());
    if (std::abs(F.mean()) > 1e-12) throw ContractViolation("Y_t must be centered");
  }
}

SkorohodProcess operator-(const SkorohodProcess& a, const SkorohodProcess& b) {
  require_same_grid(a.grid_, b.grid_);
  std::vector<ChaosFunctional> d;
  for (std::size_t k = 0; k < a.values_.size(); ++k) d.push_back(a.values_[k] - b.values_[k]);
  return SkorohodProcess(a.grid_, std::move(d), Provenance::direct);
}

}  // namespace skorohod
