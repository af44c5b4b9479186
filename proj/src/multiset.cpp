#include "skorohod/multiset.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

#include "skorohod/error.hpp"

namespace skorohod {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

MultisetTable::MultisetTable(int n_cells, int order) : n_cells_(n_cells), order_(order) {
  if (n_cells < 1 || n_cells > kMaxCells)
    throw ContractViolation("kernel grids are limited to 1..256 cells");
  if (order < 1 || order > kMaxOrder) throw ContractViolation("kernel order must be 1..4");
  size_ = binomial(n_cells + order - 1, order);
  if (size_ > kMaxTableSize) throw ContractViolation("kernel table too large for this grid and order");
  cells_.resize(size_ * order);
  weights_.resize(static_cast<Eigen::Index>(size_));

  std::vector<Cell> c(order, 1);
  while (true) {
    std::size_t r = rank(std::span<const Cell>(c));
    std::copy(c.begin(), c.end(), cells_.begin() + r * order);
    double w = factorial(order);
    for (const auto& run : runs(c)) w /= factorial(run.count);
    weights_[static_cast<Eigen::Index>(r)] = w;
    int i = order - 1;
    while (i >= 0 && c[i] == n_cells) --i;
    if (i < 0) break;
    ++c[i];
    for (int k = i + 1; k < order; ++k) c[k] = c[i];
  }
}

std::size_t MultisetTable::rank(std::span<const Cell> sorted) const {
  std::size_t r = 0;
  for (int i = 0; i < order_; ++i) r += binomial(sorted[i] - 1 + i, i + 1);
  return r;
}

std::size_t MultisetTable::rank(std::span<const int> sorted) const {
  std::size_t r = 0;
  for (int i = 0; i < order_; ++i) r += binomial(sorted[i] - 1 + i, i + 1);
  return r;
}

const MultisetTable& multiset_table(int n_cells, int order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<MultisetTable>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{n_cells, order}];
  if (!slot) slot = std::make_unique<MultisetTable>(n_cells, order);
  return *slot;
}

std::vector<CellRun> runs(std::span<const Cell> sorted) {
  std::vector<CellRun> out;
  for (Cell c : sorted) {
    if (!out.empty() && out.back().cell == c)
      ++out.back().count;
    else
      out.push_back({c, 1});
  }
  return out;
}

std::vector<Cell> remove_one(std::span<const Cell> sorted, int cell) {
  std::vector<Cell> out(sorted.begin(), sorted.end());
  auto it = std::find(out.begin(), out.end(), cell);
  if (it == out.end()) throw InternalError("cell not present in multiset");
  out.erase(it);
  return out;
}

std::vector<Cell> insert_one(std::span<const Cell> sorted, int cell) {
  std::vector<Cell> out(sorted.begin(), sorted.end());
  out.insert(std::upper_bound(out.begin(), out.end(), cell), static_cast<Cell>(cell));
  return out;
}

}  // namespace skorohod
