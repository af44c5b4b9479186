#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

namespace skorohod {

// One grid cell index, 1-based.
using Cell = std::uint16_t;

inline constexpr int kMaxCells = 256;
// Largest kernel table we agree to build (entries).
inline constexpr std::size_t kMaxTableSize = std::size_t{1} << 24;
inline constexpr int kMaxOrder = 4;

// Binomial coefficient for small arguments (exact in 64 bits at desk scale).
std::uint64_t binomial(int n, int k);
double factorial(int n);

// Every sorted n-multiset of cells 1..N, indexed by colex rank of c_i + i.
class MultisetTable {
 public:
  MultisetTable(int n_cells, int order);

  int n_cells() const { return n_cells_; }
  int order() const { return order_; }
  std::size_t size() const { return size_; }

  std::span<const Cell> cells(std::size_t index) const {
    return {cells_.data() + index * order_, static_cast<std::size_t>(order_)};
  }
  // Number of distinct orderings n!/prod(m_j!).
  const Eigen::VectorXd& weights() const { return weights_; }

  // Rank of a sorted multiset of this order.
  std::size_t rank(std::span<const Cell> sorted) const;
  std::size_t rank(std::span<const int> sorted) const;

 private:
  int n_cells_;
  int order_;
  std::size_t size_;
  std::vector<Cell> cells_;
  Eigen::VectorXd weights_;
};

// Shared, lazily built, thread-safe.
const MultisetTable& multiset_table(int n_cells, int order);

// Multiplicity of each distinct cell of a sorted multiset, as (cell, count) runs.
struct CellRun {
  int cell;
  int count;
};
std::vector<CellRun> runs(std::span<const Cell> sorted);

// Sorted multiset with one copy of `cell` removed / inserted.
std::vector<Cell> remove_one(std::span<const Cell> sorted, int cell);
std::vector<Cell> insert_one(std::span<const Cell> sorted, int cell);

}  // namespace skorohod
