#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>

#include "skorohod/grid.hpp"
#include "skorohod/multiset.hpp"
#include "skorohod/paths.hpp"

namespace skorohod {

// Symmetric step function on [0,1]^n. Entry i is the function value on the block of
// points whose cells form multiset i of the table.
class SymKernel {
 public:
  SymKernel(const Grid& grid, int order);  // zero
  SymKernel(const Grid& grid, int order, Eigen::VectorXd values);

  using CellFn = std::function<double(std::span<const Cell>)>;
  static SymKernel from_function(const Grid& grid, int order, const CellFn& value);
  static SymKernel constant(const Grid& grid, int order, double value);
  // h (x) ... (x) h
  static SymKernel tensor_power(const StepFunction& h, int order);

  const Grid& grid() const { return grid_; }
  int order() const { return order_; }
  std::size_t size() const { return table_->size(); }
  const MultisetTable& table() const { return *table_; }
  std::span<const Cell> cells(std::size_t i) const { return table_->cells(i); }
  const Eigen::VectorXd& values() const { return values_; }

  double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }
  // Value at any ordering of cells (1-based).
  double at(std::span<const int> cells) const;
  double at_sorted(std::span<const Cell> sorted) const {
    return values_[static_cast<Eigen::Index>(table_->rank(sorted))];
  }

  double norm_sq() const;
  double max_abs() const { return values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0; }
  // Cells touched by a nonzero entry.
  TimeSet support() const;

  SymKernel& operator+=(const SymKernel& other);
  SymKernel& operator-=(const SymKernel& other);
  SymKernel& operator*=(double c);
  friend SymKernel operator+(SymKernel a, const SymKernel& b) { return a += b; }
  friend SymKernel operator-(SymKernel a, const SymKernel& b) { return a -= b; }
  friend SymKernel operator*(double c, SymKernel a) { return a *= c; }

 private:
  Grid grid_;
  int order_;
  const MultisetTable* table_;
  Eigen::VectorXd values_;
};

double inner(const SymKernel& f, const SymKernel& g);

// Function on ordered n-tuples of cells, not necessarily symmetric.
class RawTensor {
 public:
  RawTensor(const Grid& grid, int order);

  const Grid& grid() const { return grid_; }
  int order() const { return order_; }
  Eigen::Index size() const { return values_.size(); }
  double& at(std::span<const int> cells);
  double at(std::span<const int> cells) const;
  const Eigen::VectorXd& values() const { return values_; }
  Eigen::VectorXd& values() { return values_; }
  // Tuple of the flat index (first coordinate varies slowest).
  std::vector<int> tuple(Eigen::Index flat) const;
  double norm_sq() const;

 private:
  Eigen::Index flat_index(std::span<const int> cells) const;
  Grid grid_;
  int order_;
  Eigen::VectorXd values_;
};

SymKernel symmetrize(const RawTensor& raw);
RawTensor expand(const SymKernel& f);

// Symmetrized f (x) g.
SymKernel tensor0(const SymKernel& f, const SymKernel& g);

// Keeps entries whose cells all lie in A.
SymKernel project(const SymKernel& f, const TimeSet& A);

// Keeps entries with exactly q cells left of grid time t.
SymKernel restrict_A(const SymKernel& f, int q, double t);

// f(1 - x): cell c becomes N+1-c.
SymKernel reverse_kernel(const SymKernel& f);

}  // namespace skorohod
