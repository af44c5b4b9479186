#include "skorohod/sym_kernel.hpp"

#include <algorithm>
#include <cmath>

#include "skorohod/error.hpp"

namespace skorohod {

namespace {

void require_same_shape(const SymKernel& a, const SymKernel& b) {
  require_same_grid(a.grid(), b.grid());
  if (a.order() != b.order()) throw ContractViolation("kernel order mismatch");
}

// Visits every way of drawing a sub-multiset of size k from `sorted`, passing the
// drawn part, the rest, and the number of position subsets that realize it.
void for_each_split(std::span<const Cell> sorted, int k,
                    const std::function<void(std::span<const Cell>,
                                             std::span<const Cell>, double)>& visit) {
  auto rs = runs(sorted);
  std::vector<int> take(rs.size(), 0);
  std::vector<Cell> left, right;
  std::function<void(std::size_t, int, double)> rec = [&](std::size_t r, int remaining,
                                                          double weight) {
    if (r == rs.size()) {
      if (remaining != 0) return;
      left.clear();
      right.clear();
      for (std::size_t i = 0; i < rs.size(); ++i) {
        left.insert(left.end(), take[i], static_cast<Cell>(rs[i].cell));
        right.insert(right.end(), rs[i].count - take[i], static_cast<Cell>(rs[i].cell));
      }
      visit(left, right, weight);
      return;
    }
    for (int s = 0; s <= std::min(rs[r].count, remaining); ++s) {
      take[r] = s;
      rec(r + 1, remaining - s, weight * static_cast<double>(binomial(rs[r].count, s)));
    }
  };
  rec(0, k, 1.0);
}

}  // namespace

SymKernel::SymKernel(const Grid& grid, int order)
    : grid_(grid),
      order_(order),
      table_(&multiset_table(grid.n_cells(), order)),
      values_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(table_->size()))) {}

SymKernel::SymKernel(const Grid& grid, int order, Eigen::VectorXd values)
    : grid_(grid),
      order_(order),
      table_(&multiset_table(grid.n_cells(), order)),
      values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.size()) != table_->size())
    throw ContractViolation("kernel needs one value per multiset");
}

SymKernel SymKernel::from_function(const Grid& grid, int order, const CellFn& value) {
  SymKernel f(grid, order);
  for (std::size_t i = 0; i < f.size(); ++i)
    f.values_[static_cast<Eigen::Index>(i)] = value(f.cells(i));
  return f;
}

SymKernel SymKernel::constant(const Grid& grid, int order, double value) {
  SymKernel f(grid, order);
  f.values_.setConstant(value);
  return f;
}

SymKernel SymKernel::tensor_power(const StepFunction& h, int order) {
  return from_function(h.grid(), order, [&](std::span<const Cell> c) {
    double v = 1.0;
    for (auto cell : c) v *= h(cell);
    return v;
  });
}

double SymKernel::at(std::span<const int> cells) const {
  if (static_cast<int>(cells.size()) != order_) throw ContractViolation("wrong number of cells");
  std::vector<int> sorted(cells.begin(), cells.end());
  std::sort(sorted.begin(), sorted.end());
  for (int c : sorted)
    if (c < 1 || c > grid_.n_cells()) throw ContractViolation("cell index out of range");
  return values_[static_cast<Eigen::Index>(table_->rank(std::span<const int>(sorted)))];
}

double SymKernel::norm_sq() const {
  return std::pow(grid_.width(), order_) * values_.cwiseAbs2().dot(table_->weights());
}

TimeSet SymKernel::support() const {
  std::vector<char> hit(grid_.n_cells(), 0);
  for (std::size_t i = 0; i < size(); ++i)
    if (values_[static_cast<Eigen::Index>(i)] != 0.0)
      for (auto c : cells(i)) hit[c - 1] = 1;
  std::vector<int> cs;
  for (int c = 1; c <= grid_.n_cells(); ++c)
    if (hit[c - 1]) cs.push_back(c);
  return TimeSet(grid_, cs);
}

SymKernel& SymKernel::operator+=(const SymKernel& other) {
  require_same_shape(*this, other);
  values_ += other.values_;
  return *this;
}

SymKernel& SymKernel::operator-=(const SymKernel& other) {
  require_same_shape(*this, other);
  values_ -= other.values_;
  return *this;
}

SymKernel& SymKernel::operator*=(double c) {
  values_ *= c;
  return *this;
}

double inner(const SymKernel& f, const SymKernel& g) {
  require_same_shape(f, g);
  return std::pow(f.grid().width(), f.order()) *
         f.values().cwiseProduct(g.values()).dot(f.table().weights());
}

RawTensor::RawTensor(const Grid& grid, int order) : grid_(grid), order_(order) {
  if (order < 1 || order > kMaxOrder) throw ContractViolation("tensor order must be 1..4");
  Eigen::Index n = 1;
  for (int i = 0; i < order; ++i) n *= grid.n_cells();
  values_ = Eigen::VectorXd::Zero(n);
}

Eigen::Index RawTensor::flat_index(std::span<const int> cells) const {
  if (static_cast<int>(cells.size()) != order_) throw ContractViolation("wrong number of cells");
  Eigen::Index idx = 0;
  for (int c : cells) {
    if (c < 1 || c > grid_.n_cells()) throw ContractViolation("cell index out of range");
    idx = idx * grid_.n_cells() + (c - 1);
  }
  return idx;
}

double& RawTensor::at(std::span<const int> cells) { return values_[flat_index(cells)]; }
double RawTensor::at(std::span<const int> cells) const { return values_[flat_index(cells)]; }

std::vector<int> RawTensor::tuple(Eigen::Index flat) const {
  std::vector<int> t(order_);
  for (int i = order_ - 1; i >= 0; --i) {
    t[i] = static_cast<int>(flat % grid_.n_cells()) + 1;
    flat /= grid_.n_cells();
  }
  return t;
}

double RawTensor::norm_sq() const {
  return std::pow(grid_.width(), order_) * values_.squaredNorm();
}

SymKernel symmetrize(const RawTensor& raw) {
  const auto& table = multiset_table(raw.grid().n_cells(), raw.order());
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(table.size()));
  for (Eigen::Index flat = 0; flat < raw.size(); ++flat) {
    auto t = raw.tuple(flat);
    std::sort(t.begin(), t.end());
    sum[static_cast<Eigen::Index>(table.rank(std::span<const int>(t)))] += raw.values()[flat];
  }
  return SymKernel(raw.grid(), raw.order(), sum.cwiseQuotient(table.weights()));
}

RawTensor expand(const SymKernel& f) {
  RawTensor raw(f.grid(), f.order());
  for (Eigen::Index flat = 0; flat < raw.size(); ++flat) {
    auto t = raw.tuple(flat);
    raw.values()[flat] = f.at(t);
  }
  return raw;
}

SymKernel tensor0(const SymKernel& f, const SymKernel& g) {
  require_same_grid(f.grid(), g.grid());
  const int p = f.order(), n = f.order() + g.order();
  const double norm = static_cast<double>(binomial(n, p));
  return SymKernel::from_function(f.grid(), n, [&](std::span<const Cell> mu) {
    double sum = 0.0;
    for_each_split(mu, p, [&](auto left, auto right, double count) {
      sum += count * f.at_sorted(left) * g.at_sorted(right);
    });
    return sum / norm;
  });
}

SymKernel project(const SymKernel& f, const TimeSet& A) {
  require_same_grid(f.grid(), A.grid());
  Eigen::VectorXd v = f.values();
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto c = f.cells(i);
    if (!std::all_of(c.begin(), c.end(), [&](Cell x) { return A.contains(x); }))
      v[static_cast<Eigen::Index>(i)] = 0.0;
  }
  return SymKernel(f.grid(), f.order(), std::move(v));
}

SymKernel restrict_A(const SymKernel& f, int q, double t) {
  if (q < 0 || q > f.order()) throw ContractViolation("q must lie in 0..order");
  const int k = f.grid().boundary(t);
  Eigen::VectorXd v = f.values();
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto c = f.cells(i);
    auto left = std::count_if(c.begin(), c.end(), [&](Cell x) { return x <= k; });
    if (left != q) v[static_cast<Eigen::Index>(i)] = 0.0;
  }
  return SymKernel(f.grid(), f.order(), std::move(v));
}

SymKernel reverse_kernel(const SymKernel& f) {
  const int n = f.grid().n_cells();
  return SymKernel::from_function(f.grid(), f.order(), [&](std::span<const Cell> c) {
    std::vector<Cell> r(c.rbegin(), c.rend());
    for (auto& x : r) x = static_cast<Cell>(n + 1 - x);
    return f.at_sorted(r);
  });
}

}  // namespace skorohod
