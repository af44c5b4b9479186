#include "skorohod/chaos.hpp"

#include <algorithm>
#include <cmath>

#include "skorohod/error.hpp"
#include "skorohod/parallel.hpp"

namespace skorohod {

double hermite(int n, double x) {
  if (n < 0) throw ContractViolation("hermite order must be >= 0");
  double prev = 1.0, cur = x;
  if (n == 0) return prev;
  for (int k = 1; k < n; ++k) {
    double next = (x * cur - prev) / (k + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {

// factor(c, m) = dt^{m/2} H_m(dX_c / sqrt(dt)), the multiple integral of 1_c^{(x)m} / m!.
class CellFactors {
 public:
  CellFactors(PathRef path, double width, int max_order)
      : stride_(max_order + 1), table_(path.size() * stride_) {
    const double root = std::sqrt(width);
    for (Eigen::Index c = 0; c < path.size(); ++c) {
      double x = path[c] / root, scale = 1.0;
      for (int m = 0; m <= max_order; ++m) {
        table_[c * stride_ + m] = scale * hermite(m, x);
        scale *= root;
      }
    }
  }
  double operator()(int cell, int m) const { return table_[(cell - 1) * stride_ + m]; }

 private:
  Eigen::Index stride_;
  std::vector<double> table_;
};

double eval_with(const SymKernel& f, const CellFactors& factors) {
  const int n = f.order();
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    double v = f[i];
    if (v == 0.0) continue;
    auto c = f.cells(i);
    int j = 0;
    while (j < n) {
      int m = 1;
      while (j + m < n && c[j + m] == c[j]) ++m;
      v *= factors(c[j], m);
      j += m;
    }
    sum += v;
  }
  return factorial(n) * sum;
}

void require_path(PathRef path, const Grid& grid) {
  if (path.size() != grid.n_cells()) throw ContractViolation("path length does not match grid");
}

ChaosFunctional raw_product(const ChaosFunctional& F, const ChaosFunctional& G) {
  require_same_grid(F.grid(), G.grid());
  const int lf = F.effective_order(), lg = G.effective_order();
  const int top = std::max({lf + lg, F.max_order(), G.max_order()});
  if (lf + lg > kMaxOrder) throw ContractViolation("product exceeds the chaos order cap");
  const int cap = std::min(top, kMaxOrder);
  std::vector<SymKernel> kernels;
  for (int n = 1; n <= cap; ++n) {
    SymKernel k(F.grid(), n);
    if (n <= lg) k += F.mean() * G.kernel(n);
    if (n <= lf) k += G.mean() * F.kernel(n);
    for (int p = 1; p < n; ++p)
      if (p <= lf && n - p <= lg) k += tensor0(F.kernel(p), G.kernel(n - p));
    kernels.push_back(std::move(k));
  }
  return ChaosFunctional(F.grid(), F.mean() * G.mean(), std::move(kernels));
}

}  // namespace

double eval_multiple_integral(const SymKernel& f, PathRef path) {
  require_path(path, f.grid());
  return eval_with(f, CellFactors(path, f.grid().width(), f.order()));
}

ChaosFunctional::ChaosFunctional(const Grid& grid, int max_order) : grid_(grid), mean_(0.0) {
  if (max_order < 0 || max_order > kMaxOrder) throw ContractViolation("chaos order must be 0..4");
  for (int n = 1; n <= max_order; ++n) kernels_.emplace_back(grid, n);
}

ChaosFunctional::ChaosFunctional(const Grid& grid, double mean, std::vector<SymKernel> kernels)
    : grid_(grid), mean_(mean), kernels_(std::move(kernels)) {
  if (kernels_.size() > static_cast<std::size_t>(kMaxOrder))
    throw ContractViolation("chaos order must be 0..4");
  for (std::size_t n = 0; n < kernels_.size(); ++n) {
    require_same_grid(grid, kernels_[n].grid());
    if (kernels_[n].order() != static_cast<int>(n) + 1)
      throw ContractViolation("kernel list must hold orders 1..L in sequence");
  }
}

ChaosFunctional ChaosFunctional::constant(const Grid& grid, double value) {
  return ChaosFunctional(grid, value, {});
}

ChaosFunctional ChaosFunctional::from_kernel(const SymKernel& f) {
  ChaosFunctional F(f.grid(), f.order());
  F.kernels_[f.order() - 1] = f;
  return F;
}

ChaosFunctional ChaosFunctional::isonormal(const StepFunction& h) {
  return from_kernel(SymKernel(h.grid(), 1, h.values()));
}

ChaosFunctional ChaosFunctional::with_max_order(int order) const {
  if (order < 0 || order > kMaxOrder) throw ContractViolation("chaos order must be 0..4");
  if (order < effective_order()) throw ContractViolation("truncation would drop a nonzero kernel");
  ChaosFunctional out(grid_, order);
  out.mean_ = mean_;
  for (int n = 1; n <= std::min(order, max_order()); ++n) out.kernels_[n - 1] = kernels_[n - 1];
  return out;
}

int ChaosFunctional::effective_order() const {
  for (int n = max_order(); n >= 1; --n)
    if (kernels_[n - 1].max_abs() != 0.0) return n;
  return 0;
}

double ChaosFunctional::max_abs() const {
  double m = std::abs(mean_);
  for (const auto& k : kernels_) m = std::max(m, k.max_abs());
  return m;
}

TimeSet ChaosFunctional::support() const {
  TimeSet s(grid_);
  for (const auto& k : kernels_) s = s | k.support();
  return s;
}

ChaosFunctional& ChaosFunctional::operator+=(const ChaosFunctional& other) {
  require_same_grid(grid_, other.grid_);
  if (other.max_order() > max_order()) *this = with_max_order(other.max_order());
  mean_ += other.mean_;
  for (int n = 1; n <= other.max_order(); ++n) kernels_[n - 1] += other.kernels_[n - 1];
  return *this;
}

ChaosFunctional& ChaosFunctional::operator-=(const ChaosFunctional& other) {
  require_same_grid(grid_, other.grid_);
  if (other.max_order() > max_order()) *this = with_max_order(other.max_order());
  mean_ -= other.mean_;
  for (int n = 1; n <= other.max_order(); ++n) kernels_[n - 1] -= other.kernels_[n - 1];
  return *this;
}

ChaosFunctional& ChaosFunctional::operator*=(double c) {
  mean_ *= c;
  for (auto& k : kernels_) k *= c;
  return *this;
}

double eval(const ChaosFunctional& F, PathRef path) {
  require_path(path, F.grid());
  CellFactors factors(path, F.grid().width(), F.max_order());
  double sum = F.mean();
  for (const auto& k : F.kernels()) sum += eval_with(k, factors);
  return sum;
}

Eigen::VectorXd eval_batch(const ChaosFunctional& F, const PathBatch& batch, int workers) {
  require_same_grid(F.grid(), batch.grid());
  Eigen::VectorXd out(static_cast<Eigen::Index>(batch.count()));
  parallel_for(batch.count(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p)
      out[static_cast<Eigen::Index>(p)] = eval(F, batch.path(p));
  });
  return out;
}

Moments chaos_moments(const ChaosFunctional& F) {
  double var = 0.0;
  for (const auto& k : F.kernels()) var += factorial(k.order()) * k.norm_sq();
  return {F.mean(), var};
}

double expectation_of_product(const ChaosFunctional& F, const ChaosFunctional& G) {
  require_same_grid(F.grid(), G.grid());
  double sum = F.mean() * G.mean();
  for (int n = 1; n <= std::min(F.max_order(), G.max_order()); ++n)
    sum += factorial(n) * inner(F.kernel(n), G.kernel(n));
  return sum;
}

ChaosFunctional malliavin_derivative(const ChaosFunctional& F, int cell) {
  if (cell < 1 || cell > F.grid().n_cells()) throw ContractViolation("cell index out of range");
  const int L = F.max_order();
  double mean = L >= 1 ? F.kernel(1).at(std::span<const int>(&cell, 1)) : 0.0;
  std::vector<SymKernel> kernels;
  for (int n = 2; n <= L; ++n) {
    const SymKernel& f = F.kernel(n);
    kernels.push_back(SymKernel::from_function(
        F.grid(), n - 1, [&](std::span<const Cell> c) {
          return n * f.at_sorted(insert_one(c, cell));
        }));
  }
  return ChaosFunctional(F.grid(), mean, std::move(kernels));
}

ChaosFunctional conditional_expectation(const ChaosFunctional& F, const TimeSet& A) {
  std::vector<SymKernel> kernels;
  for (const auto& k : F.kernels()) kernels.push_back(project(k, A));
  return ChaosFunctional(F.grid(), F.mean(), std::move(kernels));
}

ChaosFunctional multiply_disjoint(const ChaosFunctional& F, const ChaosFunctional& G) {
  require_same_grid(F.grid(), G.grid());
  if (!(F.support() & G.support()).empty())
    throw ContractViolation("factors share cells; the product is not the top-order term");
  return raw_product(F, G);
}

Product multiply_top_order(const ChaosFunctional& F, const ChaosFunctional& G) {
  require_same_grid(F.grid(), G.grid());
  bool exact = F.deterministic() || G.deterministic() || (F.support() & G.support()).empty();
  return {raw_product(F, G), exact};
}

}  // namespace skorohod
