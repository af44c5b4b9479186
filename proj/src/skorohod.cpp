#include "skorohod/skorohod.hpp"

#include <algorithm>
#include <cmath>

#include "skorohod/error.hpp"

namespace skorohod {

namespace {

int multiplicity(std::span<const Cell> sorted, int cell) {
  return static_cast<int>(std::count(sorted.begin(), sorted.end(), cell));
}

// Order-l kernel of delta(u 1_B) at multiset mu, where B holds exactly the first
// `prefix` variables of mu in sorted order. Each variable in turn plays the time
// argument of u; same-cell variables below it set the level.
double delta_value(const ChaosProcess& u, std::span<const Cell> mu, int prefix) {
  const int l = static_cast<int>(mu.size());
  double sum = 0.0;
  int j = 0;
  while (j < prefix) {
    const int c = mu[j];
    int s = 0;
    while (j + s < prefix && mu[j + s] == c) ++s;
    if (l == 1) {
      sum += u.at(c).mean();
    } else {
      auto rest = remove_one(mu, c);
      for (int r = 0; r < s; ++r) sum += u.value(c, l - 1, rest, r);
    }
    j += s;
  }
  return sum / l;
}

ChaosFunctional increment(const Grid& grid, int lo, int hi) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(grid.n_cells());
  v.segment(lo, hi - lo).setOnes();
  return ChaosFunctional::isonormal(StepFunction(grid, std::move(v)));
}

double second_moment(const ChaosFunctional& F) {
  auto m = chaos_moments(F);
  return m.mean * m.mean + m.variance;
}

}  // namespace

ChaosFunctional skorohod_integral(const ChaosProcess& u, double t) {
  const Grid& grid = u.grid();
  const int k = grid.boundary(t);
  const int top = u.max_order() + 1;
  if (top > kMaxOrder) throw ContractViolation("integrand order too high for the kernel cap");
  std::vector<SymKernel> kernels;
  for (int l = 1; l <= top; ++l)
    kernels.push_back(SymKernel::from_function(grid, l, [&](std::span<const Cell> mu) {
      int prefix = static_cast<int>(std::count_if(mu.begin(), mu.end(),
                                                  [&](Cell c) { return c <= k; }));
      return delta_value(u, mu, prefix);
    }));
  return ChaosFunctional(grid, 0.0, std::move(kernels));
}

SkorohodProcess skorohod_process(const ChaosProcess& u) {
  std::vector<ChaosFunctional> values;
  for (int k = 0; k <= u.grid().n_cells(); ++k)
    values.push_back(skorohod_integral(u, u.grid().time(k)));
  return SkorohodProcess(u.grid(), std::move(values), Provenance::direct);
}

ChaosFunctional martingale_defect(const SkorohodProcess& Y, double s, double t) {
  const Grid& grid = Y.grid();
  if (!(grid.boundary(s) < grid.boundary(t))) throw ContractViolation("need s < t");
  return conditional_expectation(Y.at(t) - Y.at(s), TimeSet::outside(grid, s, t));
}

ChaosProcess tudor_representation(const ChaosProcess& u) {
  const Grid& grid = u.grid();
  const int L = u.max_order();
  std::vector<std::vector<ChaosFunctional>> levels;
  for (int a = 1; a <= grid.n_cells(); ++a) {
    std::vector<ChaosFunctional> cell;
    for (int level = 0; level <= L; ++level) {
      std::vector<SymKernel> kernels;
      for (int j = 1; j <= L; ++j)
        kernels.push_back(SymKernel::from_function(grid, j, [&](std::span<const Cell> mu) {
          double v = u.value(a, j, mu, level);
          // Variables in earlier cells act as the integration time s < alpha.
          for (const auto& run : runs(mu)) {
            if (run.cell >= a) continue;
            auto shifted = insert_one(remove_one(mu, run.cell), a);
            for (int r = 0; r < run.count; ++r) v += u.value(run.cell, j, shifted, r);
          }
          // Same-cell variables count only when below alpha.
          int below = std::min(level, multiplicity(mu, a));
          for (int r = 0; r < below; ++r) v += u.value(a, j, mu, r);
          return v;
        }));
      cell.emplace_back(grid, u.at(a).mean(), std::move(kernels));
    }
    levels.push_back(std::move(cell));
  }
  return ChaosProcess(grid, std::move(levels));
}

double ito_skorohod_eval(const ChaosProcess& v, double t, PathRef path) {
  const Grid& grid = v.grid();
  const int k = grid.boundary(t);
  if (path.size() != grid.n_cells()) throw ContractViolation("path length does not match grid");
  const TimeSet after = TimeSet::cells_between(grid, k, grid.n_cells());
  double sum = 0.0;
  for (int c = 1; c <= k; ++c) {
    auto A = TimeSet::cells_between(grid, 0, c - 1) | after;
    sum += eval(conditional_expectation(v.at(c), A), path) * path[c - 1];
  }
  return sum;
}

ChaosFunctional ito_skorohod_sum(const ChaosProcess& v, double t) {
  const Grid& grid = v.grid();
  const int k = grid.boundary(t);
  const TimeSet after = TimeSet::cells_between(grid, k, grid.n_cells());
  ChaosFunctional sum(grid, 0);
  for (int c = 1; c <= k; ++c) {
    auto A = TimeSet::cells_between(grid, 0, c - 1) | after;
    sum += multiply_disjoint(conditional_expectation(v.at(c), A), increment(grid, c - 1, c));
  }
  return sum;
}

ChaosProcess step_approximation(const ChaosProcess& v, const Partition& pi) {
  const Grid& grid = v.grid();
  require_same_grid(grid, pi.grid());
  std::vector<ChaosFunctional> cells;
  for (int i = 0; i < pi.cells(); ++i) {
    const int lo = pi.left(i), hi = pi.right(i);
    auto A = TimeSet::cells_between(grid, 0, lo) | TimeSet::cells_between(grid, hi, grid.n_cells());
    ChaosFunctional avg(grid, v.max_order());
    for (int c = lo + 1; c <= hi; ++c) avg += conditional_expectation(v.at(c), A);
    avg *= 1.0 / (hi - lo);
    for (int c = lo + 1; c <= hi; ++c) cells.push_back(avg);
  }
  return ChaosProcess(grid, std::move(cells));
}

SkorohodProcess ito_skorohod_synthesis(const ChaosProcess& step, const Partition& pi) {
  const Grid& grid = step.grid();
  require_same_grid(grid, pi.grid());
  const int N = grid.n_cells();
  std::vector<ChaosFunctional> F;
  for (int i = 0; i < pi.cells(); ++i) {
    const ChaosFunctional& Fi = step.at(pi.left(i) + 1);
    for (int c = pi.left(i) + 1; c <= pi.right(i); ++c)
      if (step.ranked(c) || (step.at(c) - Fi).max_abs() != 0.0)
        throw ContractViolation("step process must be constant on partition cells");
    if (!(Fi.support() & TimeSet::cells_between(grid, pi.left(i), pi.right(i))).empty())
      throw ContractViolation("step value must not depend on its own partition cell");
    F.push_back(Fi);
  }
  std::vector<ChaosFunctional> values;
  for (int k = 0; k <= N; ++k) {
    ChaosFunctional y(grid, 0);
    for (int i = 0; i < pi.cells() && pi.left(i) < k; ++i) {
      auto A = TimeSet::cells_between(grid, 0, pi.left(i)) |
               TimeSet::cells_between(grid, std::max(pi.right(i), k), N);
      y += multiply_disjoint(conditional_expectation(F[i], A),
                             increment(grid, pi.left(i), std::min(k, pi.right(i))));
    }
    values.push_back(std::move(y));
  }
  return SkorohodProcess(grid, std::move(values), Provenance::ito_skorohod);
}

KernelNorms kernel_norms(const ChaosProcess& v) {
  const Grid& grid = v.grid();
  const double dt = grid.width();
  double l2 = 0.0, derivative = 0.0;
  for (int a = 1; a <= grid.n_cells(); ++a) {
    const double mean = v.at(a).mean();
    l2 += dt * mean * mean;
    for (int j = 1; j <= v.max_order(); ++j) {
      const auto& table = multiset_table(grid.n_cells(), j);
      double s = 0.0;
      for (std::size_t i = 0; i < table.size(); ++i) {
        auto mu = table.cells(i);
        int m = multiplicity(mu, a);
        double sq = 0.0;
        for (int r = 0; r <= m; ++r) {
          double x = v.value(a, j, mu, r);
          sq += x * x;
        }
        s += table.weights()[static_cast<Eigen::Index>(i)] * sq / (m + 1);
      }
      s *= std::pow(dt, j);
      // int E[(D_s v_alpha)^2] ds = j * j! ||g_j(alpha)||^2
      l2 += dt * factorial(j) * s;
      derivative += dt * j * factorial(j) * s;
    }
  }
  return {l2, l2 + derivative};
}

double increment_energy(const SkorohodProcess& Y, const Partition& pi) {
  require_same_grid(Y.grid(), pi.grid());
  double sum = 0.0;
  for (int i = 0; i < pi.cells(); ++i)
    sum += second_moment(Y.at_boundary(pi.right(i)) - Y.at_boundary(pi.left(i)));
  return sum;
}

double v_functional(const SkorohodProcess& Y, const std::vector<Partition>& family) {
  if (family.empty()) throw ContractViolation("empty partition family");
  double best = 0.0;
  for (const auto& pi : family) best = std::max(best, increment_energy(Y, pi));
  return best;
}

double v_functional(const SkorohodProcess& Y) { return v_functional(Y, dyadic_family(Y.grid())); }

IbpReport integration_by_parts_check(const ChaosFunctional& F, const ChaosProcess& u, double t,
                                     PathRef path) {
  const Grid& grid = u.grid();
  require_same_grid(grid, F.grid());
  const int k = grid.boundary(t);
  const ChaosFunctional Fc = F.with_max_order(F.effective_order());
  if (Fc.max_order() + u.max_order() + 1 > kMaxOrder)
    throw ContractViolation("F u exceeds the chaos order cap");

  bool exact = true;
  std::vector<std::vector<ChaosFunctional>> levels;
  for (int a = 1; a <= grid.n_cells(); ++a) {
    std::vector<ChaosFunctional> cell;
    for (int r = 0; r < u.levels(a); ++r) {
      auto p = multiply_top_order(Fc, u.at(a, r));
      exact = exact && p.exact;
      cell.push_back(std::move(p.value));
    }
    levels.push_back(std::move(cell));
  }
  const ChaosProcess product(grid, std::move(levels));

  double lhs = eval(skorohod_integral(product, t), path);
  double rhs = eval(Fc, path) * eval(skorohod_integral(u, t), path);
  for (int c = 1; c <= k; ++c)
    rhs -= eval(malliavin_derivative(Fc, c), path) * eval(u.cell_average(c), path) * grid.width();
  return {lhs, rhs, exact};
}

RegionKernels::RegionKernels(const Grid& grid, int max_order) : grid_(grid) {
  if (max_order < 1 || max_order > kMaxOrder) throw ContractViolation("order must be 1..4");
  for (int l = 1; l <= max_order; ++l) f_.emplace_back(l + 1, SymKernel(grid, l));
}

ChaosFunctional RegionKernels::synthesize(double t) const {
  std::vector<SymKernel> kernels;
  for (int l = 1; l <= max_order(); ++l) {
    SymKernel sum(grid_, l);
    for (int q = 1; q <= l; ++q) sum += restrict_A(at(l, q), q, t);
    kernels.push_back(std::move(sum));
  }
  return ChaosFunctional(grid_, 0.0, std::move(kernels));
}

RegionKernels duc_nualart_extract(const ChaosProcess& u) {
  const Grid& grid = u.grid();
  const int N = grid.n_cells();
  const SkorohodProcess Y = skorohod_process(u);
  const int top = u.max_order() + 1;
  RegionKernels f(grid, top);
  auto mismatch = [](double a, double b) { return std::abs(a - b) > 1e-12 * (1.0 + std::abs(b)); };

  for (int l = 1; l <= top; ++l) {
    const auto& table = multiset_table(N, l);
    std::vector<Eigen::VectorXd> values(l + 1, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(table.size())));
    for (std::size_t i = 0; i < table.size(); ++i) {
      auto c = table.cells(i);
      for (int k = 0; k < c[0]; ++k)
        if (Y.at_boundary(k).kernel(l)[i] != 0.0)
          throw InternalError("Y_t has mass where no variable lies below t");
      for (int q = 1; q <= l; ++q) {
        double value;
        if (q == l || c[q - 1] < c[q]) {
          // Some grid time splits mu after its q-th variable: read Y there.
          const int lo = c[q - 1], hi = q == l ? N : c[q] - 1;
          value = Y.at_boundary(lo).kernel(l)[i];
          for (int k = lo + 1; k <= hi; ++k)
            if (mismatch(Y.at_boundary(k).kernel(l)[i], value))
              throw InternalError("region kernel differs across grid times");
        } else {
          // The split falls inside a cell; only times within that cell see it.
          value = delta_value(u, c, q);
        }
        values[q][static_cast<Eigen::Index>(i)] = value;
      }
    }
    for (int q = 1; q <= l; ++q) f.at(l, q) = SymKernel(grid, l, std::move(values[q]));
  }
  return f;
}

double majoration_lhs(const RegionKernels& f) {
  double lhs = 0.0;
  for (int l = 1; l <= f.max_order(); ++l)
    for (int q = 0; q < l; ++q) lhs += factorial(l) * (f.at(l, q) - f.at(l, q + 1)).norm_sq();
  return lhs;
}

Majoration majoration_check(const ChaosProcess& u) {
  return {majoration_lhs(duc_nualart_extract(u)), v_functional(skorohod_process(u))};
}

}  // namespace skorohod
