#include "skorohod/bf.hpp"

#include <algorithm>
#include <cmath>

#include "skorohod/error.hpp"

namespace skorohod {

namespace {

constexpr double kRankTol = 1e-12;

// Separable expansion M = sum_k col_k row_k by complete pivoting. Pivot ties go to
// the lowest column, then the lowest row.
std::vector<std::pair<Eigen::VectorXd, Eigen::RowVectorXd>> rank_factorize(Eigen::MatrixXd R) {
  std::vector<std::pair<Eigen::VectorXd, Eigen::RowVectorXd>> terms;
  if (R.size() == 0) return terms;
  const double tol = kRankTol * std::max(1.0, R.cwiseAbs().maxCoeff());
  while (true) {
    Eigen::Index pr = 0, pc = 0;
    double best = -1.0;
    for (Eigen::Index c = 0; c < R.cols(); ++c)
      for (Eigen::Index r = 0; r < R.rows(); ++r)
        if (std::abs(R(r, c)) > best) {
          best = std::abs(R(r, c));
          pr = r;
          pc = c;
        }
    if (best <= tol) break;
    Eigen::VectorXd col = R.col(pc);
    Eigen::RowVectorXd row = R.row(pr) / R(pr, pc);
    R.noalias() -= col * row;
    terms.emplace_back(std::move(col), std::move(row));
  }
  return terms;
}

// Indices of multisets of the table whose cells all lie in [lo+1, hi].
std::vector<std::size_t> multisets_within(const MultisetTable& table, int lo, int hi) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < table.size(); ++i) {
    auto c = table.cells(i);
    if (c.front() > lo && c.back() <= hi) out.push_back(i);
  }
  return out;
}

ChaosFunctional increment(const Grid& grid, int lo, int hi) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(grid.n_cells());
  v.segment(lo, hi - lo).setOnes();
  return ChaosFunctional::isonormal(StepFunction(grid, std::move(v)));
}

}  // namespace

BFProcess::BFProcess(const Grid& grid, std::vector<BFSummand> summands)
    : grid_(grid), summands_(std::move(summands)) {
  for (const auto& s : summands_) {
    require_same_grid(grid, s.forward.grid());
    require_same_grid(grid, s.backward.grid());
    if (s.forward.mean() != 0.0) throw ContractViolation("forward factor must be centered");
  }
}

double bf_eval(const BFProcess& Z, double t, PathRef path) {
  const Grid& grid = Z.grid();
  const auto past = TimeSet::before(grid, t), future = TimeSet::after(grid, t);
  double sum = 0.0;
  for (const auto& s : Z.summands()) {
    double m = eval(conditional_expectation(s.forward, past), path);
    if (m == 0.0) continue;
    sum += m * eval(conditional_expectation(s.backward, future), path);
  }
  return sum;
}

ChaosFunctional bf_functional(const BFProcess& Z, double t) {
  const Grid& grid = Z.grid();
  const auto past = TimeSet::before(grid, t), future = TimeSet::after(grid, t);
  ChaosFunctional sum(grid, 0);
  for (const auto& s : Z.summands())
    sum += multiply_disjoint(conditional_expectation(s.forward, past),
                             conditional_expectation(s.backward, future));
  return sum;
}

SkorohodProcess bf_skorohod_process(const BFProcess& Z) {
  std::vector<ChaosFunctional> values;
  for (int k = 0; k <= Z.grid().n_cells(); ++k) values.push_back(bf_functional(Z, Z.grid().time(k)));
  return SkorohodProcess(Z.grid(), std::move(values), Provenance::forward_backward);
}

std::vector<SplitPair> split_two_sided(const ChaosFunctional& F, double a, double a_prime) {
  const Grid& grid = F.grid();
  const int N = grid.n_cells();
  const int ka = grid.boundary(a), kb = grid.boundary(a_prime);
  if (ka > kb) throw ContractViolation("split needs a <= a'");
  const TimeSet left = TimeSet::cells_between(grid, 0, ka);
  const TimeSet right = TimeSet::cells_between(grid, kb, N);
  if (!(F.support() & (left | right).complement()).empty())
    throw ContractViolation("functional has kernel mass outside [0,a] u [a',1]");

  const ChaosFunctional one = ChaosFunctional::constant(grid, 1.0);
  ChaosFunctional pure_left = ChaosFunctional::constant(grid, F.mean());
  ChaosFunctional pure_right(grid, 0);
  std::vector<SplitPair> mixed;

  for (int n = 1; n <= F.effective_order(); ++n) {
    const SymKernel& f = F.kernel(n);
    pure_left += ChaosFunctional::from_kernel(project(f, left));
    pure_right += ChaosFunctional::from_kernel(project(f, right));
    for (int q = 1; q < n; ++q) {
      const auto& lt = multiset_table(N, q);
      const auto& rt = multiset_table(N, n - q);
      auto rows = multisets_within(lt, 0, ka);
      auto cols = multisets_within(rt, kb, N);
      if (rows.empty() || cols.empty()) continue;
      // Left cells precede right cells, so concatenation stays sorted.
      Eigen::MatrixXd M(rows.size(), cols.size());
      std::vector<Cell> mu(n);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        auto lc = lt.cells(rows[r]);
        std::copy(lc.begin(), lc.end(), mu.begin());
        for (std::size_t c = 0; c < cols.size(); ++c) {
          auto rc = rt.cells(cols[c]);
          std::copy(rc.begin(), rc.end(), mu.begin() + q);
          M(r, c) = f.at_sorted(mu);
        }
      }
      // I_n(f on the q-block) = C(n,q) sum_k I_q(a_k) I_{n-q}(b_k).
      const double weight = static_cast<double>(binomial(n, q));
      for (auto& [col, row] : rank_factorize(std::move(M))) {
        Eigen::VectorXd av = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(lt.size()));
        Eigen::VectorXd bv = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rt.size()));
        for (std::size_t r = 0; r < rows.size(); ++r) av[rows[r]] = weight * col[r];
        for (std::size_t c = 0; c < cols.size(); ++c) bv[cols[c]] = row[c];
        mixed.emplace_back(ChaosFunctional::from_kernel(SymKernel(grid, q, std::move(av))),
                           ChaosFunctional::from_kernel(SymKernel(grid, n - q, std::move(bv))));
      }
    }
  }

  std::vector<SplitPair> pairs;
  if (pure_left.max_abs() != 0.0) pairs.emplace_back(pure_left, one);
  if (pure_right.max_abs() != 0.0) pairs.emplace_back(one, pure_right);
  for (auto& p : mixed) pairs.push_back(std::move(p));
  return pairs;
}

BFProcess bf_approximation(const ChaosProcess& u, const Partition& pi) {
  const Grid& grid = u.grid();
  require_same_grid(grid, pi.grid());
  const ChaosProcess v = tudor_representation(u);
  const ChaosProcess step = step_approximation(v, pi);
  std::vector<BFSummand> summands;
  for (int i = 0; i < pi.cells(); ++i) {
    const ChaosFunctional& Fi = step.at(pi.left(i) + 1);
    const ChaosFunctional dX = increment(grid, pi.left(i), pi.right(i));
    for (auto& [g1, g2] : split_two_sided(Fi, grid.time(pi.left(i)), grid.time(pi.right(i))))
      summands.push_back({multiply_disjoint(g1, dX), g2});
  }
  return BFProcess(grid, std::move(summands));
}

RegionKernels bf_region_kernels(const BFProcess& Z) {
  const Grid& grid = Z.grid();
  int top = 1;
  for (const auto& s : Z.summands()) {
    const auto fs = s.forward.support(), bs = s.backward.support();
    const auto fc = fs.cells(), bc = bs.cells();
    if (!fc.empty() && !bc.empty() && fc.back() >= bc.front())
      throw ContractViolation("forward and backward supports overlap");
    top = std::max(top, s.forward.effective_order() + s.backward.effective_order());
  }
  if (top > kMaxOrder) throw ContractViolation("BF process exceeds the chaos order cap");

  RegionKernels f(grid, top);
  for (int l = 1; l <= top; ++l)
    for (int q = 1; q <= l; ++q)
      f.at(l, q) = SymKernel::from_function(grid, l, [&](std::span<const Cell> mu) {
        std::span<const Cell> low = mu.first(q), high = mu.subspan(q);
        double sum = 0.0;
        for (const auto& s : Z.summands()) {
          if (q > s.forward.max_order()) continue;
          double h = s.forward.kernel(q).at_sorted(low);
          if (h == 0.0) continue;
          double g = l == q ? s.backward.mean()
                   : l - q <= s.backward.max_order() ? s.backward.kernel(l - q).at_sorted(high)
                                                     : 0.0;
          sum += h * g;
        }
        return sum / static_cast<double>(binomial(l, q));
      });
  return f;
}

}  // namespace skorohod
