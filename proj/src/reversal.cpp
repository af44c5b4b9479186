#include "skorohod/reversal.hpp"

#include <algorithm>
#include <cmath>

#include "skorohod/chaos.hpp"
#include "skorohod/error.hpp"
#include "skorohod/parallel.hpp"

namespace skorohod {

ChaosFunctional reverse_functional(const ChaosFunctional& F) {
  std::vector<SymKernel> kernels;
  for (const auto& f : F.kernels()) kernels.push_back(reverse_kernel(f));
  return ChaosFunctional(F.grid(), F.mean(), std::move(kernels));
}

ChaosProcess clark_ocone_integrand(const ChaosFunctional& F) {
  const Grid& grid = F.grid();
  const int N = grid.n_cells();
  std::vector<ChaosFunctional> per_cell;
  for (int a = 1; a <= N; ++a) {
    const int s = N + 1 - a;
    const auto later = TimeSet::cells_between(grid, s, N);
    per_cell.push_back(reverse_functional(conditional_expectation(malliavin_derivative(F, s), later)));
  }
  return ChaosProcess(grid, std::move(per_cell));
}

BackwardRepresentation backward_representation(const ChaosFunctional& F) {
  const Grid& grid = F.grid();
  std::vector<ChaosFunctional> y;
  for (int k = 0; k <= grid.n_cells(); ++k)
    y.push_back(F - conditional_expectation(F, TimeSet::cells_between(grid, k, grid.n_cells())));
  return {F, std::move(y), clark_ocone_integrand(F)};
}

void require_backward_adapted(const ChaosProcess& phi_hat) {
  for (int a = 1; a <= phi_hat.grid().n_cells(); ++a) {
    if (phi_hat.ranked(a)) throw ContractViolation("backward integrand must not be ranked");
    const auto cells = phi_hat.at(a).support().cells();
    if (!cells.empty() && cells.back() >= a)
      throw ContractViolation("backward integrand is not adapted to the reversed filtration");
  }
}

double backward_ito_eval(const ChaosProcess& phi_hat, double t, PathRef path) {
  require_backward_adapted(phi_hat);
  const int N = phi_hat.grid().n_cells();
  const int k = phi_hat.grid().boundary(t);
  const Path reversed = reverse_path(path);
  double sum = 0.0;
  for (int a = N - k + 1; a <= N; ++a) sum += eval(phi_hat.at(a), reversed) * reversed[a - 1];
  return sum;
}

ChaosFunctional backward_ito_chaos(const ChaosProcess& phi_hat, double t) {
  require_backward_adapted(phi_hat);
  const Grid& grid = phi_hat.grid();
  const int N = grid.n_cells();
  const int k = grid.boundary(t);
  ChaosFunctional sum(grid, 0);
  for (int a = N - k + 1; a <= N; ++a) {
    const int c = N + 1 - a;
    sum += multiply_disjoint(reverse_functional(phi_hat.at(a)),
                             ChaosFunctional::isonormal(StepFunction::indicator(
                                 grid, grid.time(c - 1), grid.time(c))));
  }
  return sum;
}

HermiteReport hermite_projection(int n, const StepFunction& h, double t, PathRef path) {
  if (n < 1 || n > kMaxOrder) throw ContractViolation("hermite order out of range");
  if (std::abs(h.norm() - 1.0) > 1e-9) throw ContractViolation("h must have unit norm");
  const Grid& grid = h.grid();
  const int k = grid.boundary(t);
  std::vector<SymKernel> kernels;
  for (int m = 1; m < n; ++m) kernels.emplace_back(grid, m);
  kernels.push_back((1.0 / factorial(n)) * SymKernel::tensor_power(h, n));
  const ChaosFunctional F(grid, 0.0, std::move(kernels));
  const double lhs =
      eval(F - conditional_expectation(F, TimeSet::cells_between(grid, k, grid.n_cells())), path);

  Eigen::VectorXd tail_values = h.values();
  tail_values.head(k).setZero();
  const StepFunction tail(grid, std::move(tail_values));
  const double tail_norm = tail.norm();
  if (tail_norm == 0.0) return {lhs, lhs, false};
  const double rhs = hermite(n, isonormal_eval(path, h)) -
                     std::pow(tail_norm, n) * hermite(n, isonormal_eval(path, tail) / tail_norm);
  return {lhs, rhs, true};
}

QuadraticCovariation quadratic_covariation(PathRef u_values, PathRef v_values, int depth) {
  const Eigen::Index points = u_values.size();
  if (points < 2 || v_values.size() != points)
    throw ContractViolation("bracket inputs must share one grid");
  const Eigen::Index N = points - 1;
  if (depth < 0 || depth > 30 || N % (Eigen::Index{1} << depth) != 0)
    throw ContractViolation("dyadic depth does not divide the grid");
  QuadraticCovariation out;
  const double start = u_values[0] * v_values[0];
  for (int level = 0; level <= depth; ++level) {
    const Eigen::Index cells = Eigen::Index{1} << level, stride = N / cells;
    Eigen::VectorXd curve(cells + 1);
    curve[0] = start;
    for (Eigen::Index i = 0; i < cells; ++i) {
      const Eigen::Index lo = i * stride, hi = lo + stride;
      curve[i + 1] = curve[i] + (u_values[hi] - u_values[lo]) * (v_values[hi] - v_values[lo]);
    }
    out.totals.push_back(curve[cells]);
    if (level == depth) out.curve = std::move(curve);
  }
  return out;
}

Eigen::VectorXd phi_hat_values(const DecompositionSpec& spec, PathRef reversed) {
  const int N = static_cast<int>(reversed.size());
  const std::size_t m = spec.g.size();
  std::vector<double> integrals(m, 0.0);
  Eigen::VectorXd values(N + 1);
  for (int j = 0; j <= N; ++j) {
    if (j > 0)
      for (std::size_t i = 0; i < m; ++i) integrals[i] += spec.g[i](j) * reversed[j - 1];
    values[j] = spec.phi(static_cast<double>(j) / N, integrals);
  }
  return values;
}

namespace {

ChaosFunctional decomposition_target(const DecompositionSpec& spec, double t) {
  const Grid& grid = spec.F.grid();
  for (const auto& g : spec.g) require_same_grid(grid, g.grid());
  const int N = grid.n_cells();
  if ((N & (N - 1)) != 0) throw ContractViolation("bracket needs a dyadic grid");
  return spec.F - conditional_expectation(spec.F, TimeSet::cells_between(grid, grid.boundary(t), N));
}

DecompositionTerms decomposition_terms(const DecompositionSpec& spec, const ChaosFunctional& target,
                                       PathRef path, double t) {
  const int N = target.grid().n_cells();
  if (path.size() != N) throw ContractViolation("path length does not match grid");
  const int k = target.grid().boundary(t);
  const double y = eval(target, path);

  const Path reversed = reverse_path(path);
  const Eigen::VectorXd phi = phi_hat_values(spec, reversed);
  // Forward left point (c-1)/N of the original cell is reversed time 1 - (c-1)/N.
  double ito = 0.0;
  for (int c = 1; c <= k; ++c) ito += phi[N - c + 1] * path[c - 1];

  int depth = 0;
  while ((1 << depth) < N) ++depth;
  const QuadraticCovariation bracket = quadratic_covariation(phi, cumulative(reversed), depth);
  const double total = bracket.curve[N];
  const double tail = bracket.curve[N - k];
  return {y, ito, total, tail, y - (ito - total + tail)};
}

}  // namespace

DecompositionTerms semimartingale_decomposition_check(const DecompositionSpec& spec, PathRef path,
                                                      double t) {
  return decomposition_terms(spec, decomposition_target(spec, t), path, t);
}

DecompositionStats semimartingale_decomposition_batch(const DecompositionSpec& spec,
                                                      const PathBatch& batch, double t,
                                                      int workers) {
  const std::size_t n = batch.count();
  if (n < 2) throw ContractViolation("need at least two paths");
  const ChaosFunctional target = decomposition_target(spec, t);
  std::vector<double> residual(n);
  parallel_for(n, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      residual[i] = decomposition_terms(spec, target, batch.path(i), t).residual;
  });
  double sum = 0.0, sum_sq = 0.0;
  for (double r : residual) {
    sum += r;
    sum_sq += r * r;
  }
  const double mean = sum / n;
  const double var = (sum_sq - n * mean * mean) / (n - 1);
  return {std::sqrt(sum_sq / n), mean, std::sqrt(std::max(var, 0.0) / n)};
}

}  // namespace skorohod
