#include "skorohod/stopping.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "skorohod/chaos.hpp"
#include "skorohod/error.hpp"
#include "skorohod/parallel.hpp"
#include "skorohod/skorohod.hpp"

namespace skorohod {

GridStoppingTime::GridStoppingTime(const Grid& grid, Kind kind, double parameter)
    : grid_(grid), kind_(kind), parameter_(parameter) {
  if (!std::isfinite(parameter)) throw ContractViolation("stopping parameter must be finite");
}

GridStoppingTime GridStoppingTime::deterministic(const Grid& grid, double t) {
  grid.boundary(t);
  return {grid, Kind::deterministic, t};
}

GridStoppingTime GridStoppingTime::level_hitting(const Grid& grid, double level) {
  return {grid, Kind::level_hitting, level};
}

GridStoppingTime GridStoppingTime::first_exit(const Grid& grid, double band) {
  if (!(band > 0.0)) throw ContractViolation("exit band must be positive");
  return {grid, Kind::first_exit, band};
}

std::string GridStoppingTime::name() const {
  std::ostringstream s;
  s.precision(17);
  switch (kind_) {
    case Kind::deterministic: s << "fixed(" << parameter_ << ")"; break;
    case Kind::level_hitting: s << "hit(" << parameter_ << ")"; break;
    case Kind::first_exit: s << "exit(" << parameter_ << ")"; break;
  }
  return s.str();
}

int GridStoppingTime::boundary(PathRef path) const {
  const int N = grid_.n_cells();
  if (path.size() != N) throw ContractViolation("path length does not match grid");
  if (kind_ == Kind::deterministic) return grid_.boundary(parameter_);
  double x = 0.0;
  for (int k = 1; k <= N; ++k) {
    x += path[k - 1];
    bool hit = false;
    if (kind_ == Kind::first_exit)
      hit = std::abs(x) >= parameter_;
    else
      hit = parameter_ >= 0.0 ? x >= parameter_ : x <= parameter_;
    if (hit) return k;
  }
  return N;
}

double eval_stopping_time(const GridStoppingTime& T, PathRef path) { return T(path); }

std::vector<SamplingTest> optional_sampling_check(const SkorohodProcess& Y,
                                                  const GridStoppingTime& S,
                                                  const GridStoppingTime& T,
                                                  const PathBatch& batch, int workers) {
  const Grid& grid = Y.grid();
  require_same_grid(grid, S.grid());
  require_same_grid(grid, T.grid());
  require_same_grid(grid, batch.grid());
  const std::size_t n = batch.count();
  if (n < 2) throw ContractViolation("need at least two paths");

  const char* names[] = {"one", "X_S", "X_{S^0.25}", "X_{S^0.5}", "1{S<=0.5}", "tanh(X_S)"};
  constexpr int kTests = 6;
  const int quarter = grid.aligned(0.25) ? grid.boundary(0.25) : -1;
  const int half = grid.aligned(0.5) ? grid.boundary(0.5) : -1;
  if (quarter < 0 || half < 0) throw ContractViolation("grid must contain 0.25 and 0.5");

  Eigen::MatrixXd samples(kTests, static_cast<Eigen::Index>(n));
  std::vector<char> ordered(n, 1);
  parallel_for(n, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const PathRef path = batch.path(i);
      const int s = S.boundary(path), t = T.boundary(path);
      if (s > t) {
        ordered[i] = 0;
        continue;
      }
      const Eigen::VectorXd X = cumulative(path);
      const double gap = eval(Y.at_boundary(t), path) - eval(Y.at_boundary(s), path);
      const double g[kTests] = {1.0,
                                X[s],
                                X[std::min(s, quarter)],
                                X[std::min(s, half)],
                                s <= half ? 1.0 : 0.0,
                                std::tanh(X[s])};
      for (int j = 0; j < kTests; ++j) samples(j, static_cast<Eigen::Index>(i)) = g[j] * gap;
    }
  });
  for (char ok : ordered)
    if (!ok) throw ContractViolation("S > T on some path");

  std::vector<SamplingTest> out;
  for (int j = 0; j < kTests; ++j) {
    double sum = 0.0, sum_sq = 0.0;
    for (Eigen::Index i = 0; i < samples.cols(); ++i) {
      sum += samples(j, i);
      sum_sq += samples(j, i) * samples(j, i);
    }
    const double mean = sum / n;
    const double var = std::max((sum_sq - n * mean * mean) / (n - 1), 0.0);
    const double se = std::sqrt(var / n);
    out.push_back({names[j], mean, se, se > 0.0 ? mean / se : 0.0});
  }
  return out;
}

void require_step_shape(const ChaosProcess& u_step, const Partition& pi) {
  require_same_grid(u_step.grid(), pi.grid());
  for (int i = 0; i < pi.cells(); ++i) {
    const int first = pi.left(i) + 1;
    const auto own = TimeSet::cells_between(pi.grid(), pi.left(i), pi.right(i));
    for (int c = first; c <= pi.right(i); ++c) {
      if (u_step.ranked(c)) throw ContractViolation("step integrand must not be ranked");
      if ((u_step.at(c) - u_step.at(first)).max_abs() != 0.0)
        throw ContractViolation("step integrand is not constant on a partition cell");
    }
    if (!(u_step.at(first).support() & own).empty())
      throw ContractViolation("step value depends on its own partition cell");
  }
}

StoppedIntegral stopped_integral(const ChaosProcess& u_step, const Partition& pi,
                                 const GridStoppingTime& T, PathRef path,
                                 const SkorohodProcess* precomputed) {
  require_step_shape(u_step, pi);
  const int stop = T.boundary(path);
  const Eigen::VectorXd X = cumulative(path);
  double lhs = 0.0;
  for (int i = 0; i < pi.cells(); ++i) {
    const int lo = std::min(stop, pi.left(i)), hi = std::min(stop, pi.right(i));
    if (hi == lo) continue;
    lhs += eval(u_step.at(pi.left(i) + 1), path) * (X[hi] - X[lo]);
  }
  double rhs;
  if (precomputed) {
    require_same_grid(precomputed->grid(), u_step.grid());
    rhs = eval(precomputed->at_boundary(stop), path);
  } else {
    rhs = eval(skorohod_integral(u_step, u_step.grid().time(stop)), path);
  }
  return {lhs, rhs};
}

}  // namespace skorohod
