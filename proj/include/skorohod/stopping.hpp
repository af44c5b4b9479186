#pragma once

#include <optional>
#include <string>
#include <vector>

#include "skorohod/process.hpp"

namespace skorohod {

// Grid-valued stopping time. Hitting rules look at boundaries k >= 1 only and return
// time 1 when nothing is hit.
class GridStoppingTime {
 public:
  enum class Kind { deterministic, level_hitting, first_exit };

  static GridStoppingTime deterministic(const Grid& grid, double t);
  // First k >= 1 with X_k >= level (level >= 0) or X_k <= level (level < 0).
  static GridStoppingTime level_hitting(const Grid& grid, double level);
  // First k >= 1 with |X_k| >= band.
  static GridStoppingTime first_exit(const Grid& grid, double band);

  const Grid& grid() const { return grid_; }
  Kind kind() const { return kind_; }
  double parameter() const { return parameter_; }
  std::string name() const;

  // Boundary index of T on the path.
  int boundary(PathRef path) const;
  double operator()(PathRef path) const { return grid_.time(boundary(path)); }

 private:
  GridStoppingTime(const Grid& grid, Kind kind, double parameter);
  Grid grid_;
  Kind kind_;
  double parameter_;
};

double eval_stopping_time(const GridStoppingTime& T, PathRef path);

struct SamplingTest {
  std::string name;
  double estimate;  // mean of G (Y_T - Y_S)
  double std_error;
  double z;
};
// Fixed dictionary of F_S-measurable test variables G.
std::vector<SamplingTest> optional_sampling_check(const SkorohodProcess& Y,
                                                  const GridStoppingTime& S,
                                                  const GridStoppingTime& T,
                                                  const PathBatch& batch, int workers = 1);

struct StoppedIntegral {
  double lhs;  // sum_i F_i (X_{T ^ t_{i+1}} - X_{T ^ t_i})
  double rhs;  // delta(u 1_[0,t]) read at t = T
};
// u_step must be constant on the cells of pi, with F_i blind to its own cell.
void require_step_shape(const ChaosProcess& u_step, const Partition& pi);
StoppedIntegral stopped_integral(const ChaosProcess& u_step, const Partition& pi,
                                 const GridStoppingTime& T, PathRef path,
                                 const SkorohodProcess* precomputed = nullptr);

}  // namespace skorohod
