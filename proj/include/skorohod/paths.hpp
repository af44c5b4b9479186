#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>

#include "skorohod/grid.hpp"

namespace skorohod {

// One path is the vector of its cell increments dX_1..dX_N.
using Path = Eigen::VectorXd;
using PathRef = Eigen::Ref<const Eigen::VectorXd>;

// Uniform in (0,1), a pure function of (seed, stream, index). Paths use stream = path.
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

// Values X_0 = 0, X_{1/N}, ..., X_1 by left-to-right accumulation.
Eigen::VectorXd cumulative(PathRef increments);

class StepFunction {
 public:
  explicit StepFunction(const Grid& grid);  // zero
  StepFunction(const Grid& grid, Eigen::VectorXd values);

  static StepFunction constant(const Grid& grid, double value);
  // Value 1 on the cells inside (a, b].
  static StepFunction indicator(const Grid& grid, double a, double b);

  const Grid& grid() const { return grid_; }
  const Eigen::VectorXd& values() const { return values_; }
  double operator()(int cell) const { return values_[cell - 1]; }

  double norm_sq() const { return grid_.width() * values_.squaredNorm(); }
  double norm() const;
  StepFunction reversed() const;  // f(1 - x)

  friend StepFunction operator*(const StepFunction& a, const StepFunction& b);
  friend StepFunction operator*(double c, const StepFunction& a);
  friend StepFunction operator+(const StepFunction& a, const StepFunction& b);

 private:
  Grid grid_;
  Eigen::VectorXd values_;
};

double inner(const StepFunction& f, const StepFunction& g);

// Brownian increments for a batch of paths, column i holding path i.
class PathBatch {
 public:
  PathBatch(const Grid& grid, std::uint64_t seed, Eigen::MatrixXd increments);

  const Grid& grid() const { return grid_; }
  std::size_t count() const { return static_cast<std::size_t>(increments_.cols()); }
  std::uint64_t seed() const { return seed_; }
  PathRef path(std::size_t i) const { return increments_.col(static_cast<Eigen::Index>(i)); }
  const Eigen::MatrixXd& increments() const { return increments_; }

 private:
  Grid grid_;
  std::uint64_t seed_;
  Eigen::MatrixXd increments_;
};

// Path i depends only on (seed, i): uniforms come from a counter hash, normals from
// the inverse CDF z = -sqrt(2) * erfc^{-1}(2u).
PathBatch sample_paths(const Grid& grid, std::size_t count, std::uint64_t seed, int workers = 1);

double isonormal_eval(PathRef path, const StepFunction& f);

// Increments of the reversed path: cell k takes the increment of cell N+1-k.
Path reverse_path(PathRef path);

void write_batch(std::ostream& out, const PathBatch& batch);
PathBatch read_batch(std::istream& in);

}  // namespace skorohod
