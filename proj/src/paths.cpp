#include "skorohod/paths.hpp"

#include <bit>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <istream>
#include <ostream>

#include "skorohod/error.hpp"
#include "skorohod/parallel.hpp"

namespace skorohod {

namespace {

constexpr std::uint64_t kBatchMagic = 0x31424b50524f4b53ULL;  // "SKORPKB1" little-endian
constexpr std::uint64_t kBatchVersion = 1;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double standard_normal(double u) { return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u); }

void write_u64(std::ostream& out, std::uint64_t v) {
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

std::uint64_t read_u64(std::istream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw ContractViolation("truncated path dump");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return v;
}

void require_path(PathRef path, const Grid& grid) {
  if (path.size() != grid.n_cells()) throw ContractViolation("path length does not match grid");
}

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t key = splitmix64(splitmix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL));
  std::uint64_t bits = splitmix64(key + index * 0x9e3779b97f4a7c15ULL) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

Eigen::VectorXd cumulative(PathRef increments) {
  Eigen::VectorXd x(increments.size() + 1);
  x[0] = 0.0;
  for (Eigen::Index k = 0; k < increments.size(); ++k) x[k + 1] = x[k] + increments[k];
  return x;
}

StepFunction::StepFunction(const Grid& grid)
    : grid_(grid), values_(Eigen::VectorXd::Zero(grid.n_cells())) {}

StepFunction::StepFunction(const Grid& grid, Eigen::VectorXd values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid.n_cells())
    throw ContractViolation("step function needs one value per cell");
}

StepFunction StepFunction::constant(const Grid& grid, double value) {
  return StepFunction(grid, Eigen::VectorXd::Constant(grid.n_cells(), value));
}

StepFunction StepFunction::indicator(const Grid& grid, double a, double b) {
  int lo = grid.boundary(a), hi = grid.boundary(b);
  if (lo > hi) throw ContractViolation("indicator needs a <= b");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(grid.n_cells());
  v.segment(lo, hi - lo).setOnes();
  return StepFunction(grid, std::move(v));
}

double StepFunction::norm() const { return std::sqrt(norm_sq()); }

StepFunction StepFunction::reversed() const { return StepFunction(grid_, values_.reverse()); }

StepFunction operator*(const StepFunction& a, const StepFunction& b) {
  require_same_grid(a.grid_, b.grid_);
  return StepFunction(a.grid_, a.values_.cwiseProduct(b.values_));
}

StepFunction operator*(double c, const StepFunction& a) {
  return StepFunction(a.grid_, c * a.values_);
}

StepFunction operator+(const StepFunction& a, const StepFunction& b) {
  require_same_grid(a.grid_, b.grid_);
  return StepFunction(a.grid_, a.values_ + b.values_);
}

double inner(const StepFunction& f, const StepFunction& g) {
  require_same_grid(f.grid(), g.grid());
  return f.grid().width() * f.values().dot(g.values());
}

PathBatch::PathBatch(const Grid& grid, std::uint64_t seed, Eigen::MatrixXd increments)
    : grid_(grid), seed_(seed), increments_(std::move(increments)) {
  if (increments_.rows() != grid.n_cells()) throw ContractViolation("batch rows must match grid");
  if (increments_.cols() < 1) throw ContractViolation("batch needs at least one path");
}

PathBatch sample_paths(const Grid& grid, std::size_t count, std::uint64_t seed, int workers) {
  if (count == 0) throw ContractViolation("path count must be >= 1");
  const int n = grid.n_cells();
  const double scale = std::sqrt(grid.width());
  Eigen::MatrixXd inc(n, static_cast<Eigen::Index>(count));
  parallel_for(count, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p)
      for (int k = 0; k < n; ++k)
        inc(k, static_cast<Eigen::Index>(p)) =
            scale * standard_normal(counter_uniform(seed, p, static_cast<std::uint64_t>(k)));
  });
  return PathBatch(grid, seed, std::move(inc));
}

double isonormal_eval(PathRef path, const StepFunction& f) {
  require_path(path, f.grid());
  double sum = 0.0;
  for (Eigen::Index k = 0; k < path.size(); ++k) sum += f.values()[k] * path[k];
  return sum;
}

Path reverse_path(PathRef path) { return path.reverse(); }

void write_batch(std::ostream& out, const PathBatch& batch) {
  write_u64(out, kBatchMagic);
  write_u64(out, kBatchVersion);
  write_u64(out, static_cast<std::uint64_t>(batch.grid().n_cells()));
  write_u64(out, batch.count());
  write_u64(out, batch.seed());
  for (std::size_t p = 0; p < batch.count(); ++p)
    for (Eigen::Index k = 0; k < batch.increments().rows(); ++k)
      write_u64(out, std::bit_cast<std::uint64_t>(batch.path(p)[k]));
}

PathBatch read_batch(std::istream& in) {
  if (read_u64(in) != kBatchMagic) throw ContractViolation("not a path batch dump");
  if (read_u64(in) != kBatchVersion) throw ContractViolation("unsupported path dump version");
  auto n = static_cast<int>(read_u64(in));
  auto count = static_cast<Eigen::Index>(read_u64(in));
  std::uint64_t seed = read_u64(in);
  Eigen::MatrixXd inc(n, count);
  for (Eigen::Index p = 0; p < count; ++p)
    for (int k = 0; k < n; ++k) inc(k, p) = std::bit_cast<double>(read_u64(in));
  return PathBatch(Grid(n), seed, std::move(inc));
}

}  // namespace skorohod
