#pragma once

#include <vector>

#include "skorohod/paths.hpp"
#include "skorohod/sym_kernel.hpp"

namespace skorohod {

// Hermite polynomials normalized by exp(t x - t^2/2) = sum t^n H_n(x), so that
// I_n(h^{(x)n}) = n! H_n(X(h)) for unit h. Note H_n = He_n / n!.
double hermite(int n, double x);

// I_n(f) on one path. Repeated cells contribute Hermite factors, which makes the
// value the exact multiple integral of the step kernel.
double eval_multiple_integral(const SymKernel& f, PathRef path);

// E[F] + sum_n I_n(f_n) with f_n of order n = 1..L.
class ChaosFunctional {
 public:
  ChaosFunctional(const Grid& grid, int max_order);  // zero
  ChaosFunctional(const Grid& grid, double mean, std::vector<SymKernel> kernels);

  static ChaosFunctional constant(const Grid& grid, double value);
  static ChaosFunctional from_kernel(const SymKernel& f);
  static ChaosFunctional isonormal(const StepFunction& h);  // X(h)

  const Grid& grid() const { return grid_; }
  double mean() const { return mean_; }
  int max_order() const { return static_cast<int>(kernels_.size()); }
  const SymKernel& kernel(int order) const { return kernels_.at(order - 1); }
  const std::vector<SymKernel>& kernels() const { return kernels_; }

  // Same functional with kernel list padded (zeros) or truncated; truncation of a
  // nonzero kernel is refused.
  ChaosFunctional with_max_order(int order) const;
  // Highest order with a nonzero kernel (0 for constants).
  int effective_order() const;
  bool deterministic() const { return effective_order() == 0; }
  double max_abs() const;  // largest |coefficient| including the mean
  TimeSet support() const;

  ChaosFunctional& operator+=(const ChaosFunctional& other);
  ChaosFunctional& operator-=(const ChaosFunctional& other);
  ChaosFunctional& operator*=(double c);
  friend ChaosFunctional operator+(ChaosFunctional a, const ChaosFunctional& b) { return a += b; }
  friend ChaosFunctional operator-(ChaosFunctional a, const ChaosFunctional& b) { return a -= b; }
  friend ChaosFunctional operator*(double c, ChaosFunctional a) { return a *= c; }

 private:
  Grid grid_;
  double mean_;
  std::vector<SymKernel> kernels_;
};

double eval(const ChaosFunctional& F, PathRef path);
Eigen::VectorXd eval_batch(const ChaosFunctional& F, const PathBatch& batch, int workers = 1);

struct Moments {
  double mean;
  double variance;
};
Moments chaos_moments(const ChaosFunctional& F);
// E[F G] by isometry.
double expectation_of_product(const ChaosFunctional& F, const ChaosFunctional& G);

// D_s F for s in `cell`: order n-1 kernel n f_n(., s).
ChaosFunctional malliavin_derivative(const ChaosFunctional& F, int cell);
// E[F | F_A]
ChaosFunctional conditional_expectation(const ChaosFunctional& F, const TimeSet& A);

// F G when the non-constant parts of F and G live on disjoint cells, which makes
// the product exact with no contraction terms. Throws otherwise.
ChaosFunctional multiply_disjoint(const ChaosFunctional& F, const ChaosFunctional& G);

// Product keeping only the order-raising terms. Exact when one factor is
// deterministic or supports are disjoint; `exact` reports which case applied.
struct Product {
  ChaosFunctional value;
  bool exact;
};
Product multiply_top_order(const ChaosFunctional& F, const ChaosFunctional& G);

}  // namespace skorohod
