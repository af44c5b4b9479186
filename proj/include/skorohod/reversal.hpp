#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "skorohod/process.hpp"

namespace skorohod {

// Same functional written on the reversed path X^(t) = X_1 - X_{1-t}.
ChaosFunctional reverse_functional(const ChaosFunctional& F);

// Y_t = F - E[F | F_{[t,1]}] on every grid time, with the integrand phi_hat of its
// backward Ito representation. phi_hat is indexed by reversed cells and its values are
// functionals of the reversed path.
struct BackwardRepresentation {
  ChaosFunctional F;
  std::vector<ChaosFunctional> y;  // k = 0..N
  ChaosProcess phi_hat;
};

BackwardRepresentation backward_representation(const ChaosFunctional& F);

// phi_hat on reversed cell a: E[D_s F | F_{[s,1]}] with s the original cell N+1-a, read
// at the left end of the reversed cell so the integrand is predictable.
ChaosProcess clark_ocone_integrand(const ChaosFunctional& F);

// Throws if some phi_hat value looks at reversed cells at or after its own.
void require_backward_adapted(const ChaosProcess& phi_hat);

// Sum over reversed cells in (1-t, 1] of phi_hat * dX^.
double backward_ito_eval(const ChaosProcess& phi_hat, double t, PathRef path);
// The same sum as a functional of the original path.
ChaosFunctional backward_ito_chaos(const ChaosProcess& phi_hat, double t);

struct HermiteReport {
  double lhs;
  double rhs;
  bool closed_form;  // false when the tail of h on [t,1] vanishes
};
// Y_t of F = H_n(X(h)) by kernel projection against the closed Hermite form.
HermiteReport hermite_projection(int n, const StepFunction& h, double t, PathRef path);

struct QuadraticCovariation {
  // Bracket at the points of the finest dyadic level, i / 2^depth.
  Eigen::VectorXd curve;
  // Bracket at time 1 for levels 0..depth.
  std::vector<double> totals;
};
// U and V given at all grid times 0..N; 2^depth must divide N.
QuadraticCovariation quadratic_covariation(PathRef u_values, PathRef v_values, int depth);

// phi_hat_alpha = phi(alpha, X^(g_1 1_[0,alpha]), ..., X^(g_k 1_[0,alpha])).
struct DecompositionSpec {
  ChaosFunctional F;
  std::function<double(double, std::span<const double>)> phi;
  std::vector<StepFunction> g;
  bool phi_is_c1 = false;  // asserted by the caller, not verified
};

struct DecompositionTerms {
  double y;
  double ito;
  double bracket_total;  // [phi_hat, X^]_1
  double bracket_tail;   // [phi_hat, X^]_{1-t}
  double residual;       // y - (ito - bracket_total + bracket_tail)
};
DecompositionTerms semimartingale_decomposition_check(const DecompositionSpec& spec, PathRef path,
                                                      double t);

struct DecompositionStats {
  double residual_rms;
  double residual_mean;
  double residual_std_error;
};
DecompositionStats semimartingale_decomposition_batch(const DecompositionSpec& spec,
                                                      const PathBatch& batch, double t,
                                                      int workers = 1);

// Grid values of phi_hat on the reversed path, alpha = j/N for j = 0..N.
Eigen::VectorXd phi_hat_values(const DecompositionSpec& spec, PathRef reversed);

}  // namespace skorohod
