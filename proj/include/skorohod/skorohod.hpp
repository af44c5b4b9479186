#pragma once

#include <vector>

#include "skorohod/process.hpp"

namespace skorohod {

// delta(u 1_[0,t]). Only the cell averages of u matter here.
ChaosFunctional skorohod_integral(const ChaosProcess& u, double t);
SkorohodProcess skorohod_process(const ChaosProcess& u);

// E[Y_t - Y_s | F_{[0,s] u [t,1]}]
ChaosFunctional martingale_defect(const SkorohodProcess& Y, double s, double t);

// v_alpha = u_alpha + int_0^alpha D_alpha u_s dX_s. The result is ranked: inside a
// time cell, v depends on how many same-cell variables lie below alpha.
ChaosProcess tudor_representation(const ChaosProcess& u);

// Left-point sum over cells k <= t of E[v_k | F_{[0,t_{k-1}] u [t,1]}] dX_k.
double ito_skorohod_eval(const ChaosProcess& v, double t, PathRef path);
// The same sum as a chaos functional (each term is a disjoint product).
ChaosFunctional ito_skorohod_sum(const ChaosProcess& v, double t);

// v^pi: on (t_i, t_{i+1}) the cell average of E[v_s | F_{[t_i, t_{i+1}]^c}].
ChaosProcess step_approximation(const ChaosProcess& v, const Partition& pi);

// Y^pi_t = sum_i E[F_i | F_{[t_i, t_{i+1} v t]^c}] (X_{t ^ t_{i+1}} - X_{t_i}) for t >= t_i,
// built from a step process F_i constant on the cells of pi.
SkorohodProcess ito_skorohod_synthesis(const ChaosProcess& step, const Partition& pi);

struct KernelNorms {
  double l2_sq;
  double sobolev12_sq;
};
KernelNorms kernel_norms(const ChaosProcess& v);

// Sum over partition cells of E[(Y_{t_{j+1}} - Y_{t_j})^2], by isometry.
double increment_energy(const SkorohodProcess& Y, const Partition& pi);
// Max of increment_energy over the family; default family is dyadic_family(grid).
double v_functional(const SkorohodProcess& Y, const std::vector<Partition>& family);
double v_functional(const SkorohodProcess& Y);

struct IbpReport {
  double lhs;
  double rhs;
  bool exact;  // false when the product F u had to drop contraction terms
};
// delta(F u 1_[0,t]) against F delta(u 1_[0,t]) - int_0^t D_s F u_s ds.
IbpReport integration_by_parts_check(const ChaosFunctional& F, const ChaosProcess& u, double t,
                                     PathRef path);

// Kernels f_{l,q}, 1 <= q <= l, with Y_t = sum_l sum_q I_l(f_{l,q} 1_{A_{l,q}(t)}).
class RegionKernels {
 public:
  RegionKernels(const Grid& grid, int max_order);

  const Grid& grid() const { return grid_; }
  int max_order() const { return static_cast<int>(f_.size()); }
  // q = 0 is the zero kernel.
  const SymKernel& at(int l, int q) const { return f_.at(l - 1).at(q); }
  SymKernel& at(int l, int q) { return f_.at(l - 1).at(q); }

  ChaosFunctional synthesize(double t) const;

 private:
  Grid grid_;
  std::vector<std::vector<SymKernel>> f_;
};

RegionKernels duc_nualart_extract(const ChaosProcess& u);

struct Majoration {
  double lhs;
  double vhat;
};
Majoration majoration_check(const ChaosProcess& u);
double majoration_lhs(const RegionKernels& f);

}  // namespace skorohod
