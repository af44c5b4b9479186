#pragma once

#include <utility>
#include <vector>

#include "skorohod/skorohod.hpp"

namespace skorohod {

// One product E[H1 | F_t] * E[H2 | F_{t^c}] of a forward and a backward martingale.
struct BFSummand {
  ChaosFunctional forward;   // H1, centered
  ChaosFunctional backward;  // H2
};

class BFProcess {
 public:
  BFProcess(const Grid& grid, std::vector<BFSummand> summands);

  const Grid& grid() const { return grid_; }
  const std::vector<BFSummand>& summands() const { return summands_; }

 private:
  Grid grid_;
  std::vector<BFSummand> summands_;
};

double bf_eval(const BFProcess& Z, double t, PathRef path);
// Z_t as a chaos functional; each product has disjoint factors, so this is exact.
ChaosFunctional bf_functional(const BFProcess& Z, double t);
SkorohodProcess bf_skorohod_process(const BFProcess& Z);

// F = sum_k G1_k G2_k with G1_k living on [0,a] and G2_k on [a',1].
using SplitPair = std::pair<ChaosFunctional, ChaosFunctional>;
std::vector<SplitPair> split_two_sided(const ChaosFunctional& F, double a, double a_prime);

// Z^pi with Z^pi_t = Y^pi_t, the synthesized delta of the step approximation of the
// Tudor integrand v.
BFProcess bf_approximation(const ChaosProcess& u, const Partition& pi);

// f_{l,q} of a BF process whose summands have disjoint forward/backward supports.
RegionKernels bf_region_kernels(const BFProcess& Z);

}  // namespace skorohod
