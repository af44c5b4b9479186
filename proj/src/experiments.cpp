#include "skorohod/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <sstream>

#include "skorohod/bf.hpp"
#include "skorohod/error.hpp"
#include "skorohod/parallel.hpp"
#include "skorohod/reversal.hpp"
#include "skorohod/skorohod.hpp"
#include "skorohod/stopping.hpp"

namespace skorohod {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class Csv {
 public:
  explicit Csv(const ExperimentConfig& c) {
    out_ << "# experiment=" << c.name << " N=" << c.N << " L=" << c.L << " paths=" << c.paths
         << " seed=" << c.seed << " depth=" << c.depth << " M=" << c.M << " t=" << num(c.t)
         << " samples=" << c.samples << " n=" << c.n << "\n";
  }
  Csv& columns(std::initializer_list<const char*> names) {
    bool first = true;
    for (const char* n : names) {
      out_ << (first ? "" : ",") << n;
      first = false;
    }
    out_ << "\n";
    return *this;
  }
  template <class... Ts>
  void row(const Ts&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << "\n";
  }
  std::string str() const { return out_.str(); }

 private:
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  static std::string cell(double x) { return num(x); }
  static std::string cell(int x) { return std::to_string(x); }
  static std::string cell(std::size_t x) { return std::to_string(x); }
  static std::string cell(bool x) { return x ? "true" : "false"; }
  std::ostringstream out_;
};

struct Checker {
  ExperimentResult& result;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      result.passed = false;
      result.failures.push_back(what);
    }
  }
};

struct Stat {
  double mean;
  double std_error;
};

Stat mean_and_error(const Eigen::VectorXd& x) {
  const double n = static_cast<double>(x.size());
  const double mean = x.mean();
  const double var = (x.array() - mean).square().sum() / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

// Kernel with entries uniform in (-1,1), drawn from its own counter stream.
SymKernel random_kernel(const Grid& grid, int order, std::uint64_t seed, std::uint64_t stream) {
  std::size_t i = 0;
  return SymKernel::from_function(grid, order, [&](std::span<const Cell>) {
    return 2.0 * counter_uniform(seed, stream, i++) - 1.0;
  });
}

ChaosFunctional unit_x1(const Grid& grid) {
  return ChaosFunctional::isonormal(StepFunction::constant(grid, 1.0));
}

ChaosFunctional second_chaos_of_one(const Grid& grid) {
  return ChaosFunctional::from_kernel(SymKernel::constant(grid, 2, 1.0));
}

std::vector<std::pair<std::string, ChaosProcess>> basic_integrands(const Grid& grid) {
  const auto x1 = ChaosProcess::constant(unit_x1(grid));
  const auto xa = ChaosProcess::brownian(grid);
  return {{"1", ChaosProcess::constant(ChaosFunctional::constant(grid, 1.0))},
          {"X_1", x1},
          {"X_alpha", xa},
          {"X_1+X_alpha", x1 + xa}};
}

// u_alpha with a random kernel up to `order` on every time cell.
ChaosProcess random_integrand(const Grid& grid, int order, std::uint64_t seed) {
  std::vector<ChaosFunctional> cells;
  for (int a = 1; a <= grid.n_cells(); ++a) {
    std::vector<SymKernel> kernels;
    for (int n = 1; n <= order; ++n)
      kernels.push_back(random_kernel(grid, n, seed, 1000u * static_cast<std::uint64_t>(a) + n));
    cells.emplace_back(grid, 2.0 * counter_uniform(seed, 999, a) - 1.0, std::move(kernels));
  }
  return ChaosProcess(grid, std::move(cells));
}

ExperimentResult geometry(const ExperimentConfig& c) {
  ExperimentResult r;
  Checker check{r};
  std::vector<std::vector<double>> points(c.samples, std::vector<double>(c.M));
  for (std::size_t i = 0; i < c.samples; ++i)
    for (int j = 0; j < c.M; ++j) points[i][j] = counter_uniform(c.seed, i, j);
  const PartitionReport rep = verify_partition_properties(c.M, c.t, points);
  Csv csv(c);
  csv.columns({"M", "t", "samples", "covered", "disjoint", "violations"});
  csv.row(c.M, c.t, c.samples, rep.covered, rep.disjoint, rep.violations);
  check.require(rep.covered && rep.disjoint && rep.violations == 0, "geometry: partition violated");
  r.csv = csv.str();
  return r;
}

ExperimentResult isometry(const ExperimentConfig& c) {
  ExperimentResult r;
  Checker check{r};
  const Grid grid(c.N);
  const PathBatch batch = sample_paths(grid, c.paths, c.seed, c.workers);
  std::vector<SymKernel> f, g;
  std::vector<Eigen::VectorXd> If, Ig;
  for (int n = 1; n <= c.L; ++n) {
    f.push_back(random_kernel(grid, n, c.seed, 2u * n));
    g.push_back(random_kernel(grid, n, c.seed, 2u * n + 1));
    If.push_back(eval_batch(ChaosFunctional::from_kernel(f.back()), batch, c.workers));
    Ig.push_back(eval_batch(ChaosFunctional::from_kernel(g.back()), batch, c.workers));
  }
  Csv csv(c);
  csv.columns({"n", "m", "estimate", "exact", "std_error", "z"});
  for (int n = 1; n <= c.L; ++n)
    for (int m = 1; m <= c.L; ++m) {
      const Stat s = mean_and_error(If[n - 1].cwiseProduct(Ig[m - 1]));
      const double exact = n == m ? factorial(n) * inner(f[n - 1], g[m - 1]) : 0.0;
      const double z = (s.mean - exact) / s.std_error;
      csv.row(n, m, s.mean, exact, s.std_error, z);
      check.require(std::abs(z) <= 3.0,
                    "isometry: order pair " + std::to_string(n) + "," + std::to_string(m));
    }
  r.csv = csv.str();
  return r;
}

ExperimentResult martingale(const ExperimentConfig& c) {
  ExperimentResult r;
  Checker check{r};
  const Grid grid(c.N);
  Csv csv(c);
  csv.columns({"integrand", "pairs", "max_abs_defect"});
  for (const auto& [name, u] : basic_integrands(grid)) {
    const SkorohodProcess Y = skorohod_process(u);
    double worst = 0.0;
    int pairs = 0;
    for (int s = 0; s < c.N; ++s)
      for (int t = s + 1; t <= c.N; ++t, ++pairs)
        worst = std::max(worst, martingale_defect(Y, grid.time(s), grid.time(t)).max_abs());
    csv.row(name, pairs, worst);
    check.require(worst <= 1e-12, "martingale: nonzero defect for " + name);
  }
  r.csv = csv.str();
  return r;
}

ExperimentResult theorem1(const ExperimentConfig& c) {
  ExperimentResult r;
  Checker check{r};
  const Grid grid(c.N);
  const ChaosProcess u = ChaosProcess::constant(unit_x1(grid)) + ChaosProcess::brownian(grid);
  const ChaosProcess v = tudor_representation(u);
  const SkorohodProcess Y = skorohod_process(u);
  const std::size_t checked = std::min<std::size_t>(c.paths, 100);
  const PathBatch batch = sample_paths(grid, checked, c.seed, c.workers);

  Csv csv(c);
  csv.columns({"depth", "vhat_residual", "sobolev_bound", "bf_pathwise_gap", "summands",
               "ratio_to_initial"});
  double initial = 0.0, previous = 0.0;
  for (int d = 1; d <= c.depth; ++d) {
    const Partition pi = Partition::dyadic(grid, d);
    const ChaosProcess step = step_approximation(v, pi);
    const SkorohodProcess Ypi = ito_skorohod_synthesis(step, pi);
    const BFProcess Z = bf_approximation(u, pi);
    const SkorohodProcess Zpi = bf_skorohod_process(Z);

    std::vector<double> gaps(checked, 0.0);
    parallel_for(checked, c.workers, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i)
        for (int k = 0; k <= c.N; ++k)
          gaps[i] = std::max(gaps[i], std::abs(bf_eval(Z, grid.time(k), batch.path(i)) -
                                               eval(Ypi.at_boundary(k), batch.path(i))));
    });
    const double gap = *std::max_element(gaps.begin(), gaps.end());
    const double residual = v_functional(Y - Zpi);
    const double bound = kernel_norms(v - step).sobolev12_sq;
    if (d == 1) initial = residual;
    csv.row(d, residual, bound, gap, Z.summands().size(), residual / initial);

    check.require(gap <= 1e-10, "theorem1: BF split differs from synthesis at depth " + std::to_string(d));
    check.require(residual <= bound, "theorem1: residual above bound at depth " + std::to_string(d));
    if (d > 1)
      check.require(residual < previous, "theorem1: residual not decreasing at depth " + std::to_string(d));
    previous = residual;
  }
  check.require(previous <= 0.1 * initial, "theorem1: final residual above 10% of depth-1 value");
  r.csv = csv.str();
  return r;
}

ExperimentResult ducnualart(const ExperimentConfig& c) {
  ExperimentResult r;
  Checker check{r};
  const Grid grid(c.N);
  auto cases = basic_integrands(grid);
  cases.erase(cases.begin());
  cases.emplace_back("random_order_" + std::to_string(std::min(c.L, 3)),
                     random_integrand(grid, std::min(c.L, 3), c.seed));
  Csv csv(c);
  csv.columns({"integrand", "resynthesis_residual", "majoration_lhs", "vhat"});
  for (const auto& [name, u] : cases) {
    const RegionKernels f = duc_nualart_extract(u);
    const SkorohodProcess Y = skorohod_process(u);
    double residual = 0.0;
    for (int k = 0; k <= c.N; ++k)
      residual = std::max(residual, (f.synthesize(grid.time(k)) - Y.at_boundary(k)).max_abs());
    const double lhs = majoration_lhs(f);
    const double vhat = v_functional(Y);
    csv.row(name, residual, lhs, vhat);
    check.require(residual <= 1e-12, "ducnualart: resynthesis residual for " + name);
    check.require(lhs <= 1.05 * vhat, "ducnualart: majoration fails for " + name);
  }
  r.csv = csv.str();
  return r;
}

ExperimentResult reversal(const ExperimentConfig& c) {
  ExperimentResult r;
  Checker check{r};
  Csv csv(c);
  csv.columns({"N", "t", "statistic", "value", "std_error"});
  const Grid grid(c.N);
  const std::size_t fixed_paths = 100;
  const PathBatch batch = sample_paths(grid, fixed_paths, c.seed, c.workers);

  for (int n = 1; n <= c.n; ++n) {
    const SymKernel f = random_kernel(grid, n, c.seed, 50u + n);
    const ChaosFunctional F = ChaosFunctional::from_kernel(f);
    const ChaosFunctional Fr = ChaosFunctional::from_kernel(reverse_kernel(f));
    double worst = 0.0;
    for (std::size_t i = 0; i < fixed_paths; ++i)
      worst = std::max(worst, std::abs(eval(F, batch.path(i)) - eval(Fr, reverse_path(batch.path(i)))));
    csv.row(c.N, 1.0, "reversed_path_order_" + std::to_string(n), worst, 0.0);
    check.require(worst <= 1e-10, "reversal: reversed-path identity");
  }

  const StepFunction unit = StepFunction::constant(grid, 1.0);
  for (int n = 1; n <= c.n; ++n)
    for (int k = 1; k < c.N; ++k) {
      double worst = 0.0;
      for (std::size_t i = 0; i < fixed_paths; ++i) {
        const HermiteReport h = hermite_projection(n, unit, grid.time(k), batch.path(i));
        worst = std::max(worst, std::abs(h.lhs - h.rhs));
      }
      csv.row(c.N, grid.time(k), "hermite_order_" + std::to_string(n), worst, 0.0);
      check.require(worst <= 1e-10, "reversal: Hermite identity");
    }

  // Euler gap of the backward Ito sum, exact by isometry.
  double previous_gap = 0.0;
  for (int scale = 1; scale <= 4; scale *= 2) {
    const Grid g(c.N * scale);
    const BackwardRepresentation rep = backward_representation(second_chaos_of_one(g));
    const ChaosFunctional diff = rep.y[g.boundary(0.5)] - backward_ito_chaos(rep.phi_hat, 0.5);
    const double gap = expectation_of_product(diff, diff);
    csv.row(g.n_cells(), 0.5, "ito_gap", gap, 0.0);
    if (scale > 1) {
      const double ratio = previous_gap / gap;
      csv.row(g.n_cells(), 0.5, "ito_gap_ratio", ratio, 0.0);
      check.require(ratio >= 1.6 && ratio <= 2.6, "reversal: Ito gap ratio out of range");
    }
    previous_gap = gap;
  }

  double previous_rms = 0.0;
  for (int N : {64, 128, 256}) {
    const Grid g(N);
    const DecompositionSpec spec{second_chaos_of_one(g),
                                 [](double, std::span<const double> x) { return 2.0 * x[0]; },
                                 {StepFunction::constant(g, 1.0)},
                                 true};
    const PathBatch paths = sample_paths(g, c.paths, c.seed, c.workers);
    const DecompositionStats st = semimartingale_decomposition_batch(spec, paths, 0.5, c.workers);
    csv.row(N, 0.5, "decomposition_rms", st.residual_rms, 0.0);
    if (N > 64) {
      const double ratio = previous_rms / st.residual_rms;
      csv.row(N, 0.5, "decomposition_rms_ratio", ratio, 0.0);
      check.require(ratio >= 1.2 && ratio <= 1.7, "reversal: residual RMS ratio out of range");
    }
    previous_rms = st.residual_rms;

    if (N == 256) {
      constexpr int kLevels = 3;
      Eigen::MatrixXd curves(1 << kLevels, static_cast<Eigen::Index>(paths.count()));
      parallel_for(paths.count(), c.workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          const Path rev = reverse_path(paths.path(i));
          const auto q = quadratic_covariation(phi_hat_values(spec, rev), cumulative(rev), kLevels);
          curves.col(static_cast<Eigen::Index>(i)) = q.curve.tail(1 << kLevels);
        }
      });
      for (int j = 1; j <= (1 << kLevels); ++j) {
        const double t = static_cast<double>(j) / (1 << kLevels);
        const Stat s = mean_and_error(curves.row(j - 1).transpose());
        csv.row(N, t, "bracket_mean", s.mean, s.std_error);
        check.require(std::abs(s.mean - 2.0 * t) <= 3.0 * s.std_error,
                      "reversal: bracket mean away from 2t");
      }
    }
  }
  r.csv = csv.str();
  return r;
}

ExperimentResult stopping(const ExperimentConfig& c) {
  ExperimentResult r;
  Checker check{r};
  const Grid grid(c.N);
  Csv csv(c);
  csv.columns({"rule", "test_variable", "n_paths", "estimate", "std_error", "z"});

  const SkorohodProcess Y = skorohod_process(ChaosProcess::constant(unit_x1(grid)));
  const PathBatch batch = sample_paths(grid, c.paths, c.seed, c.workers);
  const GridStoppingTime one = GridStoppingTime::deterministic(grid, 1.0);
  const std::pair<GridStoppingTime, GridStoppingTime> pairs[] = {
      {GridStoppingTime::first_exit(grid, 0.5), one},
      {GridStoppingTime::deterministic(grid, 0.25), GridStoppingTime::deterministic(grid, 0.75)}};
  for (const auto& [S, T] : pairs)
    for (const SamplingTest& test : optional_sampling_check(Y, S, T, batch, c.workers)) {
      csv.row(S.name() + "->" + T.name(), test.name, batch.count(), test.estimate, test.std_error,
              test.z);
      check.require(std::abs(test.z) <= 3.0, "stopping: optional sampling z for " + test.name);
    }

  const std::size_t stop_paths = std::min<std::size_t>(c.paths, 100);
  const Partition pi = Partition::dyadic(grid, std::min(2, c.depth));
  const GridStoppingTime rules[] = {
      GridStoppingTime::deterministic(grid, 0.5), GridStoppingTime::level_hitting(grid, 0.3),
      GridStoppingTime::level_hitting(grid, -0.3), GridStoppingTime::level_hitting(grid, 0.0),
      GridStoppingTime::first_exit(grid, 0.5), one};
  for (const auto& [name, u] : basic_integrands(grid)) {
    const ChaosProcess step = step_approximation(tudor_representation(u), pi);
    const SkorohodProcess Ystep = skorohod_process(step);
    for (const GridStoppingTime& T : rules) {
      double worst = 0.0;
      for (std::size_t i = 0; i < stop_paths; ++i) {
        const StoppedIntegral s = stopped_integral(step, pi, T, batch.path(i), &Ystep);
        worst = std::max(worst, std::abs(s.lhs - s.rhs));
      }
      csv.row(T.name(), "stopped_integral[" + name + "]", stop_paths, worst, 0.0, 0.0);
      check.require(worst <= 1e-10, "stopping: stopped integral for " + name + " at " + T.name());
    }
  }
  r.csv = csv.str();
  return r;
}

using Runner = ExperimentResult (*)(const ExperimentConfig&);
const std::vector<std::pair<std::string, Runner>>& registry() {
  static const std::vector<std::pair<std::string, Runner>> table = {
      {"geometry", geometry},     {"isometry", isometry},     {"martingale", martingale},
      {"theorem1", theorem1},     {"ducnualart", ducnualart}, {"reversal", reversal},
      {"stopping", stopping}};
  return table;
}

bool power_of_two(int x) { return x > 0 && (x & (x - 1)) == 0; }

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream s(value);
  T x{};
  s >> x;
  if (!s || !(s >> std::ws).eof()) throw ContractViolation("bad value for " + key + ": " + value);
  return x;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, _] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

void apply_config_line(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "experiment") c.name = value;
  else if (key == "N") c.N = parse_number<int>(key, value);
  else if (key == "L") c.L = parse_number<int>(key, value);
  else if (key == "paths") c.paths = parse_number<std::size_t>(key, value);
  else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "depth") c.depth = parse_number<int>(key, value);
  else if (key == "M") c.M = parse_number<int>(key, value);
  else if (key == "t") c.t = parse_number<double>(key, value);
  else if (key == "samples") c.samples = parse_number<std::size_t>(key, value);
  else if (key == "n") c.n = parse_number<int>(key, value);
  else if (key == "workers") c.workers = parse_number<int>(key, value);
  else if (key == "out") c.out = value;
  else throw ContractViolation("unknown config key: " + key);
}

void load_config(std::istream& in, ExperimentConfig& config) {
  std::string line;
  while (std::getline(in, line)) {
    line = line.substr(0, line.find('#'));
    const auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ContractViolation("config line needs key=value: " + line);
    apply_config_line(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void validate(const ExperimentConfig& c) {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), c.name) == names.end())
    throw ContractViolation("unknown experiment: " + c.name);
  if (!power_of_two(c.N) || c.N < 2 || c.N > 64) throw ContractViolation("N must be a power of two in 2..64");
  if (c.L < 1 || c.L > kMaxOrder) throw ContractViolation("L must be in 1..4");
  if (c.paths < 2) throw ContractViolation("paths must be at least 2");
  if (c.depth < 1 || c.depth > 30) throw ContractViolation("depth must be positive");
  if (c.name == "theorem1" && (1 << c.depth) > c.N)
    throw ContractViolation("theorem1 needs 2^depth <= N");
  if (c.M < 1 || c.M > 8) throw ContractViolation("M must be in 1..8");
  if (!(c.t > 0.0 && c.t < 1.0)) throw ContractViolation("t must lie in (0,1)");
  if (c.samples < 1) throw ContractViolation("samples must be positive");
  if (c.n < 1 || c.n > kMaxOrder) throw ContractViolation("n must be in 1..4");
  if (c.workers < 1) throw ContractViolation("workers must be positive");
  if (c.name == "stopping" && c.N < 4) throw ContractViolation("stopping needs N >= 4");
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  for (const auto& [name, run] : registry())
    if (name == config.name) return run(config);
  throw InternalError("registry out of sync");
}

std::string experiment_help() {
  return R"(Experiments and CSV columns:
  geometry    M,t,samples,covered,disjoint,violations           uses --M --t --samples --seed
  isometry    n,m,estimate,exact,std_error,z                     orders 1..L, --paths paths on N cells
  martingale  integrand,pairs,max_abs_defect                     u in {1, X_1, X_alpha, X_1+X_alpha}
  theorem1    depth,vhat_residual,sobolev_bound,bf_pathwise_gap,summands,ratio_to_initial
                                                                 u = X_1+X_alpha, depths 1..depth
  ducnualart  integrand,resynthesis_residual,majoration_lhs,vhat
  reversal    N,t,statistic,value,std_error                      reversal identities up to order n,
                                                                 Ito gap at N,2N,4N, decomposition at 64,128,256
  stopping    rule,test_variable,n_paths,estimate,std_error,z    optional sampling and stopped integrals
Every CSV starts with a '#' line echoing the configuration.
)";
}

}  // namespace skorohod
