#include <doctest.h>

#include <cmath>

#include "skorohod/error.hpp"
#include "skorohod/reversal.hpp"

using namespace skorohod;

namespace {

ChaosFunctional X(const Grid& g, double a, double b) {
  return ChaosFunctional::isonormal(StepFunction::indicator(g, a, b));
}
ChaosFunctional I2one(const Grid& g) { return ChaosFunctional::from_kernel(SymKernel::constant(g, 2, 1.0)); }

SymKernel random_kernel(const Grid& g, int n, std::uint64_t stream) {
  std::size_t i = 0;
  return SymKernel::from_function(g, n, [&](std::span<const Cell>) {
    return 2.0 * counter_uniform(5, stream, i++) - 1.0;
  });
}

}  // namespace

TEST_CASE("backward representation") {
  Grid g(8);
  auto paths = sample_paths(g, 10, 1);
  // F = X_1: Y_t = X_t = X^_1 - X^_{1-t}
  auto rep = backward_representation(X(g, 0, 1));
  for (int k = 0; k <= 8; ++k) {
    CHECK((rep.y[k] - X(g, 0, g.time(k))).max_abs() == 0.0);
    for (std::size_t p = 0; p < 10; ++p) {
      auto xr = cumulative(reverse_path(paths.path(p)));
      CHECK(eval(rep.y[k], paths.path(p)) == doctest::Approx(xr[8] - xr[8 - k]));
    }
  }
  // deterministic F
  auto det = backward_representation(ChaosFunctional::constant(g, 3.0));
  for (const auto& y : det.y) CHECK(y.max_abs() == 0.0);
  // F = I_2(1): Y_t = I_2(1) - I_2(1_[t,1]^2)
  auto r2 = backward_representation(I2one(g));
  CHECK(r2.y.front().max_abs() == 0.0);
  CHECK((r2.y.back() - I2one(g)).max_abs() == 0.0);
  for (std::size_t p = 0; p < 10; ++p) {
    Eigen::VectorXd dx = paths.path(p);
    const double x = dx.sum(), tail = dx.tail(4).sum();
    CHECK(eval(r2.y[4], dx) == doctest::Approx((x * x - 1) - (tail * tail - 0.5)));
  }
}

TEST_CASE("Clark-Ocone integrand") {
  Grid g(8);
  // F = X_1 gives 1
  auto phi1 = clark_ocone_integrand(X(g, 0, 1));
  for (int a = 1; a <= 8; ++a) {
    CHECK(phi1.at(a).mean() == 1.0);
    CHECK(phi1.at(a).effective_order() == 0);
  }
  // F = X_1^2 - 1: 2 X^ read at the left end of the reversed cell
  auto phi = clark_ocone_integrand(I2one(g));
  for (int a = 1; a <= 8; ++a)
    CHECK((phi.at(a) - 2.0 * X(g, 0, g.time(a - 1))).max_abs() == 0.0);
  // F = H_2(X(h)), |h| = 1: integrand E[H_1(X(h)) | F^_alpha] h(1 - alpha)
  Eigen::VectorXd hv(8);
  hv << 2, 0, 1, 1, 0, 1, 0, 1;
  StepFunction h(g, hv / std::sqrt(hv.squaredNorm() / 8));
  auto F = ChaosFunctional::from_kernel(0.5 * SymKernel::tensor_power(h, 2));
  auto ph = clark_ocone_integrand(F);
  auto hr = h.reversed();
  for (int a = 1; a <= 8; ++a) {
    Eigen::VectorXd past = hr.values();
    past.tail(8 - (a - 1)).setZero();
    auto want = hr(a) * ChaosFunctional::isonormal(StepFunction(g, past));
    CHECK((ph.at(a) - want).max_abs() <= 1e-14);
  }
  require_backward_adapted(ph);
}

TEST_CASE("gradient check by finite differences") {
  Grid g(4);
  ChaosFunctional F(g, 0.0, {random_kernel(g, 1, 1), random_kernel(g, 2, 2), random_kernel(g, 3, 3)});
  const auto batch = sample_paths(g, 1, 8);
  const Eigen::VectorXd path = batch.path(0);
  const double eps = 1e-6;
  for (int s = 1; s <= 4; ++s) {
    Eigen::VectorXd bumped = path;
    bumped[s - 1] += eps * g.width();
    const double fd = (eval(F, bumped) - eval(F, path)) / (eps * g.width());
    CHECK(fd == doctest::Approx(eval(malliavin_derivative(F, s), path)).epsilon(1e-5));
  }
}

TEST_CASE("backward Ito sums") {
  Grid g(8);
  auto paths = sample_paths(g, 10, 2);
  auto ones = ChaosProcess::constant(ChaosFunctional::constant(g, 1.0));
  for (std::size_t p = 0; p < 10; ++p) {
    // X^_1 - X^_{1/2} = X_{1/2}
    CHECK(backward_ito_eval(ones, 0.5, paths.path(p)) == doctest::Approx(paths.path(p).head(4).sum()));
    CHECK(backward_ito_eval(0.0 * ones, 0.5, paths.path(p)) == 0.0);
  }
  // exact gap E[(Y_t - sum)^2] = 2 t / N for F = I_2(1)
  for (int N : {8, 16, 32}) {
    Grid h(N);
    auto rep = backward_representation(I2one(h));
    for (double t : {0.25, 0.5, 1.0}) {
      auto d = rep.y[h.boundary(t)] - backward_ito_chaos(rep.phi_hat, t);
      CHECK(expectation_of_product(d, d) == doctest::Approx(2.0 * t / N));
    }
    auto pth = sample_paths(h, 3, 4);
    for (std::size_t p = 0; p < 3; ++p)
      CHECK(backward_ito_eval(rep.phi_hat, 0.5, pth.path(p)) ==
            doctest::Approx(eval(backward_ito_chaos(rep.phi_hat, 0.5), pth.path(p))));
  }
  // an integrand looking at its own reversed cell is rejected
  auto bad = ChaosProcess::constant(X(g, 0, 1));
  CHECK_THROWS_AS(backward_ito_eval(bad, 0.5, paths.path(0)), ContractViolation);
}

TEST_CASE("reversed-path identities") {
  Grid g(8);
  auto paths = sample_paths(g, 20, 6);
  for (int n = 1; n <= 3; ++n) {
    auto f = random_kernel(g, n, 10 + n);
    auto F = ChaosFunctional::from_kernel(f);
    auto Fr = reverse_functional(F);
    CHECK((reverse_functional(Fr) - F).max_abs() == 0.0);
    CHECK(reverse_kernel(f).norm_sq() == doctest::Approx(f.norm_sq()));
    for (std::size_t p = 0; p < 20; ++p)
      CHECK(std::abs(eval(F, paths.path(p)) - eval(Fr, reverse_path(paths.path(p)))) <= 1e-10);
    // F_{[t,1]} is the reversed sigma-field up to 1 - t
    for (int k = 0; k <= 8; ++k) {
      auto lhs = conditional_expectation(F, TimeSet::cells_between(g, k, 8));
      auto rhs = reverse_functional(conditional_expectation(Fr, TimeSet::cells_between(g, 0, 8 - k)));
      CHECK((lhs - rhs).max_abs() == 0.0);
    }
  }
  // reversed martingale form: Y_t = M^_1 - M^_{1-t}
  ChaosFunctional F(g, 0.2, {random_kernel(g, 1, 20), random_kernel(g, 2, 21)});
  auto rep = backward_representation(F);
  for (int k = 0; k <= 8; ++k) {
    auto m = [&](int j) { return conditional_expectation(reverse_functional(F), TimeSet::cells_between(g, 0, j)); };
    auto alt = reverse_functional(m(8) - m(8 - k));
    CHECK((alt - rep.y[k]).max_abs() <= 1e-15);
  }
}

TEST_CASE("Hermite projection") {
  auto check = [](int N, int n, double t) {
    Grid g(N);
    auto paths = sample_paths(g, 100, 7);
    for (std::size_t p = 0; p < 100; ++p) {
      auto r = hermite_projection(n, StepFunction::constant(g, 1.0), t, paths.path(p));
      CHECK(r.closed_form);
      CHECK(std::abs(r.lhs - r.rhs) <= 1e-10);
    }
  };
  check(8, 1, 0.5);
  check(4, 2, 0.5);
  check(8, 3, 0.25);
  Grid g(8);
  const auto batch = sample_paths(g, 1, 1);
  const Eigen::VectorXd path = batch.path(0);
  // n = 1, h = 1 gives X_t
  CHECK(hermite_projection(1, StepFunction::constant(g, 1.0), 0.25, path).lhs == doctest::Approx(path.head(2).sum()));
  // degenerate tail: h lives on [0,1/2], t = 1/2
  auto h = std::sqrt(2.0) * StepFunction::indicator(g, 0.0, 0.5);
  auto r = hermite_projection(2, h, 0.5, path);
  CHECK_FALSE(r.closed_form);
  const double x = isonormal_eval(path, h);
  CHECK(r.lhs == doctest::Approx((x * x - 1) / 2));
  CHECK_THROWS_AS(hermite_projection(2, StepFunction::constant(g, 2.0), 0.5, path), ContractViolation);
}

TEST_CASE("quadratic covariation") {
  // [X, X]_1 -> 1 with E|.| error of order N^{-1/2}
  Grid g(256);
  auto paths = sample_paths(g, 200, 3);
  double err = 0.0;
  for (std::size_t p = 0; p < 200; ++p) {
    auto x = cumulative(paths.path(p));
    auto q = quadratic_covariation(x, x, 8);
    CHECK(q.totals.size() == 9);
    CHECK(q.curve.size() == 257);
    err += std::abs(q.curve[256] - 1.0);
    CHECK(q.totals[0] == doctest::Approx(x[256] * x[256]));
  }
  // E|sum dX^2 - 1| = sqrt(2/N) sqrt(2/pi)
  CHECK(err / 200 == doctest::Approx(std::sqrt(2.0 / 256) * std::sqrt(2.0 / M_PI)).epsilon(0.2));
  // against a constant
  auto x = cumulative(paths.path(0));
  Eigen::VectorXd c = Eigen::VectorXd::Constant(257, 2.0);
  auto q = quadratic_covariation(x, c, 4);
  CHECK(q.curve[16] == 0.0);
  CHECK_THROWS_AS(quadratic_covariation(x, c.head(10), 2), ContractViolation);
  CHECK_THROWS_AS(quadratic_covariation(x.head(13), c.head(13), 3), ContractViolation);
}

TEST_CASE("semimartingale decomposition") {
  Grid g(16);
  auto paths = sample_paths(g, 5, 4);
  // F = X_1, constant integrand: no bracket, no residual
  DecompositionSpec lin{X(g, 0, 1), [](double, std::span<const double>) { return 1.0; }, {}, true};
  for (std::size_t p = 0; p < 5; ++p) {
    auto r = semimartingale_decomposition_check(lin, paths.path(p), 0.5);
    CHECK(r.bracket_total == 0.0);
    CHECK(r.bracket_tail == 0.0);
    CHECK(std::abs(r.residual) <= 1e-12);
  }
  // F = I_2(1): residual = sum_{c <= k} dX_c^2 - t
  DecompositionSpec sq{I2one(g), [](double, std::span<const double> x) { return 2.0 * x[0]; },
                       {StepFunction::constant(g, 1.0)}, true};
  for (std::size_t p = 0; p < 5; ++p) {
    Eigen::VectorXd dx = paths.path(p);
    auto r = semimartingale_decomposition_check(sq, dx, 0.5);
    CHECK(r.residual == doctest::Approx(dx.head(8).squaredNorm() - 0.5));
    CHECK(r.bracket_total == doctest::Approx(2.0 * dx.squaredNorm()));
  }
  auto batch = sample_paths(g, 4000, 9);
  auto st1 = semimartingale_decomposition_batch(sq, batch, 0.5, 1);
  auto st3 = semimartingale_decomposition_batch(sq, batch, 0.5, 3);
  CHECK(st1.residual_rms == st3.residual_rms);
  CHECK(st1.residual_rms == doctest::Approx(std::sqrt(1.0 / 16)).epsilon(0.05));
}
