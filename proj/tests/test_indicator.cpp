#include <cmath>
#include <random>

#include <doctest.h>

#include "robustmean/datagen.hpp"
#include "robustmean/estimator.hpp"
#include "robustmean/indicator_opt.hpp"
#include "robustmean/linalg.hpp"

using namespace robustmean;

namespace {

PointSet one_d(std::initializer_list<double> vals) {
  Matrix m(static_cast<Index>(vals.size()), 1);
  Index i = 0;
  for (double v : vals) m(i++, 0) = v;
  return PointSet(std::move(m));
}

}  // namespace

TEST_CASE("already feasible instances return the zero indicator") {
  SUBCASE("all points at the center") {
    Matrix m = Matrix::Constant(5, 2, 3.0);
    const PointSet pts(m);
    Vector center = Vector::Constant(2, 3.0);
    const auto sol = minimize_indicator({pts, center, 1.0, Vector::Ones(5)});
    CHECK(sol.feasible);
    CHECK(sol.h.norm() == 0.0);
    CHECK(sol.weighted_l1 == 0.0);
    CHECK(sol.sweeps == 0);
  }

  SUBCASE("bound above the full covariance") {
    auto pts = one_d({0.0, 1.0, -1.0});
    const double lam0 = 2.0;  // sum of squares around 0
    const auto sol = minimize_indicator(
        {pts, Vector::Zero(1), lam0 * 1.5, Vector::Ones(3)});
    CHECK(sol.feasible);
    CHECK(sol.h.norm() == 0.0);
  }
}

TEST_CASE("one-dimensional three-point instance") {
  auto pts = one_d({0.0, 0.0, 10.0});
  const IndicatorProblem prob{pts, Vector::Zero(1), 3.0, Vector::Ones(3)};

  SUBCASE("solver lands within 1e-2 of the analytic optimum 0.97") {
    const auto sol = minimize_indicator(prob);
    CHECK(sol.feasible);
    CHECK(std::abs(sol.weighted_l1 - 0.97) <= 1e-2);
    CHECK(sol.h[0] <= 1e-6);
    CHECK(sol.h[1] <= 1e-6);
    // Independent feasibility recheck through linalg.
    CHECK(feasibility_residual(pts, sol.h, Vector::Zero(1), 3.0) <= 1e-3);
  }

  SUBCASE("brute force recovers the grid optimum exactly") {
    const auto sol = brute_force_indicator(prob, 100);
    CHECK(sol.feasible);
    CHECK(sol.weighted_l1 == doctest::Approx(0.97).epsilon(1e-9));
    CHECK(sol.h[2] == doctest::Approx(0.97).epsilon(1e-9));
    CHECK(sol.residual <= 1e-12);
  }
}

TEST_CASE("brute force corner cases") {
  auto pts = one_d({1.0, -2.0});
  SUBCASE("huge bound gives the zero vector") {
    const auto sol =
        brute_force_indicator({pts, Vector::Zero(1), 1e6, Vector::Ones(2)}, 10);
    CHECK(sol.h.norm() == 0.0);
    CHECK(sol.feasible);
  }
  SUBCASE("tight bound still returns a feasible grid point") {
    const auto sol =
        brute_force_indicator({pts, Vector::Zero(1), 1e-3, Vector::Ones(2)}, 10);
    CHECK(sol.feasible);
    CHECK(sol.residual <= 1e-12);
  }
  SUBCASE("instance size contract") {
    Matrix big = Matrix::Zero(7, 1);
    big.col(0).setLinSpaced(7, 0.0, 6.0);
    const PointSet bigpts(big);
    CHECK_THROWS_AS(
        brute_force_indicator({bigpts, Vector::Zero(1), 1.0, Vector::Ones(7)}, 10),
        ContractViolation);
    CHECK_THROWS_AS(
        brute_force_indicator({pts, Vector::Zero(1), 1.0, Vector::Ones(2)}, 101),
        ContractViolation);
  }
}

TEST_CASE("solver tracks the brute-force oracle on random tiny instances") {
  std::mt19937_64 rng(314);
  std::normal_distribution<double> g(0.0, 2.0);
  const int grid = 25;
  for (int rep = 0; rep < 50; ++rep) {
    const Index n = 2 + static_cast<Index>(rng() % 4);  // 2..5
    const Index d = 1 + static_cast<Index>(rng() % 2);  // 1..2
    Matrix m(n, d);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < d; ++j) m(i, j) = g(rng);
    const PointSet pts(std::move(m));
    Vector center(d);
    for (Index j = 0; j < d; ++j) center[j] = 0.3 * g(rng);

    const double lam0 =
        lambda_max(pts, WeightVector(Vector::Ones(n)), center, 1e-10, 50000).value;
    if (lam0 <= 0.0) continue;
    const double frac = 0.1 + 0.8 * ((rng() % 1000) / 999.0);
    const IndicatorProblem prob{pts, center, frac * lam0, Vector::Ones(n)};

    const auto fast = minimize_indicator(prob);
    const auto exact = brute_force_indicator(prob, grid);
    CHECK(fast.feasible);
    const double tol = std::max(0.05, 2.0 / grid) * static_cast<double>(n);
    CHECK(std::abs(fast.weighted_l1 - exact.weighted_l1) <= tol);
    CHECK(feasibility_residual(pts, fast.h, center, prob.bound) <= 1e-3);
  }
}

TEST_CASE("weighted objective steers the minimizer") {
  // Two symmetric outliers; make one cheap to flag and check it absorbs
  // the indicator mass.
  auto pts = one_d({0.0, 0.0, 5.0, -5.0});
  Vector u(4);
  u << 1.0, 1.0, 0.05, 1.0;
  const IndicatorProblem prob{pts, Vector::Zero(1), 10.0, u};
  const auto sol = minimize_indicator(prob);
  CHECK(sol.feasible);
  CHECK(sol.h[2] > sol.h[3]);
  const auto exact = brute_force_indicator(prob, 50);
  CHECK(std::abs(sol.weighted_l1 - exact.weighted_l1) <=
        std::max(0.05, 2.0 / 50) * 4);
}

TEST_CASE("lambda history never increases across sweeps") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(40, 3);
  for (Index i = 0; i < 40; ++i)
    for (Index j = 0; j < 3; ++j) m(i, j) = g(rng);
  m.row(0) << 30.0, 0.0, 0.0;
  m.row(1) << 0.0, 25.0, 0.0;
  const PointSet pts(std::move(m));
  const Vector center = Vector::Zero(3);
  const double lam0 =
      lambda_max(pts, WeightVector(Vector::Ones(40)), center).value;
  const auto sol =
      minimize_indicator({pts, center, 0.05 * lam0, Vector::Ones(40)});
  CHECK(sol.feasible);
  REQUIRE(sol.lambda_history.size() >= 2);
  for (std::size_t k = 1; k < sol.lambda_history.size(); ++k)
    CHECK(sol.lambda_history[k] <=
          sol.lambda_history[k - 1] * (1.0 + 1e-7) + 1e-12);
}

TEST_CASE("sweep exhaustion reports an infeasible best iterate") {
  // Two orthogonal spikes: one sweep can only repair one direction.
  Matrix m(3, 2);
  m << 10.0, 0.0, 0.0, 9.0, 0.1, 0.1;
  const PointSet pts(std::move(m));
  IndicatorOptions opts;
  opts.max_sweeps = 1;
  const auto sol = minimize_indicator({pts, Vector::Zero(2), 0.5, Vector::Ones(3)},
                                      opts);
  CHECK(!sol.feasible);
  CHECK(sol.residual > opts.tol_feas);
  CHECK(sol.sweeps == 1);
}

TEST_CASE("reweighting surrogate") {
  SUBCASE("all-zero history gives uniform weights") {
    const Vector u = reweight_lp(Vector::Zero(5), 0.5, 0.01);
    CHECK((u.array() == 1.0).all());
  }

  SUBCASE("worked two-point example") {
    Vector h(2);
    h << 0.0, 1.0;
    const Vector u = reweight_lp(h, 0.5, 0.01);
    CHECK(u[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(u[1] == doctest::Approx(0.099504).epsilon(1e-4));
  }

  SUBCASE("strictly decreasing in the history entry") {
    Vector h(4);
    h << 0.0, 0.2, 0.5, 1.0;
    const Vector u = reweight_lp(h, 0.7, 0.01);
    for (Index i = 1; i < 4; ++i) CHECK(u[i] < u[i - 1]);
  }

  SUBCASE("parameter errors") {
    CHECK_THROWS_AS(reweight_lp(Vector::Zero(2), 1.0, 0.01), ParameterError);
    CHECK_THROWS_AS(reweight_lp(Vector::Zero(2), 0.5, 0.0), ParameterError);
  }
}

TEST_CASE("reweighted chain stays feasible and sharpens a planted indicator") {
  const auto sample = gen_gaussian_two_cluster(10, 200, 0.1, {555, 0});
  const double sigma = empirical_sigma(sample);
  const Vector center = sample.oracle_mean;
  const double bound = (1.21 + 0.25) * sigma * sigma * 200.0;
  const auto l1 = minimize_indicator(
      {sample.points, center, bound, Vector::Ones(200)});
  const auto lp = minimize_indicator_lp(sample.points, center, bound, 0.5,
                                        0.01, 10);
  REQUIRE(l1.feasible);
  REQUIRE(lp.feasible);
  CHECK(feasibility_residual(sample.points, lp.h, center, bound) <= 1e-3);
  // Reweighting should not blur the indicator: inlier mass stays comparable.
  double l1_inlier = 0.0, lp_inlier = 0.0;
  for (Index i = 0; i < 200; ++i) {
    if (sample.inlier_mask[static_cast<std::size_t>(i)]) {
      l1_inlier += l1.h[i];
      lp_inlier += lp.h[i];
    }
  }
  CHECK(lp_inlier <= l1_inlier + 1.0);
}

TEST_CASE("planted two-cluster recovery keeps the indicator mass near eps n") {
  int hits = 0;
  const Index d = 25, n = 500;
  for (int trial = 0; trial < 20; ++trial) {
    const auto sample = gen_gaussian_two_cluster(
        d, n, 0.1, {909, static_cast<std::uint64_t>(trial)});
    const double sigma = empirical_sigma(sample);
    const Vector median = coordinate_wise_median(sample.points);
    const double c2 = (median - sample.oracle_mean).norm() / sigma;
    const double bound =
        (1.1 * 1.1 + c2 * c2) * sigma * sigma * static_cast<double>(n);
    const auto sol = minimize_indicator(
        {sample.points, sample.oracle_mean, bound, Vector::Ones(n)});
    if (!sol.feasible) continue;
    if (sol.h.sum() <= 1.5 * 0.1 * static_cast<double>(n)) ++hits;
  }
  CHECK(hits >= 18);
}
