#include <cmath>
#include <random>

#include <doctest.h>

#include "eigen_oracle.hpp"
#include "robustmean/datagen.hpp"
#include "robustmean/estimator.hpp"
#include "robustmean/linalg.hpp"
#include "robustmean/theory.hpp"

using namespace robustmean;

namespace {

PointSet one_d(std::initializer_list<double> vals) {
  Matrix m(static_cast<Index>(vals.size()), 1);
  Index i = 0;
  for (double v : vals) m(i++, 0) = v;
  return PointSet(std::move(m));
}

}  // namespace

TEST_CASE("coordinate-wise median") {
  Matrix m(3, 2);
  m << 0.0, 0.0, 1.0, 2.0, 2.0, 1.0;
  Vector med = coordinate_wise_median(PointSet(m));
  CHECK(med[0] == 1.0);
  CHECK(med[1] == 1.0);

  CHECK(coordinate_wise_median(one_d({0.0, 10.0}))[0] == 5.0);
  CHECK(coordinate_wise_median(one_d({7.5}))[0] == 7.5);
}

TEST_CASE("thresholded mean") {
  Matrix m(3, 2);
  m << 1.0, 0.0, 3.0, 2.0, 100.0, 100.0;
  const PointSet pts(m);

  SUBCASE("hard exclusion of flagged points") {
    Vector h(3);
    h << 0.0, 0.0, 1.0;
    const Vector x = thresholded_mean(pts, h, 0.6);
    CHECK(x[0] == doctest::Approx(2.0));
    CHECK(x[1] == doctest::Approx(1.0));
  }

  SUBCASE("zero indicator gives the sample mean") {
    const Vector x = thresholded_mean(pts, Vector::Zero(3), 0.6);
    CHECK((x - sample_mean(pts)).norm() < 1e-12);
  }

  SUBCASE("weighted average arithmetic") {
    auto p = one_d({0.0, 0.0, 3.0});
    Vector h(3);
    h << 0.5, 0.5, 0.0;
    CHECK(thresholded_mean(p, h, 0.6)[0] == doctest::Approx(1.5));
  }

  SUBCASE("empty support signals") {
    Vector h = Vector::Ones(3);
    CHECK_THROWS_AS(thresholded_mean(pts, h, 0.6), EmptySupportError);
  }
}

TEST_CASE("thresholding inequality holds on random draws") {
  // sum (1-h_i) 1{h_i <= tau} >= (1 - eps/tau) n whenever ||h||_1 <= eps n.
  std::mt19937_64 rng(77);
  for (int rep = 0; rep < 1000; ++rep) {
    const Index n = 1 + static_cast<Index>(rng() % 50);
    Vector h(n);
    for (Index i = 0; i < n; ++i) h[i] = (rng() % 10000) / 9999.0;
    h *= (rng() % 1000) / 999.0;  // keep eps = ||h||_1 / n below 1
    const double tau = 0.01 + 0.99 * ((rng() % 1000) / 999.0);
    const double eps = h.sum() / static_cast<double>(n);
    double lhs = 0.0;
    for (Index i = 0; i < n; ++i)
      if (h[i] <= tau) lhs += 1.0 - h[i];
    CHECK(lhs >= (1.0 - eps / tau) * static_cast<double>(n) - 1e-12);
  }
  // Worked example: h = (.5, .5, 0), tau = .6 gives 2 >= 4/3.
  Vector h(3);
  h << 0.5, 0.5, 0.0;
  double lhs = 0.0;
  for (Index i = 0; i < 3; ++i)
    if (h[i] <= 0.6) lhs += 1.0 - h[i];
  CHECK(lhs == doctest::Approx(2.0));
  CHECK(lhs >= 4.0 / 3.0);
}

TEST_CASE("weighted mean minimizes the weighted covariance spectral norm") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g(0.0, 1.5);
  for (int rep = 0; rep < 50; ++rep) {
    const Index n = 3 + static_cast<Index>(rng() % 28);
    const Index d = 2 + static_cast<Index>(rng() % 2);  // oracle handles d <= 3
    Matrix m(n, d);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < d; ++j) m(i, j) = g(rng);
    const PointSet pts(std::move(m));
    Vector w(n);
    for (Index i = 0; i < n; ++i) w[i] = 0.05 + 0.95 * ((rng() % 1000) / 999.0);
    const Vector xw = pts.data().transpose() * w / w.sum();
    const double at_xw = testoracle::top_eigenvalue_sym(
        testoracle::dense_weighted_cov(pts, w, xw));
    for (int zrep = 0; zrep < 20; ++zrep) {
      Vector z(d);
      for (Index j = 0; j < d; ++j) z[j] = xw[j] + 0.5 * g(rng);
      const double at_z = testoracle::top_eigenvalue_sym(
          testoracle::dense_weighted_cov(pts, w, z));
      CHECK(at_xw <= at_z * (1.0 + 1e-9) + 1e-12);
    }
  }
}

TEST_CASE("coordinate-wise median concentrates on clean gaussian data") {
  const Index d = 20, n = 2000;
  const double limit = 3.0 * std::sqrt(static_cast<double>(d));
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = gen_gaussian_two_cluster(
        d, n, 0.0, {4242, static_cast<std::uint64_t>(trial)});
    const Vector med = coordinate_wise_median(s.points);
    CHECK(med.norm() <= limit);
  }
}

TEST_CASE("pursuit on clean data returns the sample mean") {
  const auto s = gen_gaussian_two_cluster(10, 2000, 0.0, {17, 0});
  PursuitConfig cfg;
  cfg.sigma = 1.0;
  const auto trace = run_pursuit(s.points, cfg);
  CHECK((trace.final_x - sample_mean(s.points)).norm() <= 0.05);
  CHECK(trace.final_h.lpNorm<Eigen::Infinity>() <= 1e-9);
}

TEST_CASE("radius schedule") {
  const auto s = gen_gaussian_two_cluster(100, 60, 0.0, {23, 0});
  PursuitConfig cfg;
  cfg.sigma = 1.0;
  cfg.eps_check = 0.1;
  cfg.tau = 0.6;
  cfg.c1 = 1.1;
  const auto trace = run_pursuit(s.points, cfg);

  SUBCASE("default start radius and horizon") {
    REQUIRE(!trace.iterates.empty());
    CHECK(trace.iterates[0].c2 == doctest::Approx(32.2).epsilon(1e-12));
    CHECK(trace.iterations() == 7);  // ceil(1 + ln(32.2)/0.649651)
    CHECK(trace.terminated_by == Termination::max_t);
  }

  SUBCASE("recursion is exact arithmetic") {
    const double gamma = theory::contraction_factor(0.1, 0.6);
    const double beta = theory::contraction_offset(0.1, 0.6, 1.1);
    for (std::size_t t = 1; t < trace.iterates.size(); ++t)
      CHECK(trace.iterates[t].c2 == gamma * trace.iterates[t - 1].c2 + beta);
  }

  SUBCASE("recorded radii strictly decrease") {
    for (std::size_t t = 1; t < trace.iterates.size(); ++t)
      CHECK(trace.iterates[t].c2 < trace.iterates[t - 1].c2);
  }
}

TEST_CASE("pursuit stops once the radius fails to shrink") {
  const auto s = gen_gaussian_two_cluster(10, 200, 0.0, {29, 0});
  PursuitConfig cfg;
  cfg.sigma = 1.0;
  cfg.c2_init = 0.05;  // below the schedule fixed point
  cfg.eps_check = 0.1;
  const auto trace = run_pursuit(s.points, cfg);
  CHECK(trace.iterations() == 1);
  CHECK((trace.terminated_by == Termination::c2_non_decrease ||
         trace.terminated_by == Termination::max_t));
}

TEST_CASE("pursuit failure paths") {
  SUBCASE("solver failure keeps the last center") {
    auto pts = one_d({-10.0, 10.0});
    PursuitConfig cfg;
    cfg.sigma = 0.01;
    cfg.c2_init = 1.0;
    cfg.step1.max_sweeps = 1;
    cfg.tau = 0.5;
    const auto trace = run_pursuit(pts, cfg);
    CHECK(trace.terminated_by == Termination::solver_failure);
    CHECK(trace.final_x[0] == 0.0);  // the coordinate-wise median
  }

  SUBCASE("empty support keeps the previous iterate") {
    auto pts = one_d({-10.0, 10.0});
    PursuitConfig cfg;
    cfg.sigma = 0.01;
    cfg.c2_init = 1.0;
    cfg.tau = 0.5;
    cfg.step1.max_sweeps = 500;
    const auto trace = run_pursuit(pts, cfg);
    CHECK(trace.terminated_by == Termination::empty_support);
    CHECK(trace.final_x[0] == 0.0);
    CHECK(trace.final_h.minCoeff() > 0.5);
  }
}

TEST_CASE("config validation") {
  PursuitConfig cfg;
  cfg.p = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg = {};
  cfg.tau = 1.2;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg = {};
  cfg.c1 = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg = {};
  cfg.eps_check = 0.25;  // above f(0.6) = 0.1948
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg.allow_eps_check_above_breakdown = true;
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("supercritical eps_check runs a single iteration") {
  const auto s = gen_gaussian_two_cluster(10, 100, 0.1, {51, 0});
  PursuitConfig cfg;
  cfg.sigma = 1.0;
  cfg.eps_check = 0.25;
  cfg.tau = 0.6;
  cfg.allow_eps_check_above_breakdown = true;
  const auto trace = run_pursuit(s.points, cfg);
  CHECK(trace.iterations() == 1);
}

TEST_CASE("heavy-tail variant applies the final threshold") {
  // Planted constant outliers; tau = 1 keeps them weighted during the loop,
  // the final threshold must cut them out.
  const Index d = 10, n = 400;
  const auto s = gen_pareto_constant(d, n, 0.2, 2.5, 1.0, {67, 0});
  const double sigma = empirical_sigma(s);
  PursuitConfig cfg;
  cfg.sigma = sigma;
  cfg.tau = 1.0;
  cfg.final_threshold = 0.6;
  cfg.eps_check = 0.03;
  const auto with_cut = run_pursuit(s.points, cfg);
  cfg.final_threshold.reset();
  const auto without_cut = run_pursuit(s.points, cfg);
  CHECK(recovery_error(with_cut.final_x, s) <=
        recovery_error(without_cut.final_x, s) + 1e-9);
}

TEST_CASE("pursuit equivariances") {
  std::mt19937_64 rng(2718);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    const Index d = 3 + static_cast<Index>(rng() % 5);
    const Index n = 60 + static_cast<Index>(rng() % 80);
    const auto s = gen_gaussian_two_cluster(
        d, n, 0.1, {888, static_cast<std::uint64_t>(rep)});
    PursuitConfig cfg;
    cfg.sigma = 1.2;
    cfg.tau = 0.6;
    const auto base = run_pursuit(s.points, cfg);

    Vector shift(d);
    for (Index j = 0; j < d; ++j) shift[j] = 3.0 * g(rng);
    Matrix shifted = s.points.data();
    shifted.rowwise() += shift.transpose();
    const auto moved = run_pursuit(PointSet(shifted), cfg);
    CHECK((moved.final_x - (base.final_x + shift)).lpNorm<Eigen::Infinity>() <=
          1e-8);

    const double scale = 0.2 + 5.0 * ((rng() % 1000) / 999.0);
    PursuitConfig scaled_cfg = cfg;
    scaled_cfg.sigma = cfg.sigma * scale;
    const auto scaled =
        run_pursuit(PointSet(Matrix(scale * s.points.data())), scaled_cfg);
    CHECK((scaled.final_x - scale * base.final_x).norm() <=
          1e-6 * (1.0 + scale * base.final_x.norm()));

    std::vector<Index> perm(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix permuted(n, d);
    for (Index i = 0; i < n; ++i)
      permuted.row(i) = s.points.data().row(perm[static_cast<std::size_t>(i)]);
    const auto shuffled = run_pursuit(PointSet(permuted), cfg);
    CHECK((shuffled.final_x - base.final_x).lpNorm<Eigen::Infinity>() <= 1e-8);
    for (Index i = 0; i < n; ++i)
      CHECK(std::abs(shuffled.final_h[i] -
                     base.final_h[perm[static_cast<std::size_t>(i)]]) <= 1e-8);
  }
}

TEST_CASE("sample mean basics") {
  CHECK(sample_mean(one_d({4.0}))[0] == 4.0);
  CHECK(sample_mean(one_d({0.0, 2.0}))[0] == 1.0);

  // Permuting the rows leaves the mean unchanged (up to summation rounding).
  const auto s = gen_gaussian_two_cluster(6, 31, 0.0, {64, 0});
  Matrix reversed(31, 6);
  for (Index i = 0; i < 31; ++i) reversed.row(i) = s.points.data().row(30 - i);
  CHECK((sample_mean(PointSet(reversed)) - sample_mean(s.points)).norm() <=
        1e-12);
}

TEST_CASE("simple filter baseline") {
  SUBCASE("clean data below threshold returns the plain mean") {
    const auto s = gen_gaussian_two_cluster(5, 500, 0.0, {3, 0});
    const double sigma = empirical_sigma(s);
    const Vector est = simple_filter_baseline(s.points, sigma, 1.5, 250);
    CHECK((est - sample_mean(s.points)).norm() <= 1e-12);
  }

  SUBCASE("an extreme outlier is removed first") {
    auto pts = one_d({0.1, -0.2, 0.05, 1e6});
    const Vector est = simple_filter_baseline(pts, 1.0, 1.5, 2);
    CHECK(std::abs(est[0]) < 1.0);
  }

  SUBCASE("round cap limits removals") {
    auto pts = one_d({0.1, -0.2, 0.05, 1e6});
    const Vector est = simple_filter_baseline(pts, 1.0, 1.5, 0);
    CHECK(est[0] == doctest::Approx(250000.0).epsilon(1e-6));
  }

  SUBCASE("c must exceed one") {
    auto pts = one_d({1.0});
    CHECK_THROWS_AS(simple_filter_baseline(pts, 1.0, 1.0, 5), ParameterError);
  }
}

TEST_CASE("recovery error") {
  const auto s = gen_gaussian_two_cluster(4, 50, 0.1, {12, 0});
  CHECK(recovery_error(s.oracle_mean, s) == 0.0);
  Vector e1 = s.oracle_mean;
  e1[0] += 1.0;
  CHECK(recovery_error(e1, s) == doctest::Approx(1.0));
  const Vector mirrored = 2.0 * s.oracle_mean - e1;
  CHECK(recovery_error(mirrored, s) == doctest::Approx(recovery_error(e1, s)));
  CHECK_THROWS_AS(recovery_error(Vector::Zero(3), s), ContractViolation);
}

TEST_CASE("termination labels") {
  CHECK(to_string(Termination::max_t) == "max_T");
  CHECK(to_string(Termination::c2_non_decrease) == "c2_non_decrease");
  CHECK(to_string(Termination::solver_failure) == "solver_failure");
  CHECK(to_string(Termination::empty_support) == "empty_support");
}
