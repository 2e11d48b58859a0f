#pragma once

#include <vector>

#include "robustmean/rng.hpp"
#include "robustmean/types.hpp"

namespace robustmean {

/// Corrupted sample together with its ground truth: which rows the adversary
/// left untouched, the average of those rows (the oracle estimators are scored
/// against), and the population mean of the clean distribution.
struct LabeledSample {
  PointSet points;
  std::vector<bool> inlier_mask;  // true = untouched row
  Vector oracle_mean;             // average of untouched rows
  Vector true_mean;               // population mean
  double epsilon = 0.0;           // realized corruption fraction

  Index inlier_count() const;
};

/// Inliers i.i.d. standard Gaussian; round(eps*n) uniformly chosen rows are
/// replaced by two point clusters at (sqrt(d/2), +-sqrt(d/2), 0, ..., 0), so
/// every corrupted row sits at distance sqrt(d) from the population mean.
/// Requires d >= 2 and 0 <= eps < 1/2; an odd corrupted count sends the extra
/// row to the first cluster.
LabeledSample gen_gaussian_two_cluster(Index d, Index n, double eps, RngSeed seed);

/// Inlier coordinates i.i.d. Pareto(scale, shape) with shape > 2; all
/// corrupted rows equal the constant vector with coordinates 2 + sqrt(g/d),
/// where g is the mean l2 norm of the pre-corruption sample.
LabeledSample gen_pareto_constant(Index d, Index n, double eps, double shape,
                                  double scale, RngSeed seed);

/// Replaces the rows at the given (distinct) indices; fewer than half the
/// rows may be replaced. `replacements` holds one row per index (it may be
/// empty, unlike a PointSet). The population mean is not knowable for an
/// ad-hoc corruption, so true_mean is the pre-corruption sample average.
LabeledSample corrupt(const PointSet& points, const std::vector<Index>& indices,
                      const Matrix& replacements);

/// sqrt of the top eigenvalue of the normalized inlier sample covariance
/// around the oracle mean ("empirical sigma" handed to the estimators).
double empirical_sigma(const LabeledSample& sample, double tol = 1e-8,
                       int max_iters = 2000);

/// Population sigma of the Pareto setting: per-coordinate standard deviation
/// scale * sqrt(shape / ((shape-1)^2 (shape-2))).
double pareto_sigma(double shape, double scale);

}  // namespace robustmean
