#pragma once

#include "robustmean/types.hpp"

namespace robustmean {

/// Top eigenpair of the weighted covariance operator around a center.
struct SpectralResult {
  double value = 0.0;   // top eigenvalue, >= 0
  Vector direction;     // unit-norm eigenvector estimate
  int iterations = 0;   // operator applications performed
  bool converged = false;
};

/// Applies the operator sum_i w_i (y_i - center)(y_i - center)^T to v in
/// O(nd) without materializing the d x d matrix.
Vector apply_weighted_cov(const PointSet& points, const WeightVector& w,
                          const Vector& center, const Vector& v);

/// Top eigenvalue of sum_i w_i (y_i - center)(y_i - center)^T by power
/// iteration. Deterministic start: the normalized all-ones vector, falling
/// back to normalized (1, 2, ..., d) if the first iterate collapses. A caller
/// holding a good direction estimate may pass it as warm_start.
SpectralResult lambda_max(const PointSet& points, const WeightVector& w,
                          const Vector& center, double tol = 1e-6,
                          int max_iters = 1000,
                          const Vector* warm_start = nullptr);

/// lambda_max(sum (1-h_i)(y_i-center)(y_i-center)^T) / bound - 1.
/// Nonpositive means the spectral constraint holds at this bound.
double feasibility_residual(const PointSet& points, const OutlierIndicator& h,
                            const Vector& center, double bound,
                            double tol = 1e-6, int max_iters = 1000);

}  // namespace robustmean
