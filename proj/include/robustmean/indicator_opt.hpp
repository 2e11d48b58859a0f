#pragma once

#include <vector>

#include "robustmean/types.hpp"

namespace robustmean {

/// One indicator-minimization instance: find h in [0,1]^n of small (weighted)
/// l1 mass whose complement weights keep the covariance around `center`
/// spectrally below `bound`. `u` holds the per-coordinate objective weights
/// (all-ones for the plain l1 objective).
struct IndicatorProblem {
  const PointSet& points;
  Vector center;
  double bound = 0.0;  // (c1^2 + c2^2) sigma^2 n in the pursuit
  Vector u;
};

struct IndicatorSolution {
  OutlierIndicator h;
  double weighted_l1 = 0.0;  // sum_i u_i h_i
  double residual = 0.0;     // top eigenvalue / bound - 1 at the returned h
  int sweeps = 0;            // down-weighting sweeps performed
  bool feasible = false;
  std::vector<double> lambda_history;  // top eigenvalue before each sweep
};

struct IndicatorOptions {
  double tol_feas = 1e-3;
  int max_sweeps = 200;
  double eta = 0.3;  // fraction of the directional excess removed per sweep
  double spectral_tol = 1e-6;
  int spectral_max_iters = 1000;
};

/// Spectral down-weighting solver. Starting from w = 1, each sweep finds the
/// top eigenpair of the weighted covariance and, when the quadratic form along
/// it exceeds the bound, takes weight from points in decreasing t_i^2 / u_i
/// order (t_i the centered projection) until an eta fraction of that
/// direction's excess is removed. Gentle fills let the direction update
/// between commits, which keeps the weight mass close to the minimum.
/// Repeats until the top eigenvalue is within tol_feas of the bound. Always
/// terminates feasibly for max_sweeps large enough, since w -> 0 satisfies
/// any positive bound.
IndicatorSolution minimize_indicator(const IndicatorProblem& prob,
                                     const IndicatorOptions& opts = {});

/// Exhaustive grid search over {0, 1/grid_steps, ..., 1}^n; test oracle for
/// tiny instances (n <= 6, d <= 2, grid_steps <= 100).
IndicatorSolution brute_force_indicator(const IndicatorProblem& prob,
                                        int grid_steps);

/// Surrogate weights for one reweighted-l1 round of the lp objective
/// (0 < p < 1): u_i = (h_prev_i + delta)^(p-1), normalized to max u_i = 1.
Vector reweight_lp(const OutlierIndicator& h_prev, double p, double delta);

/// Chain of at most `rounds` reweighted-l1 solves for the lp objective; the
/// first round uses all-ones weights, later rounds reweight from the previous
/// solution's h. Stops early once h stabilizes. Returns the last solution.
IndicatorSolution minimize_indicator_lp(const PointSet& points,
                                        const Vector& center, double bound,
                                        double p, double delta, int rounds,
                                        const IndicatorOptions& opts = {});

}  // namespace robustmean
