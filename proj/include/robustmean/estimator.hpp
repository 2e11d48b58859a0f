#pragma once

#include <optional>
#include <string>
#include <vector>

#include "robustmean/datagen.hpp"
#include "robustmean/indicator_opt.hpp"
#include "robustmean/types.hpp"

namespace robustmean {

/// Tunables of the iterative indicator-minimization pursuit.
struct PursuitConfig {
  double p = 1.0;    // objective exponent, in (0, 1]
  double tau = 0.6;  // per-iteration hard threshold, in (0, 1]
  double c1 = 1.1;   // spectral slack factor, > 1
  double sigma = 1.0;
  std::optional<double> eps_check;        // corruption upper bound; defaults to
                                          // breakdown_point(tau) - 1e-3
  std::optional<double> final_threshold;  // heavy-tail variant: re-threshold
                                          // the last h at this value
  std::optional<double> c2_init;          // overrides 3 sqrt(d) + 2 c1
  IndicatorOptions step1;
  double rw_delta = 1e-2;  // reweighted-l1 smoothing for p < 1
  int rw_rounds = 10;      // cap on reweighting rounds for p < 1
  // Accept eps_check >= breakdown_point(tau) with a warning instead of an
  // error; the schedule cannot contract there and the run does one iteration.
  bool allow_eps_check_above_breakdown = false;
  std::uint64_t seed = 0;  // reserved; the pursuit itself draws no randomness

  void validate() const;
  double effective_eps_check() const;
};

enum class Termination { max_t, c2_non_decrease, solver_failure, empty_support };

std::string to_string(Termination t);

struct IterationRecord {
  int t = 0;
  Vector x;            // center used by this iteration's indicator solve
  double c2 = 0.0;     // radius parameter of this iteration
  double step1_l1 = 0.0;  // ||h||_1 of the returned indicator
  double residual = 0.0;  // feasibility residual of the returned indicator
};

struct PursuitTrace {
  std::vector<IterationRecord> iterates;
  Vector final_x;
  OutlierIndicator final_h;
  Termination terminated_by = Termination::max_t;

  int iterations() const { return static_cast<int>(iterates.size()); }
};

/// Per-coordinate median; even counts average the two middle order statistics.
Vector coordinate_wise_median(const PointSet& points);

/// Hard-thresholded weighted mean:
/// sum (1-h_i) 1{h_i <= tau} y_i / sum (1-h_i) 1{h_i <= tau}.
/// Throws EmptySupportError when no point survives the threshold.
Vector thresholded_mean(const PointSet& points, const OutlierIndicator& h,
                        double tau);

/// Iterative pursuit: starting from the coordinate-wise median, alternate an
/// indicator minimization at spectral bound (c1^2 + c2^2) sigma^2 n with a
/// thresholded mean update, contracting c2 geometrically until the schedule
/// stops decreasing or its horizon is reached.
PursuitTrace run_pursuit(const PointSet& points, const PursuitConfig& cfg);

Vector sample_mean(const PointSet& points);

/// One-directional spectral filter: repeatedly drop the point with the
/// largest squared projection on the top covariance eigenvector while the top
/// eigenvalue exceeds c^2 sigma^2 times the surviving count. Illustrative
/// baseline, not a faithful reproduction of any published filter.
Vector simple_filter_baseline(const PointSet& points, double sigma, double c,
                              int max_rounds);

/// l2 distance between an estimate and the sample's oracle mean.
double recovery_error(const Vector& estimate, const LabeledSample& sample);

}  // namespace robustmean
