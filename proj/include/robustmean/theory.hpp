#pragma once

#include "robustmean/types.hpp"

namespace robustmean::theory {

/// Problem parameters entering the finite-sample error bound.
struct TheoryParams {
  Index n = 0;
  Index d = 0;
  double delta = 0.1;  // confidence parameter, in (0, 1/4)
  double c1 = 1.1;     // spectral slack factor, > 1
  double sigma = 1.0;
  double eps = 0.0;  // true corruption fraction
  double tau = 1.0;  // hard threshold, in (0, 1]

  void validate() const;
  double c1_prime() const;  // c1^2 * min{c1^2 log c1^2 + 1 - c1^2, 1}
  double alpha() const;     // e d log(d/delta) / (n delta^2 c1')
};

/// Breakdown point of the thresholded estimator as a function of the
/// threshold tau in (0, 1]. Increasing, with maximum 1 - 1/sqrt(2) at tau = 1.
double breakdown_point(double tau);

/// Per-iteration contraction factor of the distance schedule. Defined for
/// eps >= 0 with eps/tau < 1 and eps + eps/tau < 1; less than 1 exactly when
/// eps < breakdown_point(tau).
double contraction_factor(double eps, double tau);

/// Additive offset of the distance schedule. Same domain as
/// contraction_factor; c1 >= 1 accepted (the algorithm config enforces > 1).
double contraction_offset(double eps, double tau, double c1);

/// Number of outer iterations needed for the schedule started at c2_0 to
/// contract: ceil(1 + ln(c2_0) / |ln gamma|), or 1 when c2_0 is already below
/// the schedule's fixed point offset/(1-gamma). Requires
/// eps_check < breakdown_point(tau).
int schedule_length(double c2_0, double eps_check, double tau, double c1 = 1.0);

struct BoundResult {
  double value = 0.0;
  bool vacuous = false;  // domain condition failed; value is +infinity
};

/// Theoretical bound on ||x^(t) - mu||_2 after t >= 1 iterations of the
/// pursuit started at radius c2_0. Reporting aid only; returns a vacuous
/// result when any domain condition fails numerically (e.g. alpha >= 1 at
/// small n).
BoundResult iterate_error_bound(const TheoryParams& params, double eps_check,
                                int t, double c2_0);

}  // namespace robustmean::theory
