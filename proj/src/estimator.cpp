#include "robustmean/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "robustmean/linalg.hpp"
#include "robustmean/theory.hpp"

namespace robustmean {

void PursuitConfig::validate() const {
  if (!(p > 0.0) || !(p <= 1.0)) throw ParameterError("p must lie in (0, 1]");
  if (!(tau > 0.0) || !(tau <= 1.0)) throw ParameterError("tau must lie in (0, 1]");
  if (!(c1 > 1.0)) throw ParameterError("c1 must exceed 1");
  if (!(sigma > 0.0)) throw ParameterError("sigma must be positive");
  if (final_threshold &&
      (!(*final_threshold > 0.0) || !(*final_threshold <= 1.0)))
    throw ParameterError("final_threshold must lie in (0, 1]");
  if (c2_init && !(*c2_init > 0.0)) throw ParameterError("c2_init must be positive");
  if (!(rw_delta > 0.0)) throw ParameterError("rw_delta must be positive");
  if (rw_rounds < 1) throw ParameterError("rw_rounds must be at least 1");
  if (eps_check) {
    if (!(*eps_check >= 0.0) || !(*eps_check < 1.0))
      throw ParameterError("eps_check must lie in [0, 1)");
    if (*eps_check >= theory::breakdown_point(tau) &&
        !allow_eps_check_above_breakdown)
      throw ParameterError(
          "eps_check at or above the breakdown point for this tau; "
          "set allow_eps_check_above_breakdown to run anyway");
  }
}

double PursuitConfig::effective_eps_check() const {
  return eps_check ? *eps_check
                   : std::max(0.0, theory::breakdown_point(tau) - 1e-3);
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::max_t: return "max_T";
    case Termination::c2_non_decrease: return "c2_non_decrease";
    case Termination::solver_failure: return "solver_failure";
    case Termination::empty_support: return "empty_support";
  }
  return "unknown";
}

Vector coordinate_wise_median(const PointSet& points) {
  const Index n = points.size();
  const Index d = points.dim();
  Vector med(d);
  std::vector<double> col(static_cast<std::size_t>(n));
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < n; ++i)
      col[static_cast<std::size_t>(i)] = points.data()(i, j);
    auto mid = col.begin() + n / 2;
    std::nth_element(col.begin(), mid, col.end());
    if (n % 2 == 1) {
      med[j] = *mid;
    } else {
      const double upper = *mid;
      med[j] = (*std::max_element(col.begin(), mid) + upper) / 2.0;
    }
  }
  return med;
}

Vector thresholded_mean(const PointSet& points, const OutlierIndicator& h,
                        double tau) {
  if (h.size() != points.size())
    throw ContractViolation("indicator length must equal the number of points");
  if (!(tau > 0.0) || !(tau <= 1.0)) throw ParameterError("tau must lie in (0, 1]");
  Vector x = Vector::Zero(points.dim());
  double mass = 0.0;
  for (Index i = 0; i < points.size(); ++i) {
    if (h[i] <= tau) {
      const double w = 1.0 - h[i];
      x += w * points.data().row(i).transpose();
      mass += w;
    }
  }
  if (!(mass > 0.0))
    throw EmptySupportError("no point survives the threshold");
  return x / mass;
}

PursuitTrace run_pursuit(const PointSet& points, const PursuitConfig& cfg) {
  cfg.validate();
  const Index n = points.size();
  const Index d = points.dim();
  const double eps_check = cfg.effective_eps_check();
  const double breakdown = theory::breakdown_point(cfg.tau);
  const bool supercritical = eps_check >= breakdown;
  if (supercritical)
    std::cerr << "robustmean: warning: eps_check " << eps_check
              << " is at or above the breakdown point " << breakdown
              << " for tau " << cfg.tau << "; the radius schedule cannot "
              << "contract and a single iteration will run\n";

  double gamma_check = 0.0, beta_check = 0.0;
  int horizon = 1;
  if (!supercritical) {
    gamma_check = theory::contraction_factor(eps_check, cfg.tau);
    beta_check = theory::contraction_offset(eps_check, cfg.tau, cfg.c1);
  }

  Vector x = coordinate_wise_median(points);
  double c2 = cfg.c2_init
                  ? *cfg.c2_init
                  : 3.0 * std::sqrt(static_cast<double>(d)) + 2.0 * cfg.c1;
  if (!supercritical)
    horizon = theory::schedule_length(c2, eps_check, cfg.tau, cfg.c1);

  PursuitTrace trace;
  trace.final_h = Vector::Zero(n);
  bool have_h = false;

  int t = 0;
  for (;;) {
    const double bound = (cfg.c1 * cfg.c1 + c2 * c2) * cfg.sigma * cfg.sigma *
                         static_cast<double>(n);
    const IndicatorSolution sol =
        cfg.p < 1.0
            ? minimize_indicator_lp(points, x, bound, cfg.p, cfg.rw_delta,
                                    cfg.rw_rounds, cfg.step1)
            : minimize_indicator(
                  IndicatorProblem{points, x, bound, Vector::Ones(n)},
                  cfg.step1);
    trace.iterates.push_back(
        {t, x, c2, sol.h.sum(), sol.residual});
    trace.final_h = sol.h;
    have_h = true;
    if (!sol.feasible) {
      trace.terminated_by = Termination::solver_failure;
      break;  // final_x stays at the last successful center
    }

    Vector x_next;
    try {
      x_next = thresholded_mean(points, sol.h, cfg.tau);
    } catch (const EmptySupportError&) {
      trace.terminated_by = Termination::empty_support;
      break;  // keep the previous iterate
    }
    x = std::move(x_next);
    ++t;

    const double c2_next = supercritical ? c2 : gamma_check * c2 + beta_check;
    const bool decreasing = c2_next < c2;
    c2 = c2_next;
    if (t >= horizon) {
      trace.terminated_by = Termination::max_t;
      break;
    }
    if (!decreasing) {
      trace.terminated_by = Termination::c2_non_decrease;
      break;
    }
  }

  trace.final_x = x;
  if (cfg.final_threshold && have_h) {
    try {
      trace.final_x = thresholded_mean(points, trace.final_h, *cfg.final_threshold);
    } catch (const EmptySupportError&) {
      // keep the unthresholded iterate
    }
  }
  return trace;
}

Vector sample_mean(const PointSet& points) {
  return points.data().colwise().mean().transpose();
}

Vector simple_filter_baseline(const PointSet& points, double sigma, double c,
                              int max_rounds) {
  if (!(c > 1.0)) throw ParameterError("c must exceed 1");
  if (!(sigma > 0.0)) throw ParameterError("sigma must be positive");
  if (max_rounds < 0) throw ParameterError("max_rounds must be nonnegative");

  const Index n = points.size();
  Vector active = Vector::Ones(n);
  Index alive = n;
  Vector sum = points.data().colwise().sum().transpose();
  Vector dir;

  for (int round = 0; round <= max_rounds; ++round) {
    if (alive == 0) return coordinate_wise_median(points);
    const Vector mean = sum / static_cast<double>(alive);
    const Vector* warm = dir.size() > 0 ? &dir : nullptr;
    const SpectralResult top = lambda_max(points, WeightVector(active), mean,
                                          1e-6, 1000, warm);
    dir = top.direction;
    if (top.value <= c * c * sigma * sigma * static_cast<double>(alive) ||
        round == max_rounds)
      return mean;

    Index worst = -1;
    double worst_score = -1.0;
    for (Index i = 0; i < n; ++i) {
      if (active[i] == 0.0) continue;
      const double proj = dir.dot(points.data().row(i).transpose() - mean);
      const double score = proj * proj;
      if (score > worst_score) {
        worst_score = score;
        worst = i;
      }
    }
    active[worst] = 0.0;
    sum -= points.data().row(worst).transpose();
    --alive;
  }
  return coordinate_wise_median(points);  // unreachable
}

double recovery_error(const Vector& estimate, const LabeledSample& sample) {
  if (estimate.size() != sample.points.dim())
    throw ContractViolation("estimate dimension must equal the sample dimension");
  return (estimate - sample.oracle_mean).norm();
}

}  // namespace robustmean
