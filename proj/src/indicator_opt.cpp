#include "robustmean/indicator_opt.hpp"

#include <cmath>

#include "robustmean/linalg.hpp"

namespace robustmean {

namespace {

void check_problem(const IndicatorProblem& prob) {
  if (prob.center.size() != prob.points.dim())
    throw ContractViolation("center dimension must equal the point dimension");
  if (prob.u.size() != prob.points.size())
    throw ContractViolation("objective weight length must equal the number of points");
  if (!(prob.bound > 0.0)) throw ParameterError("bound must be positive");
  if (!(prob.u.array() > 0.0).all() || !prob.u.allFinite())
    throw ParameterError("objective weights must be positive and finite");
}

IndicatorSolution finish(const IndicatorProblem& prob, const Vector& w,
                         double lambda, int sweeps, double tol_feas,
                         std::vector<double> history) {
  IndicatorSolution sol;
  sol.h = (1.0 - w.array()).matrix();
  sol.weighted_l1 = prob.u.dot(sol.h);
  sol.residual = lambda / prob.bound - 1.0;
  sol.sweeps = sweeps;
  sol.feasible = sol.residual <= tol_feas;
  sol.lambda_history = std::move(history);
  return sol;
}

}  // namespace

IndicatorSolution minimize_indicator(const IndicatorProblem& prob,
                                     const IndicatorOptions& opts) {
  check_problem(prob);
  if (!(opts.tol_feas > 0.0)) throw ParameterError("tol_feas must be positive");
  if (opts.max_sweeps < 1) throw ParameterError("max_sweeps must be at least 1");
  if (!(opts.eta > 0.0) || !(opts.eta <= 1.0))
    throw ParameterError("eta must lie in (0, 1]");

  const Matrix& data = prob.points.data();
  const Index n = prob.points.size();

  Vector w = Vector::Ones(n);
  Vector dir;
  std::vector<double> history;
  std::vector<Index> order(static_cast<std::size_t>(n));
  int sweeps = 0;

  auto top_eigen = [&](const Vector& weights) {
    const Vector* warm = dir.size() > 0 ? &dir : nullptr;
    SpectralResult res =
        lambda_max(prob.points, WeightVector(weights), prob.center,
                   opts.spectral_tol, opts.spectral_max_iters, warm);
    dir = res.direction;
    return res.value;
  };

  double lambda = top_eigen(w);
  history.push_back(lambda);

  while (lambda / prob.bound - 1.0 > opts.tol_feas && sweeps < opts.max_sweeps) {
    // Quadratic form along the current top direction. Reducing w_i by delta
    // lowers it by delta * t_i^2 at objective cost u_i * delta, so the
    // cheapest repair takes weight from points in decreasing t_i^2 / u_i
    // order until the direction meets the bound (eta < 1 removes only that
    // fraction of the excess per sweep).
    Vector t = data * dir;
    t.array() -= prob.center.dot(dir);
    const Vector t2 = t.cwiseAbs2();
    const double along = w.dot(t2);
    double excess = along - prob.bound;
    if (excess > 0.0) {
      excess *= opts.eta;
      for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
      std::sort(order.begin(), order.end(), [&](Index a, Index b) {
        return t2[a] / prob.u[a] > t2[b] / prob.u[b];
      });
      // Equal-efficiency points (e.g. a cluster of identical outliers) form a
      // tie group; any split of the reduction across the group costs the same
      // objective mass, and scaling every member by a common factor keeps the
      // returned indicator uniform over the group, which the threshold step
      // downstream relies on.
      std::size_t g0 = 0;
      while (g0 < order.size() && excess > 0.0) {
        const Index lead = order[g0];
        const double e_lead = t2[lead] / prob.u[lead];
        if (t2[lead] <= 0.0) break;
        std::size_t g1 = g0 + 1;
        while (g1 < order.size()) {
          const Index cand = order[g1];
          if (t2[cand] / prob.u[cand] < e_lead * (1.0 - 1e-9)) break;
          ++g1;
        }
        double group_mass = 0.0;
        for (std::size_t k = g0; k < g1; ++k) group_mass += w[order[k]] * t2[order[k]];
        if (group_mass > 0.0) {
          const double removed = std::min(group_mass, excess);
          const double factor = 1.0 - removed / group_mass;
          for (std::size_t k = g0; k < g1; ++k) w[order[k]] *= factor;
          excess -= removed;
        }
        g0 = g1;
      }
    }
    ++sweeps;
    lambda = top_eigen(w);
    history.push_back(lambda);
  }
  return finish(prob, w, lambda, sweeps, opts.tol_feas, std::move(history));
}

IndicatorSolution brute_force_indicator(const IndicatorProblem& prob,
                                        int grid_steps) {
  check_problem(prob);
  const Index n = prob.points.size();
  const Index d = prob.points.dim();
  if (n > 6 || d > 2 || grid_steps < 1 || grid_steps > 100)
    throw ContractViolation("brute force oracle limited to n <= 6, d <= 2, grid <= 100");
  const double combos =
      std::pow(static_cast<double>(grid_steps + 1), static_cast<double>(n));
  if (combos > 1e8)
    throw ContractViolation("brute force instance too large to enumerate");

  // Per-point outer products of the centered rows; d <= 2 so three entries
  // (a, b, c) = (dx^2, dx*dy, dy^2) suffice.
  std::vector<double> pa(n), pb(n), pc(n);
  double ta = 0.0, tb = 0.0, tc = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double dx = prob.points.data()(i, 0) - prob.center[0];
    const double dy = d == 2 ? prob.points.data()(i, 1) - prob.center[1] : 0.0;
    pa[i] = dx * dx;
    pb[i] = dx * dy;
    pc[i] = dy * dy;
    ta += pa[i];
    tb += pb[i];
    tc += pc[i];
  }

  const double slack = 1e-12 * prob.bound;
  Vector h = Vector::Zero(n);
  Vector best_h = Vector::Ones(n);
  double best_mass = prob.u.sum();
  double best_lambda = 0.0;

  auto top2x2 = [](double a, double b, double c) {
    const double mean = 0.5 * (a + c);
    const double disc = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    return mean + disc;
  };

  // Depth-first over the grid; (a,b,c) carry the covariance with the current
  // prefix of h applied, mass the partial objective (prunes against best).
  auto recurse = [&](auto&& self, Index i, double a, double b, double c,
                     double mass) -> void {
    if (mass >= best_mass) return;
    if (i == n) {
      const double lambda = d == 2 ? top2x2(a, b, c) : a;
      if (lambda <= prob.bound + slack) {
        best_mass = mass;
        best_h = h;
        best_lambda = lambda;
      }
      return;
    }
    for (int k = 0; k <= grid_steps; ++k) {
      const double hv = static_cast<double>(k) / grid_steps;
      h[i] = hv;
      self(self, i + 1, a - hv * pa[i], b - hv * pb[i], c - hv * pc[i],
           mass + prob.u[i] * hv);
    }
    h[i] = 0.0;
  };
  recurse(recurse, 0, ta, tb, tc, 0.0);

  IndicatorSolution sol;
  sol.h = best_h;
  sol.weighted_l1 = prob.u.dot(best_h);
  sol.residual = best_lambda / prob.bound - 1.0;
  sol.sweeps = 0;
  sol.feasible = sol.residual <= 1e-12;
  return sol;
}

Vector reweight_lp(const OutlierIndicator& h_prev, double p, double delta) {
  if (!(p > 0.0) || !(p < 1.0)) throw ParameterError("p must lie in (0, 1)");
  if (!(delta > 0.0)) throw ParameterError("delta must be positive");
  if (!h_prev.allFinite() || (h_prev.array() < 0.0).any())
    throw ContractViolation("h_prev entries must be nonnegative");
  Vector u = (h_prev.array() + delta).pow(p - 1.0).matrix();
  return u / u.maxCoeff();
}

IndicatorSolution minimize_indicator_lp(const PointSet& points,
                                        const Vector& center, double bound,
                                        double p, double delta, int rounds,
                                        const IndicatorOptions& opts) {
  if (rounds < 1) throw ParameterError("rounds must be at least 1");
  IndicatorSolution sol = minimize_indicator(
      IndicatorProblem{points, center, bound, Vector::Ones(points.size())}, opts);
  for (int r = 1; r < rounds && sol.feasible; ++r) {
    const Vector u = reweight_lp(sol.h, p, delta);
    IndicatorSolution next =
        minimize_indicator(IndicatorProblem{points, center, bound, u}, opts);
    const double drift = (next.h - sol.h).lpNorm<Eigen::Infinity>();
    sol = std::move(next);
    if (drift <= 1e-4) break;
  }
  return sol;
}

}  // namespace robustmean
