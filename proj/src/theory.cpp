#include "robustmean/theory.hpp"

#include <cmath>
#include <limits>

namespace robustmean::theory {

namespace {

constexpr double kE = 2.718281828459045235;

void check_tau(double tau) {
  if (!(tau > 0.0) || !(tau <= 1.0))
    throw ParameterError("tau must lie in (0, 1]");
}

void check_schedule_domain(double eps, double tau) {
  check_tau(tau);
  if (!(eps >= 0.0)) throw ParameterError("eps must be nonnegative");
  const double r = eps / tau;
  if (!(r < 1.0) || !(eps + r < 1.0))
    throw ParameterError("eps out of domain: need eps/tau < 1 and eps + eps/tau < 1");
}

}  // namespace

void TheoryParams::validate() const {
  if (n < 1 || d < 1) throw ParameterError("n and d must be positive");
  if (!(delta > 0.0) || !(delta < 0.25))
    throw ParameterError("delta must lie in (0, 1/4)");
  if (!(c1 > 1.0)) throw ParameterError("c1 must exceed 1");
  if (!(sigma > 0.0)) throw ParameterError("sigma must be positive");
  if (!(eps >= 0.0) || !(eps < 0.5)) throw ParameterError("eps must lie in [0, 1/2)");
  check_tau(tau);
}

double TheoryParams::c1_prime() const {
  const double c1sq = c1 * c1;
  return c1sq * std::min(c1sq * std::log(c1sq) + 1.0 - c1sq, 1.0);
}

double TheoryParams::alpha() const {
  return kE * static_cast<double>(d) * std::log(static_cast<double>(d) / delta) /
         (static_cast<double>(n) * delta * delta * c1_prime());
}

double breakdown_point(double tau) {
  check_tau(tau);
  // Factored to avoid cancellation at small tau:
  // f = tau * (3 + tau - sqrt(tau^2 + 2 tau + 5)) / (2 (1 + tau)).
  return tau * (3.0 + tau - std::sqrt(tau * tau + 2.0 * tau + 5.0)) /
         (2.0 * (1.0 + tau));
}

double contraction_factor(double eps, double tau) {
  check_schedule_domain(eps, tau);
  const double r = eps / tau;
  return std::sqrt(r / ((1.0 - r) * (1.0 - eps - r)));
}

double contraction_offset(double eps, double tau, double c1) {
  check_schedule_domain(eps, tau);
  if (!(c1 >= 1.0)) throw ParameterError("c1 must be at least 1");
  const double r = eps / tau;
  return c1 * (1.0 / std::sqrt(1.0 - r) + 1.0 / std::sqrt(1.0 - eps)) *
         std::sqrt(r / (1.0 - eps - r));
}

int schedule_length(double c2_0, double eps_check, double tau, double c1) {
  if (!(c2_0 > 0.0)) throw ParameterError("c2_0 must be positive");
  if (!(eps_check < breakdown_point(tau)))
    throw ParameterError("eps_check must be below the breakdown point");
  if (eps_check == 0.0) return 1;  // gamma = 0: one step contracts fully
  const double gamma = contraction_factor(eps_check, tau);
  const double beta = contraction_offset(eps_check, tau, c1);
  if (c2_0 < beta / (1.0 - gamma)) return 1;
  const double t = 1.0 + std::log(c2_0) / std::abs(std::log(gamma));
  return std::max(1, static_cast<int>(std::ceil(t)));
}

BoundResult iterate_error_bound(const TheoryParams& params, double eps_check,
                                int t, double c2_0) {
  params.validate();
  if (t < 1 || !(c2_0 > 0.0))
    throw ParameterError("iterate_error_bound requires t >= 1 and c2_0 > 0");

  const BoundResult vacuous{std::numeric_limits<double>::infinity(), true};
  const double a = params.alpha();
  const double eps_prime = params.eps + a;
  if (!(a < 1.0)) return vacuous;
  if (!(eps_check < breakdown_point(params.tau))) return vacuous;
  const double r_prime = eps_prime / params.tau;
  if (!(r_prime < 1.0) || !(eps_prime + r_prime < 1.0)) return vacuous;

  const double gamma_check = contraction_factor(eps_check, params.tau);
  const double beta_check = contraction_offset(eps_check, params.tau, params.c1);
  const double gamma_prime = contraction_factor(eps_prime, params.tau);
  const double beta_prime = contraction_offset(eps_prime, params.tau, params.c1);

  const double decay = std::pow(gamma_check, t - 1);
  const double geom = (eps_check == 0.0)
                          ? 0.0
                          : (1.0 - decay) / (1.0 - gamma_check) * beta_check;
  const double schedule_term =
      params.sigma * (gamma_prime * (c2_0 * decay + geom) + beta_prime);
  const double oracle_term =
      params.c1 * params.sigma *
      std::sqrt(params.eps / ((1.0 - a) * (1.0 - params.eps)));
  const double truncation_term =
      params.sigma * std::sqrt(a * params.delta) *
      (1.0 + 2.0 * std::sqrt(params.c1_prime() /
                             (kE * std::log(static_cast<double>(params.d) /
                                            params.delta))));
  return {schedule_term + oracle_term + truncation_term, false};
}

}  // namespace robustmean::theory
