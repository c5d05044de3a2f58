#include "cpbandit/bounds.hpp"

#include <cmath>

#include "cpbandit/errors.hpp"

namespace cpbandit::bounds {
namespace {

void check_domain(double delta, double sigma, double eta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw Error(ErrorCode::DomainError, "delta must be > 0");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error(ErrorCode::DomainError, "sigma must be > 0");
  if (!(eta > 0.0 && eta < 0.5)) throw Error(ErrorCode::DomainError, "eta must lie in (0, 1/2)");
}

// floor(1/(2 eta)), the number of 2-eta separated change point candidates.
double candidate_count(double eta) { return std::floor(1.0 / (2.0 * eta)); }

BoundValue finish(double value, bool valid) { return {value, valid, value >= 1.0}; }

}  // namespace

double t1_threshold(double delta, double sigma, double eta) {
  check_domain(delta, sigma, eta);
  const double ratio = sigma * sigma / (delta * delta);
  return ratio * (1.59 * std::log(candidate_count(eta)) - 2.0 * std::log(2.0));
}

BoundValue shb_upper(const BoundQuery& q) {
  check_domain(q.delta, q.sigma, q.eta);
  const double T = static_cast<double>(q.budget);
  const double log_term = std::log(1.0 / (2.0 * q.eta));
  const double exponent = -q.delta * q.delta * T / (600.0 * q.sigma * q.sigma) + 13.0 * log_term;
  return finish(std::exp(exponent), q.eta < 0.25 && T > 60.0 * log_term);
}

BoundValue sh_upper(const BoundQuery& q) {
  check_domain(q.delta, q.sigma, q.eta);
  const double T = static_cast<double>(q.budget);
  const double l = std::log2(1.0 / (2.0 * q.eta));
  const double phases = std::ceil(l);
  const double value =
      2.0 * phases * std::exp(-T * q.delta * q.delta / (36.0 * q.sigma * q.sigma * l));
  return finish(value, T >= 3.0 * phases);
}

BoundValue large_budget_lower(const BoundQuery& q) {
  const double t1 = t1_threshold(q.delta, q.sigma, q.eta);
  const double T = static_cast<double>(q.budget);
  const double k = candidate_count(q.eta);
  const double exponent =
      -q.delta * q.delta * T / (2.0 * q.sigma * q.sigma) + 0.5 * std::log(0.5 * (k - 1.0));
  return finish(std::exp(exponent) / 8.0, T >= t1 && k >= 2.0);
}

BoundValue small_budget_lower(const BoundQuery& q) {
  const double t1 = t1_threshold(q.delta, q.sigma, q.eta);
  const double T = static_cast<double>(q.budget);
  const double k = candidate_count(q.eta);
  const double s2 = q.sigma * q.sigma;
  const double value =
      std::exp(-(q.delta * q.delta * T + 2.0 * s2 * std::log(2.0)) / (s2 * std::log(k)));
  return finish(value, T < t1 && k >= 2.0);
}

BoundValue sha_upper(const BoundQuery& q, double exploration_fraction, const ShaConstants& c) {
  const double B = exploration_fraction;
  if (!(B > 0.0 && B < 1.0)) throw Error(ErrorCode::DomainError, "B must lie in (0,1)");
  const double t1 = t1_threshold(q.delta, q.sigma, q.eta);
  const double T = static_cast<double>(q.budget);
  const double l = std::log2(1.0 / (2.0 * q.eta));
  const double d2 = q.delta * q.delta;
  const double s2 = q.sigma * q.sigma;

  double value;
  if (T < t1) {
    value = 4.0 * std::ceil(l) * std::exp(-c.c1 * (1.0 - B) * d2 * T / (s2 * l));
  } else {
    value = 5.0 * std::exp(-c.c2 * B * (1.0 - B) * d2 * T / s2 + c.c3 * l);
  }
  const bool valid = T > 0.0 && B > 2.0 / T && B < 1.0 - 2.0 / T;
  return finish(value, valid);
}

}  // namespace cpbandit::bounds
