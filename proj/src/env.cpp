#include "cpbandit/env.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "cpbandit/errors.hpp"

namespace cpbandit {

std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::Gaussian: return "gaussian";
    case NoiseKind::Uniform: return "uniform";
    case NoiseKind::None: return "none";
  }
  return "gaussian";
}

NoiseKind parse_noise_kind(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "gaussian") return NoiseKind::Gaussian;
  if (lower == "uniform") return NoiseKind::Uniform;
  if (lower == "none") return NoiseKind::None;
  throw Error(ErrorCode::ConfigError, "unknown noise kind '" + std::string(text) +
                                          "' (expected gaussian, uniform or none)");
}

double Environment::delta() const noexcept { return std::abs(mu1_ - mu2_); }

Environment make_environment(double mu1, double mu2, double x_star, double sigma,
                             NoiseKind noise) {
  if (!std::isfinite(mu1) || !std::isfinite(mu2) || mu1 == mu2) {
    throw Error(ErrorCode::DegenerateEnvironment, "mu1 and mu2 must be finite and distinct");
  }
  if (!(x_star >= 0.0 && x_star < 1.0)) {
    throw Error(ErrorCode::OutOfRangeChangePoint,
                "x_star must lie in [0,1), got " + std::to_string(x_star));
  }
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::NegativeSigma, "sigma must be finite and >= 0");
  }
  return Environment(mu1, mu2, x_star, sigma, noise);
}

double mean_at(const Environment& env, double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorCode::OutOfRangeAction, "action must lie in [0,1], got " + std::to_string(x));
  }
  return x <= env.x_star() ? env.mu1() : env.mu2();
}

double sample_reward(const Environment& env, double x, RngStream& rng) {
  const double mean = mean_at(env, x);
  const double sigma = env.effective_sigma();
  if (sigma == 0.0) return mean;
  if (env.noise_kind() == NoiseKind::Uniform) {
    const double half_width = sigma * std::sqrt(3.0);
    return mean + rng.uniform(-half_width, half_width);
  }
  return mean + sigma * rng.normal();
}

}  // namespace cpbandit
