#pragma once

#include <string_view>

#include "cpbandit/rng.hpp"

namespace cpbandit {

enum class NoiseKind { Gaussian, Uniform, None };

std::string_view to_string(NoiseKind kind);
/// Accepts "gaussian", "uniform", "none" (case-insensitive). Throws ConfigError.
NoiseKind parse_noise_kind(std::string_view text);

/// Piecewise constant mean with one change point:
///   f(x) = mu1 for x <= x_star, mu2 for x > x_star.
/// Immutable after construction.
class Environment {
 public:
  double mu1() const noexcept { return mu1_; }
  double mu2() const noexcept { return mu2_; }
  double x_star() const noexcept { return x_star_; }
  /// Noise scale as configured.
  double sigma() const noexcept { return sigma_; }
  /// Noise scale actually applied (0 for NoiseKind::None).
  double effective_sigma() const noexcept { return noise_ == NoiseKind::None ? 0.0 : sigma_; }
  NoiseKind noise_kind() const noexcept { return noise_; }
  double delta() const noexcept;

 private:
  friend Environment make_environment(double, double, double, double, NoiseKind);
  Environment(double mu1, double mu2, double x_star, double sigma, NoiseKind noise)
      : mu1_(mu1), mu2_(mu2), x_star_(x_star), sigma_(sigma), noise_(noise) {}

  double mu1_;
  double mu2_;
  double x_star_;
  double sigma_;
  NoiseKind noise_;
};

/// Throws DegenerateEnvironment, OutOfRangeChangePoint or NegativeSigma.
Environment make_environment(double mu1, double mu2, double x_star, double sigma,
                             NoiseKind noise = NoiseKind::Gaussian);

/// The boundary x == x_star belongs to the left piece. Throws OutOfRangeAction.
double mean_at(const Environment& env, double x);

/// One noisy observation at x. Uniform noise lives on [-sigma*sqrt(3), sigma*sqrt(3)]
/// so its variance is sigma^2.
double sample_reward(const Environment& env, double x, RngStream& rng);

}  // namespace cpbandit
