#pragma once

#include <array>
#include <string>
#include <string_view>

#include "recoverlab/core.hpp"

namespace recoverlab {

/// The seven nonzero-coefficient laws. All are symmetric about zero.
enum class DistKind {
  Normal,
  Laplacian,
  Uniform,
  Bernoulli,
  BimodalGaussian,
  BimodalUniform,
  BimodalRayleigh,
};

struct DistributionSpec {
  DistKind kind = DistKind::Normal;
  double laplace_rate = 10.0;      // density (rate/2) exp(-rate |x|)
  double uniform_halfwidth = 1.0;  // support [-w, w]
  double bernoulli_amplitude = 1.0;
  double bimodal_gauss_mean = 3.0;  // unit-variance components at +-mean
  double bimodal_uniform_lo = 2.0;  // support [-hi,-lo] u [lo,hi]
  double bimodal_uniform_hi = 4.0;
  double rayleigh_sigma = 3.0;

  void validate() const {
    if (laplace_rate <= 0 || uniform_halfwidth <= 0 || bernoulli_amplitude <= 0 ||
        rayleigh_sigma <= 0)
      fail("InvalidDistribution", "scale/rate parameters must be positive");
    if (!(bimodal_uniform_lo < bimodal_uniform_hi) || bimodal_uniform_lo < 0)
      fail("InvalidDistribution", "bimodal uniform support must be ordered");
  }

  double sample(Rng& rng) const {
    switch (kind) {
      case DistKind::Normal:
        return rng.normal();
      case DistKind::Laplacian: {
        const double u = rng.uniform01() - 0.5;
        const double s = u < 0 ? -1.0 : 1.0;
        return -(s / laplace_rate) * std::log(1.0 - 2.0 * std::abs(u));
      }
      case DistKind::Uniform:
        return rng.uniform(-uniform_halfwidth, uniform_halfwidth);
      case DistKind::Bernoulli:
        return rng.sign() * bernoulli_amplitude;
      case DistKind::BimodalGaussian:
        return rng.sign() * bimodal_gauss_mean + rng.normal();
      case DistKind::BimodalUniform:
        return rng.sign() * rng.uniform(bimodal_uniform_lo, bimodal_uniform_hi);
      case DistKind::BimodalRayleigh: {
        const double mag =
            rayleigh_sigma * std::sqrt(-2.0 * std::log(rng.uniform_pos()));
        return rng.sign() * mag;
      }
    }
    fail("InvalidDistribution", "unknown distribution kind");
  }
};

inline constexpr std::array<DistKind, 7> kAllDistributions = {
    DistKind::Normal,          DistKind::Laplacian,     DistKind::Uniform,
    DistKind::Bernoulli,       DistKind::BimodalGaussian,
    DistKind::BimodalUniform,  DistKind::BimodalRayleigh,
};

inline std::string distribution_name(DistKind k) {
  switch (k) {
    case DistKind::Normal: return "normal";
    case DistKind::Laplacian: return "laplacian";
    case DistKind::Uniform: return "uniform";
    case DistKind::Bernoulli: return "bernoulli";
    case DistKind::BimodalGaussian: return "bimodal_gaussian";
    case DistKind::BimodalUniform: return "bimodal_uniform";
    case DistKind::BimodalRayleigh: return "bimodal_rayleigh";
  }
  return "?";
}

inline DistKind parse_distribution(std::string_view name) {
  for (DistKind k : kAllDistributions)
    if (name == distribution_name(k)) return k;
  // Single/double letter shorthands used in the literature.
  if (name == "n") return DistKind::Normal;
  if (name == "l") return DistKind::Laplacian;
  if (name == "u") return DistKind::Uniform;
  if (name == "b") return DistKind::Bernoulli;
  if (name == "bg") return DistKind::BimodalGaussian;
  if (name == "bu") return DistKind::BimodalUniform;
  if (name == "br") return DistKind::BimodalRayleigh;
  fail("ConfigError", "unknown distribution: " + std::string(name));
}

}  // namespace recoverlab
