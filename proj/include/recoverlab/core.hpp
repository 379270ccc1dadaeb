#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace recoverlab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;
using IndexSet = std::vector<Index>;  // kept sorted ascending

/// Error with a short machine-readable tag (ends up in result tables).
class RecoveryError : public std::runtime_error {
 public:
  RecoveryError(std::string tag, const std::string& what)
      : std::runtime_error(what), tag_(std::move(tag)) {}
  const std::string& tag() const noexcept { return tag_; }

 private:
  std::string tag_;
};

[[noreturn]] inline void fail(const char* tag, const std::string& msg) {
  throw RecoveryError(tag, msg);
}

inline void ensure_finite(const Eigen::Ref<const Matrix>& a, const char* what) {
  if (!a.allFinite()) fail("NonFinite", std::string(what) + " contains NaN/Inf");
}

// ---------------------------------------------------------------------------
// Seeding and deterministic sampling.
//
// Sub-seeds are derived by hashing (master seed, role tag, indices) with the
// splitmix64 finalizer, so any trial can be regenerated in isolation and the
// results do not depend on scheduling order.
// ---------------------------------------------------------------------------

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t seed_mix(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x8f1bbcdcbfa53e0bULL;
  for (auto p : parts) h = mix64(h ^ p);
  return h;
}

namespace seed_tag {
inline constexpr std::uint64_t phi = 0x5048495f54414721ULL;
inline constexpr std::uint64_t sparse_vector = 0x584d41534b5f5421ULL;
inline constexpr std::uint64_t trial = 0x545249414c5f5421ULL;
inline constexpr std::uint64_t algorithm = 0x414c474f5f544147ULL;
}  // namespace seed_tag

/// Deterministic RNG: std::mt19937_64 for the bit stream, hand-rolled value
/// transforms so outputs do not depend on the standard library's
/// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(mix64(seed)) {}

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  /// Uniform in (0, 1], safe as a log() argument.
  double uniform_pos() {
    return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller (one spare cached).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// ±1 equiprobable.
  double sign() { return (eng_() & 1u) ? 1.0 : -1.0; }

  /// Unbiased integer in [0, n).
  std::size_t index(std::size_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % n);
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// ---------------------------------------------------------------------------
// Small numeric helpers shared across modules.
// ---------------------------------------------------------------------------

inline std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    v[static_cast<std::size_t>(i)] =
        (i == count - 1) ? hi : lo + (hi - lo) * double(i) / double(count - 1);
  return v;
}

/// round-half-away-from-zero for grid arithmetic (m = round(delta*N) etc).
inline Index round_count(double x) {
  return static_cast<Index>(std::llround(x));
}

/// Indices of the k largest |v| entries; ties broken toward the lower index.
/// Returned sorted ascending. Entries with |v| <= floor are excluded.
inline IndexSet top_k_indices(const Vector& v, Index k, double floor = 0.0) {
  std::vector<Index> idx;
  idx.reserve(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > floor) idx.push_back(i);
  const auto by_magnitude = [&v](Index a, Index b) {
    const double fa = std::abs(v[a]), fb = std::abs(v[b]);
    return fa != fb ? fa > fb : a < b;
  };
  if (static_cast<Index>(idx.size()) > k) {
    std::nth_element(idx.begin(), idx.begin() + k, idx.end(), by_magnitude);
    idx.resize(static_cast<std::size_t>(k));
  }
  std::sort(idx.begin(), idx.end());
  return idx;
}

/// m-th largest magnitude (1-indexed); 0 when m exceeds the vector length.
inline double mth_largest_magnitude(const Vector& v, Index m) {
  if (m < 1 || m > v.size()) return 0.0;
  std::vector<double> mags(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) mags[static_cast<std::size_t>(i)] = std::abs(v[i]);
  std::nth_element(mags.begin(), mags.begin() + (m - 1), mags.end(),
                   std::greater<double>());
  return mags[static_cast<std::size_t>(m - 1)];
}

inline double median_abs(const Vector& v) {
  const std::size_t n = static_cast<std::size_t>(v.size());
  if (n == 0) return 0.0;
  std::vector<double> mags(n);
  for (std::size_t i = 0; i < n; ++i) mags[i] = std::abs(v[static_cast<Index>(i)]);
  const std::size_t h = n / 2;
  std::nth_element(mags.begin(), mags.begin() + h, mags.end());
  double med = mags[h];
  if (n % 2 == 0) {
    const double lo = *std::max_element(mags.begin(), mags.begin() + h);
    med = 0.5 * (med + lo);
  }
  return med;
}

inline double normal_pdf(double x) {
  return 0.3989422804014326779399461 * std::exp(-0.5 * x * x);
}

/// P(Z > x) for standard normal Z.
inline double normal_upper_tail(double x) {
  return 0.5 * std::erfc(x * 0.7071067811865475244008444);
}

/// Inverse standard-normal CDF (Acklam's rational approximation, ~1.15e-9
/// relative accuracy; ample for threshold schedules).
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) fail("InvalidQuantile", "quantile needs p in (0,1)");
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1.0 - plow;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > phigh) {
    q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

/// Union of two ascending index sets.
inline IndexSet index_union(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline IndexSet nonzero_support(const Vector& v) {
  IndexSet s;
  for (Index i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) s.push_back(i);
  return s;
}

}  // namespace recoverlab
