#ifndef CRT_RECORDS_RNG_HPP
#define CRT_RECORDS_RNG_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace crt {

/// Deterministic, splittable random stream.
///
/// Counter-based: draw k of substream j is mix64(key(seed, j) + k * gamma),
/// i.e. a SplitMix64 sequence whose start state is a hash of
/// (root_seed, substream_id). Each substream has period 2^64 and substream
/// keys are decorrelated by the 64-bit finalizer, which is what replicate
/// parallelism relies on: one substream per replicate, reproducible in
/// isolation and identical regardless of scheduling.
///
/// A stream is single-owner; move it between threads, never share it.
class RandomStream {
 public:
  RandomStream(std::uint64_t root_seed, std::uint64_t substream_id)
      : root_seed_(root_seed),
        substream_id_(substream_id),
        state_(derive_key(root_seed, substream_id)) {}

  std::uint64_t next_u64() {
    ++draw_count_;
    state_ += kGamma;
    return mix64(state_);
  }

  /// Uniform in [0, 1) with 53-bit resolution.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in (0, 1): half-offset grid, never returns an endpoint.
  double next_unit_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform in [a, b).
  double uniform(double a, double b) {
    if (!(a < b)) throw std::invalid_argument("RandomStream::uniform: need a < b");
    const double v = a + next_unit() * (b - a);
    return v < b ? v : std::nextafter(b, a);
  }

  /// Exp(rate) by inverse CDF, -log(1-U)/rate. U is drawn on the open unit
  /// interval so the log argument is in (0, 1) and the result is strictly
  /// positive.
  double exponential(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate))
      throw std::invalid_argument("RandomStream::exponential: rate must be positive and finite");
    return -std::log1p(-next_unit_open()) / rate;
  }

  /// Uniform index in [0, n). Bias is O(n / 2^53), negligible at the sizes
  /// used here.
  std::size_t uniform_index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("RandomStream::uniform_index: empty range");
    const auto i = static_cast<std::size_t>(next_unit() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

  std::uint64_t root_seed() const { return root_seed_; }
  std::uint64_t substream_id() const { return substream_id_; }
  std::uint64_t draw_count() const { return draw_count_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  static std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t sub) {
    return mix64(mix64(seed + kGamma) ^ mix64(sub ^ 0xD1B54A32D192ED03ull));
  }

  std::uint64_t root_seed_;
  std::uint64_t substream_id_;
  std::uint64_t state_;
  std::uint64_t draw_count_ = 0;
};

}  // namespace crt

#endif  // CRT_RECORDS_RNG_HPP
