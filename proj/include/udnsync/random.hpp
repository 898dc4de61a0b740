#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace udnsync {

/// Seeded pseudo-random stream. Not thread-safe; give each worker its own.
///
/// Child streams are derived from a root seed plus a path of integers
/// (sweep point, replication, ...) so that parallel replications draw from
/// independent, reproducible sequences regardless of scheduling order.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : seed_(seed) { reseed(); }

  std::uint64_t seed() const noexcept { return seed_; }

  /// Child stream keyed by this stream's path extended with `path`. Does not
  /// consume draws from this stream.
  RandomSource derive(std::initializer_list<std::uint64_t> path) const {
    RandomSource child(*this);
    child.path_.insert(child.path_.end(), path.begin(), path.end());
    child.reseed();
    return child;
  }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  /// Uniform on (0, 1].
  double uniform_open_closed() { return 1.0 - std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

  double exponential(double mean) { return std::exponential_distribution<double>(1.0 / mean)(engine_); }

  double gamma(double shape, double scale) {
    return std::gamma_distribution<double>(shape, scale)(engine_);
  }

  std::uint64_t next_u64() { return engine_(); }

  template <class Int>
  Int uniform_int(Int lo, Int hi) {
    return std::uniform_int_distribution<Int>(lo, hi)(engine_);
  }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  static std::seed_seq::result_type lo32(std::uint64_t v) {
    return static_cast<std::seed_seq::result_type>(v & 0xffffffffu);
  }
  static std::seed_seq::result_type hi32(std::uint64_t v) {
    return static_cast<std::seed_seq::result_type>(v >> 32);
  }

  void reseed() {
    std::vector<std::seed_seq::result_type> words{lo32(seed_), hi32(seed_)};
    for (auto p : path_) {
      words.push_back(lo32(p));
      words.push_back(hi32(p));
    }
    // Length suffix keeps paths such as {} and {0} distinct.
    words.push_back(static_cast<std::seed_seq::result_type>(path_.size()));
    std::seed_seq seq(words.begin(), words.end());
    engine_.seed(seq);
  }

  std::uint64_t seed_;
  std::vector<std::uint64_t> path_;
  std::mt19937_64 engine_;
};

}  // namespace udnsync
