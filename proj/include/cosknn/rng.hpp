#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string_view>

namespace cosknn {

/// Identifier recorded in every output manifest.
inline constexpr std::string_view kRngAlgorithm =
    "xoshiro256**/splitmix64-keyed-streams v1";

/// What a substream is used for. Values are part of the stream key and
/// must never be renumbered.
enum class Purpose : std::uint32_t {
  user_ratings = 1,
  user_noise = 2,
  user_mask = 3,
  reveal = 4,
  new_user_ratings = 5,
  new_user_mask = 6,
};

/// Content address of a substream: the same (seed, trial, user, purpose)
/// always yields the same sequence, regardless of which other streams were
/// created or in what order.
struct StreamId {
  std::uint64_t trial = 0;
  std::uint64_t user = 0;
  Purpose purpose = Purpose::user_ratings;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Order-sensitive combination of two keys into one.
std::uint64_t combine_keys(std::uint64_t a, std::uint64_t b);

/// xoshiro256** seeded from a splitmix64 hash of the stream key.
///
/// Distribution helpers are implemented here rather than taken from
/// <random> so draws are identical across standard libraries.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, StreamId id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next(); }

  std::uint64_t next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();
  double uniform(double lo, double hi);
  /// Uniform integer in [0, bound), unbiased. bound must be > 0.
  std::uint64_t below(std::uint64_t bound);
  bool bernoulli(double p);

 private:
  std::uint64_t s_[4];
};

}  // namespace cosknn
