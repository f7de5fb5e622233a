#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cosknn/similarity.hpp"

namespace cosknn {

/// Configuration problem attributed to a single key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

enum class MaskProcess {
  full_at_entry,         // every user rates all d items on entry
  example2_incremental,  // start_size uniform items, then one new item per step
  custom_nested,         // start_size uniform items, then one new item per step with probability growth_prob
};

enum class RevealProcess {
  all_users,         // R_n = {1, ..., n}
  bernoulli_growth,  // R_1 = {1}; each step adds one unrevealed user with probability p
};

enum class NewUserMaskLaw { full_set, same_as_M1 };

enum class RatingModel { mean_rating, mean_rating_multiplicative_noise };

enum class ScheduleKind { ex1_rate, ex2_rate, constant, power };

struct KScheduleSpec {
  ScheduleKind kind = ScheduleKind::ex1_rate;
  /// k for `constant`, exponent a for `power`; unused otherwise.
  double value = 1.0;

  bool operator==(const KScheduleSpec&) const = default;
};

/// Full description of a simulation scenario and the experiment run on it.
struct ScenarioConfig {
  std::size_t d = 5;
  double s = 10.0;

  MaskProcess mask_process = MaskProcess::full_at_entry;
  std::size_t mask_start_size = 4;
  double mask_growth_prob = 0.5;

  RevealProcess reveal_process = RevealProcess::all_users;
  double reveal_p = 0.5;

  NewUserMaskLaw new_user_mask_law = NewUserMaskLaw::full_set;

  RatingModel rating_model = RatingModel::mean_rating;
  double noise_delta = 0.0;

  Psi psi = Psi::identity;
  KScheduleSpec schedule;
  std::vector<std::size_t> n_values{100, 400, 1600, 6400};

  std::uint64_t seed = 20090101;
  std::size_t trials = 200;

  /// Throws ConfigError naming the offending key.
  void validate() const;

  /// Upper end of the target range: s (1 + delta) under multiplicative noise.
  double effective_scale() const;

  bool operator==(const ScenarioConfig&) const = default;
};

std::string_view to_string(MaskProcess v);
std::string_view to_string(RevealProcess v);
std::string_view to_string(NewUserMaskLaw v);
std::string_view to_string(RatingModel v);
std::string_view to_string(ScheduleKind v);

}  // namespace cosknn
