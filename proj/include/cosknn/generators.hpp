#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cosknn/core_model.hpp"
#include "cosknn/rng.hpp"
#include "cosknn/scenario.hpp"

namespace cosknn {

struct LatentUser {
  std::vector<double> ratings;  // i.i.d. uniform on [1, s]
  double target = 0.0;
};

/// Ratings uniform on [1, s]^d; target is their mean, times an independent
/// V ~ U[1 - delta, 1 + delta] under the noisy model. `noise` is only drawn
/// from when the model is noisy.
LatentUser gen_latent_user(RngStream& ratings_rng, RngStream& noise_rng, const ScenarioConfig& cfg);

/// Incremental mask process: a uniform start_size-subset first, then one
/// uniformly chosen unrated item per step. Materialized up to saturation,
/// so the result has d - start_size + 1 entries and |M^j| = min(d, j + start_size - 1).
std::vector<MaskSet> gen_mask_sequence_example2(RngStream& rng, std::size_t d, std::size_t start_size = 4);

/// Mask sequence for cfg.mask_process, materialized up to saturation.
std::vector<MaskSet> gen_mask_sequence(RngStream& rng, const ScenarioConfig& cfg);

/// The new user's revealed item set M.
MaskSet gen_new_user_mask(RngStream& rng, const ScenarioConfig& cfg);

/// Nested reveal sets R_1 subset ... subset R_n stored as the order in
/// which users (0-based) were revealed plus |R_m| for each m.
class RevealSequence {
 public:
  RevealSequence(std::vector<std::size_t> join_order, std::vector<std::size_t> size_at);

  std::size_t horizon() const { return size_at_.size(); }
  /// |R_m| for 1 <= m <= horizon().
  std::size_t size_at(std::size_t m) const { return size_at_.at(m - 1); }
  /// R_m as ascending 0-based user indices.
  std::vector<std::size_t> members_at(std::size_t m) const;

 private:
  std::vector<std::size_t> join_order_;
  std::vector<std::size_t> size_at_;
};

RevealSequence gen_reveal_sequence(RngStream& rng, RevealProcess law, double p, std::size_t n);

/// One realization of the whole model up to time n.
struct ScenarioRun {
  std::vector<UserTrajectory> users;
  RevealSequence reveal;
  NewUser new_user;

  DatabaseSnapshot snapshot(const ScenarioConfig& cfg) const;
};

/// Draws users, masks, reveal sets and the new user from independent
/// substreams keyed by (seed, trial_key, user, purpose).
ScenarioRun gen_scenario_run(std::uint64_t seed, const ScenarioConfig& cfg, std::size_t n,
                             std::uint64_t trial_key = 0);

}  // namespace cosknn
