#include "cosknn/generators.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace cosknn {

namespace {

// First `count` entries of a uniform random permutation of {0, ..., d-1}.
std::vector<std::size_t> random_prefix(RngStream& rng, std::size_t d, std::size_t count) {
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t j = 0; j < count && j + 1 < d; ++j) {
    const auto pick = j + static_cast<std::size_t>(rng.below(d - j));
    std::swap(perm[j], perm[pick]);
  }
  perm.resize(count);
  return perm;
}

}  // namespace

LatentUser gen_latent_user(RngStream& ratings_rng, RngStream& noise_rng, const ScenarioConfig& cfg) {
  LatentUser user;
  user.ratings.resize(cfg.d);
  double sum = 0.0;
  for (auto& x : user.ratings) {
    x = ratings_rng.uniform(1.0, cfg.s);
    sum += x;
  }
  user.target = sum / static_cast<double>(cfg.d);
  if (cfg.rating_model == RatingModel::mean_rating_multiplicative_noise) {
    user.target *= noise_rng.uniform(1.0 - cfg.noise_delta, 1.0 + cfg.noise_delta);
  }
  return user;
}

std::vector<MaskSet> gen_mask_sequence_example2(RngStream& rng, std::size_t d, std::size_t start_size) {
  if (start_size < 1 || d < start_size) {
    throw std::invalid_argument("incremental mask process needs 1 <= start_size <= d");
  }
  // Revealing a uniform permutation one item at a time yields a uniform
  // start set and a uniform pick from the complement at every later step.
  const auto order = random_prefix(rng, d, d);
  std::vector<MaskSet> masks;
  masks.reserve(d - start_size + 1);
  MaskSet current(d);
  for (std::size_t j = 0; j < start_size; ++j) current.insert(order[j]);
  masks.push_back(current);
  for (std::size_t j = start_size; j < d; ++j) {
    current.insert(order[j]);
    masks.push_back(current);
  }
  return masks;
}

std::vector<MaskSet> gen_mask_sequence(RngStream& rng, const ScenarioConfig& cfg) {
  switch (cfg.mask_process) {
    case MaskProcess::full_at_entry:
      return {MaskSet::full(cfg.d)};
    case MaskProcess::example2_incremental:
      return gen_mask_sequence_example2(rng, cfg.d, cfg.mask_start_size);
    case MaskProcess::custom_nested: {
      const auto order = random_prefix(rng, cfg.d, cfg.d);
      std::vector<MaskSet> masks;
      MaskSet current(cfg.d);
      std::size_t revealed = cfg.mask_start_size;
      for (std::size_t j = 0; j < revealed; ++j) current.insert(order[j]);
      masks.push_back(current);
      while (revealed < cfg.d) {
        if (rng.bernoulli(cfg.mask_growth_prob)) current.insert(order[revealed++]);
        masks.push_back(current);
      }
      return masks;
    }
  }
  throw std::logic_error("unhandled mask process");
}

MaskSet gen_new_user_mask(RngStream& rng, const ScenarioConfig& cfg) {
  if (cfg.new_user_mask_law == NewUserMaskLaw::full_set || cfg.mask_process == MaskProcess::full_at_entry) {
    return MaskSet::full(cfg.d);
  }
  return MaskSet(cfg.d, random_prefix(rng, cfg.d, cfg.mask_start_size));
}

RevealSequence::RevealSequence(std::vector<std::size_t> join_order, std::vector<std::size_t> size_at)
    : join_order_(std::move(join_order)), size_at_(std::move(size_at)) {
  for (std::size_t m = 0; m < size_at_.size(); ++m) {
    if (size_at_[m] < 1 || size_at_[m] > join_order_.size() || (m > 0 && size_at_[m] < size_at_[m - 1])) {
      throw std::invalid_argument("reveal sequence sizes must be non-decreasing and positive");
    }
  }
}

std::vector<std::size_t> RevealSequence::members_at(std::size_t m) const {
  const auto count = size_at(m);
  std::vector<std::size_t> out(join_order_.begin(), join_order_.begin() + static_cast<std::ptrdiff_t>(count));
  std::sort(out.begin(), out.end());
  return out;
}

RevealSequence gen_reveal_sequence(RngStream& rng, RevealProcess law, double p, std::size_t n) {
  if (n < 1) throw std::invalid_argument("reveal sequence horizon must be >= 1");
  std::vector<std::size_t> join_order;
  std::vector<std::size_t> size_at;
  size_at.reserve(n);
  if (law == RevealProcess::all_users) {
    join_order.resize(n);
    std::iota(join_order.begin(), join_order.end(), std::size_t{0});
    for (std::size_t m = 1; m <= n; ++m) size_at.push_back(m);
    return RevealSequence(std::move(join_order), std::move(size_at));
  }

  // Unrevealed users among {0, ..., m-1}; order is irrelevant, picks are uniform.
  std::vector<std::size_t> pool;
  join_order.push_back(0);
  size_at.push_back(1);
  for (std::size_t m = 2; m <= n; ++m) {
    pool.push_back(m - 1);
    if (rng.bernoulli(p) && !pool.empty()) {
      const auto pick = static_cast<std::size_t>(rng.below(pool.size()));
      join_order.push_back(pool[pick]);
      pool[pick] = pool.back();
      pool.pop_back();
    }
    size_at.push_back(join_order.size());
  }
  return RevealSequence(std::move(join_order), std::move(size_at));
}

DatabaseSnapshot ScenarioRun::snapshot(const ScenarioConfig& cfg) const {
  const auto n = users.size();
  return build_snapshot(users, reveal.members_at(n), new_user, n, RatingScale{cfg.d, cfg.s});
}

ScenarioRun gen_scenario_run(std::uint64_t seed, const ScenarioConfig& cfg, std::size_t n,
                             std::uint64_t trial_key) {
  std::vector<UserTrajectory> users;
  users.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    RngStream ratings_rng(seed, {trial_key, i, Purpose::user_ratings});
    RngStream noise_rng(seed, {trial_key, i, Purpose::user_noise});
    RngStream mask_rng(seed, {trial_key, i, Purpose::user_mask});
    auto latent = gen_latent_user(ratings_rng, noise_rng, cfg);
    users.emplace_back(std::move(latent.ratings), latent.target, gen_mask_sequence(mask_rng, cfg));
  }

  RngStream reveal_rng(seed, {trial_key, 0, Purpose::reveal});
  auto reveal = gen_reveal_sequence(reveal_rng, cfg.reveal_process, cfg.reveal_p, n);

  RngStream new_ratings_rng(seed, {trial_key, 0, Purpose::new_user_ratings});
  RngStream new_noise_rng(seed, {trial_key, 1, Purpose::new_user_ratings});
  RngStream new_mask_rng(seed, {trial_key, 0, Purpose::new_user_mask});
  auto latent = gen_latent_user(new_ratings_rng, new_noise_rng, cfg);
  NewUser new_user{std::move(latent.ratings), gen_new_user_mask(new_mask_rng, cfg)};

  return ScenarioRun{std::move(users), std::move(reveal), std::move(new_user)};
}

}  // namespace cosknn
