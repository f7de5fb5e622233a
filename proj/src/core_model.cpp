#include "cosknn/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cosknn {

namespace {

void check_full_ratings(std::span<const double> full, const RatingScale& scale, const char* what) {
  if (full.size() != scale.d) {
    throw ModelError(std::string(what) + ": expected " + std::to_string(scale.d) + " ratings, got " +
                     std::to_string(full.size()));
  }
  for (std::size_t j = 0; j < full.size(); ++j) {
    if (!(full[j] >= 1.0 && full[j] <= scale.s)) {
      throw ModelError(std::string(what) + ": rating of item " + std::to_string(j + 1) +
                       " is outside [1, s]");
    }
  }
}

}  // namespace

void RatingScale::validate() const {
  if (d < 1) throw ModelError("rating scale: d must be >= 1");
  if (!(s > 1.0) || !std::isfinite(s)) throw ModelError("rating scale: s must be a finite real > 1");
}

double RatingVector::norm() const {
  double acc = 0.0;
  for (double x : entries_) acc += x * x;
  return std::sqrt(acc);
}

bool RatingVector::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](double x) { return x == 0.0; });
}

void RatingVector::validate(const RatingScale& scale) const {
  if (entries_.size() != scale.d) {
    throw ModelError("rating vector has length " + std::to_string(entries_.size()) + ", expected " +
                     std::to_string(scale.d));
  }
  for (std::size_t j = 0; j < entries_.size(); ++j) {
    const double x = entries_[j];
    if (x != 0.0 && !(x >= 1.0 && x <= scale.s)) {
      throw ModelError("rating vector entry " + std::to_string(j + 1) + " is neither 0 nor in [1, s]");
    }
  }
}

UserTrajectory::UserTrajectory(std::vector<double> full_ratings, double target, std::vector<MaskSet> masks)
    : full_ratings_(std::move(full_ratings)), target_(target), masks_(std::move(masks)) {
  const std::size_t d = full_ratings_.size();
  if (d == 0) throw ModelError("user trajectory: empty rating vector");
  if (masks_.empty()) throw ModelError("user trajectory: no masks");
  if (masks_.front().empty()) throw ModelError("user trajectory: first mask is empty");
  for (std::size_t j = 0; j < masks_.size(); ++j) {
    if (masks_[j].dimension() != d) throw ModelError("user trajectory: mask dimension mismatch");
    if (j > 0 && !masks_[j - 1].subset_of(masks_[j])) {
      throw ModelError("user trajectory: masks are not nested at step " + std::to_string(j + 1));
    }
    if (j + 1 < masks_.size() && masks_[j].is_full()) {
      throw ModelError("user trajectory: masks continue past saturation");
    }
  }
  if (!masks_.back().is_full()) throw ModelError("user trajectory: mask sequence never saturates");
  full_ = masks_.back();
}

const MaskSet& UserTrajectory::mask_at(std::size_t j) const {
  if (j == 0) throw std::out_of_range("mask time steps start at 1");
  return j <= masks_.size() ? masks_[j - 1] : full_;
}

RatingVector mask_vector(std::span<const double> full, const MaskSet& user_mask,
                         const MaskSet& new_user_mask) {
  std::vector<double> out(full.size(), 0.0);
  for (std::size_t j = 0; j < full.size(); ++j) {
    if (user_mask.contains(j) && new_user_mask.contains(j)) out[j] = full[j];
  }
  return RatingVector(std::move(out));
}

RatingVector masked_new_user(std::span<const double> full, const MaskSet& new_user_mask) {
  if (new_user_mask.empty()) throw ModelError("new user mask must be non-empty");
  std::vector<double> out(full.size(), 0.0);
  for (std::size_t j = 0; j < full.size(); ++j) {
    if (new_user_mask.contains(j)) out[j] = full[j];
  }
  return RatingVector(std::move(out));
}

double DatabaseSnapshot::target(std::size_t i) const {
  if (i >= n_ || !revealed_[i]) throw std::out_of_range("target requested for an unrevealed user");
  return targets_[i];
}

void DatabaseSnapshot::add_row(std::span<const double> full, const MaskSet& user_mask) {
  const std::size_t d = scale_.d;
  double acc = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double v = (user_mask.contains(j) && new_user_mask_.contains(j)) ? full[j] : 0.0;
    rows_.push_back(v);
    acc += v * v;
  }
  row_norms_.push_back(std::sqrt(acc));
  const auto overlap = user_mask.intersection_size(new_user_mask_);
  overlaps_.push_back(overlap);
  penalties_.push_back(static_cast<double>(overlap) / static_cast<double>(new_user_mask_.size()));
  row_masks_.push_back(user_mask);
}

void DatabaseSnapshot::finish(const NewUser& new_user) {
  if (reveal_set_.empty()) throw ModelError("snapshot: reveal set is empty");
  for (std::size_t k = 0; k < reveal_set_.size(); ++k) {
    if (reveal_set_[k] >= n_) throw ModelError("snapshot: reveal set index out of range");
    if (k > 0 && reveal_set_[k] <= reveal_set_[k - 1]) {
      throw ModelError("snapshot: reveal set must be strictly ascending");
    }
  }
  new_user_vector_ = masked_new_user(new_user.full_ratings, new_user_mask_);
  if (new_user_vector_.norm() < 1.0) throw ModelError("snapshot: new user vector has norm < 1");
}

DatabaseSnapshot build_snapshot(const std::vector<UserTrajectory>& users,
                                const std::vector<std::size_t>& reveal_set, const NewUser& new_user,
                                std::size_t n, const RatingScale& scale) {
  scale.validate();
  if (users.size() != n) {
    throw ModelError("snapshot: " + std::to_string(users.size()) + " users supplied for time n = " +
                     std::to_string(n));
  }
  if (new_user.mask.dimension() != scale.d) throw ModelError("snapshot: new user mask dimension mismatch");
  if (new_user.mask.empty()) throw ModelError("new user mask must be non-empty");
  check_full_ratings(new_user.full_ratings, scale, "new user");

  DatabaseSnapshot snap;
  snap.n_ = n;
  snap.scale_ = scale;
  snap.new_user_mask_ = new_user.mask;
  snap.rows_.reserve(n * scale.d);
  snap.row_norms_.reserve(n);
  snap.penalties_.reserve(n);
  snap.row_masks_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    // 0-based user i entered at time i+1, so at time n it has spent n-i steps.
    snap.add_row(users[i].full_ratings(), users[i].mask_at(n - i));
  }
  snap.reveal_set_ = reveal_set;
  snap.revealed_.assign(n, 0);
  snap.targets_.assign(n, std::numeric_limits<double>::quiet_NaN());
  for (auto i : reveal_set) {
    if (i < n) {
      snap.revealed_[i] = 1;
      snap.targets_[i] = users[i].target();
    }
  }
  snap.finish(new_user);
  return snap;
}

DatabaseSnapshot snapshot_from_observed(const RatingScale& scale, const std::vector<ObservedRow>& rows,
                                        const NewUser& new_user) {
  scale.validate();
  if (new_user.mask.dimension() != scale.d) throw ModelError("snapshot: new user mask dimension mismatch");
  if (new_user.mask.empty()) throw ModelError("new user mask must be non-empty");
  RatingVector(masked_new_user(new_user.full_ratings, new_user.mask)).validate(scale);

  DatabaseSnapshot snap;
  snap.n_ = rows.size();
  snap.scale_ = scale;
  snap.new_user_mask_ = new_user.mask;
  snap.revealed_.assign(rows.size(), 0);
  snap.targets_.assign(rows.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.rated.dimension() != scale.d) throw ModelError("snapshot: row mask dimension mismatch");
    RatingVector(r.values).validate(scale);
    for (std::size_t j = 0; j < scale.d; ++j) {
      if ((r.values[j] != 0.0) != r.rated.contains(j)) {
        throw ModelError("snapshot: row " + std::to_string(i + 1) + " values disagree with its rated set");
      }
    }
    snap.add_row(r.values, r.rated);
    if (r.revealed) {
      if (!(r.target > 0.0) || !std::isfinite(r.target)) {
        throw ModelError("snapshot: row " + std::to_string(i + 1) + " has a non-positive target");
      }
      snap.reveal_set_.push_back(i);
      snap.revealed_[i] = 1;
      snap.targets_[i] = r.target;
    }
  }
  snap.finish(new_user);
  return snap;
}

}  // namespace cosknn
