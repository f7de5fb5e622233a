#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cosknn/mask_set.hpp"

namespace cosknn {

/// Raised when a domain object would violate one of its invariants.
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Rating scale: d predictor items, ratings in [1, s].
struct RatingScale {
  std::size_t d = 1;
  double s = 1.0;

  void validate() const;
  bool operator==(const RatingScale&) const = default;
};

/// Length-d vector over {0} u [1, s]. A literal 0.0 means "not rated".
class RatingVector {
 public:
  RatingVector() = default;
  explicit RatingVector(std::vector<double> entries) : entries_(std::move(entries)) {}

  std::span<const double> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  double operator[](std::size_t j) const { return entries_[j]; }

  double norm() const;
  bool is_zero() const;

  /// Throws ModelError unless every entry is 0 or lies in [1, s].
  void validate(const RatingScale& scale) const;

  bool operator==(const RatingVector&) const = default;

 private:
  std::vector<double> entries_;
};

/// A database user's latent ratings and nested mask sequence.
///
/// masks()[j-1] is the set of rated items j time steps after entry. The
/// sequence is materialized up to the saturation time n0 (the first j
/// where the mask is full) and is implicitly full afterwards.
class UserTrajectory {
 public:
  UserTrajectory(std::vector<double> full_ratings, double target, std::vector<MaskSet> masks);

  std::span<const double> full_ratings() const { return full_ratings_; }
  double target() const { return target_; }
  const std::vector<MaskSet>& masks() const { return masks_; }
  std::size_t saturation_time() const { return masks_.size(); }

  /// Mask after j >= 1 steps in the database.
  const MaskSet& mask_at(std::size_t j) const;

 private:
  std::vector<double> full_ratings_;
  double target_;
  std::vector<MaskSet> masks_;
  MaskSet full_;
};

/// The query user: latent ratings plus the revealed item set M.
struct NewUser {
  std::vector<double> full_ratings;
  MaskSet mask;
};

/// Ratings of `full` kept on user_mask n new_user_mask, zero elsewhere.
RatingVector mask_vector(std::span<const double> full, const MaskSet& user_mask,
                         const MaskSet& new_user_mask);

/// Ratings of `full` kept on new_user_mask. Rejects an empty mask.
RatingVector masked_new_user(std::span<const double> full, const MaskSet& new_user_mask);

/// One observed database row before masking against the new user.
struct ObservedRow {
  std::vector<double> values;  // zero outside `rated`
  MaskSet rated;
  bool revealed = false;
  double target = 0.0;
};

/// Observable state at time n.
///
/// Row i (0-based user index) is the user's rating vector restricted to the
/// items both they and the new user have rated. Immutable once built.
class DatabaseSnapshot {
 public:
  std::size_t n() const { return n_; }
  std::size_t d() const { return scale_.d; }
  const RatingScale& scale() const { return scale_; }

  std::span<const double> row(std::size_t i) const { return {rows_.data() + i * scale_.d, scale_.d}; }
  std::span<const double> rows() const { return rows_; }
  double row_norm(std::size_t i) const { return row_norms_[i]; }
  /// The user's own rated-item set at time n (before intersecting with M).
  const MaskSet& row_mask(std::size_t i) const { return row_masks_[i]; }
  double penalty(std::size_t i) const { return penalties_[i]; }
  /// |row_mask(i) n M|, the numerator of penalty(i).
  std::size_t overlap(std::size_t i) const { return overlaps_[i]; }
  std::span<const double> penalties() const { return penalties_; }

  /// Revealed users, ascending 0-based indices.
  std::span<const std::size_t> reveal_set() const { return reveal_set_; }
  bool is_revealed(std::size_t i) const { return revealed_[i] != 0; }
  /// Target of a revealed user. Throws for unrevealed users.
  double target(std::size_t i) const;

  const RatingVector& new_user_vector() const { return new_user_vector_; }
  const MaskSet& new_user_mask() const { return new_user_mask_; }

  friend DatabaseSnapshot build_snapshot(const std::vector<UserTrajectory>& users,
                                         const std::vector<std::size_t>& reveal_set,
                                         const NewUser& new_user, std::size_t n,
                                         const RatingScale& scale);
  friend DatabaseSnapshot snapshot_from_observed(const RatingScale& scale,
                                                 const std::vector<ObservedRow>& rows,
                                                 const NewUser& new_user);

 private:
  DatabaseSnapshot() = default;
  void add_row(std::span<const double> full, const MaskSet& user_mask);
  void finish(const NewUser& new_user);

  std::size_t n_ = 0;
  RatingScale scale_;
  std::vector<double> rows_;
  std::vector<double> row_norms_;
  std::vector<MaskSet> row_masks_;
  std::vector<double> penalties_;
  std::vector<std::size_t> overlaps_;
  std::vector<std::size_t> reveal_set_;
  std::vector<char> revealed_;
  std::vector<double> targets_;
  RatingVector new_user_vector_;
  MaskSet new_user_mask_;
};

/// Assembles the time-n view: user i (0-based) contributes its mask after
/// n - i steps, i.e. the n+1-i-th mask in 1-based time.
///
/// `reveal_set` holds 0-based user indices; it must be non-empty and lie in
/// [0, n). `users.size()` must equal n.
DatabaseSnapshot build_snapshot(const std::vector<UserTrajectory>& users,
                                const std::vector<std::size_t>& reveal_set,
                                const NewUser& new_user, std::size_t n, const RatingScale& scale);

/// Builds a snapshot directly from observed rows (fixture files).
DatabaseSnapshot snapshot_from_observed(const RatingScale& scale, const std::vector<ObservedRow>& rows,
                                        const NewUser& new_user);

}  // namespace cosknn
