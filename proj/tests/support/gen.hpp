#pragma once

// Hand-rolled random generators for property tests.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "cosknn/core_model.hpp"

namespace cosknn::testgen {

using Engine = std::mt19937_64;

inline std::size_t uniform_int(Engine& g, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(g);
}

inline double uniform_real(Engine& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline bool coin(Engine& g, double p = 0.5) { return uniform_real(g, 0.0, 1.0) < p; }

enum class Flavor { continuous, tie_heavy, sparse };

inline double draw_rating(Engine& g, Flavor flavor, double s) {
  if (flavor == Flavor::tie_heavy) return static_cast<double>(uniform_int(g, 1, 2));
  if (flavor == Flavor::sparse) return static_cast<double>(uniform_int(g, 1, static_cast<std::size_t>(s)));
  return uniform_real(g, 1.0, s);
}

/// Non-empty random subset of {0..d-1}, each item kept with probability p.
inline MaskSet random_mask(Engine& g, std::size_t d, double p, bool allow_empty = false) {
  MaskSet m(d);
  for (std::size_t j = 0; j < d; ++j) {
    if (coin(g, p)) m.insert(j);
  }
  if (!allow_empty && m.empty()) m.insert(uniform_int(g, 0, d - 1));
  return m;
}

struct SnapshotCase {
  RatingScale scale;
  std::vector<ObservedRow> rows;
  NewUser new_user;
  std::size_t k = 1;
  Flavor flavor = Flavor::continuous;

  DatabaseSnapshot build() const { return snapshot_from_observed(scale, rows, new_user); }
};

/// Snapshot with n <= max_n users and d <= max_d items. Tie-heavy cases use
/// ratings in {1, 2} and copy earlier rows; sparse cases leave many rows
/// without any item in common with the new user. k mostly stays within |R_n|
/// but sometimes exceeds it so degenerate cases occur.
inline SnapshotCase random_snapshot_case(Engine& g, std::size_t max_n = 20, std::size_t max_d = 8) {
  SnapshotCase c;
  c.flavor = static_cast<Flavor>(uniform_int(g, 0, 2));
  c.scale = RatingScale{uniform_int(g, 1, max_d), 10.0};
  const std::size_t d = c.scale.d;
  const std::size_t n = uniform_int(g, 1, max_n);
  const double mask_p = c.flavor == Flavor::sparse ? 0.25 : 0.7;

  std::vector<double> xs(d, 0.0);
  for (auto& v : xs) v = draw_rating(g, c.flavor, c.scale.s);
  c.new_user = NewUser{xs, random_mask(g, d, mask_p)};

  bool any_revealed = false;
  for (std::size_t i = 0; i < n; ++i) {
    ObservedRow row;
    if (c.flavor == Flavor::tie_heavy && i > 0 && coin(g, 0.4)) {
      row = c.rows[uniform_int(g, 0, i - 1)];
    } else {
      row.rated = random_mask(g, d, mask_p, true);
      row.values.assign(d, 0.0);
      for (auto j : row.rated.items()) row.values[j] = draw_rating(g, c.flavor, c.scale.s);
      row.target = draw_rating(g, Flavor::continuous, c.scale.s);
    }
    row.revealed = coin(g, 0.6);
    any_revealed = any_revealed || row.revealed;
    c.rows.push_back(std::move(row));
  }
  if (!any_revealed) c.rows[uniform_int(g, 0, n - 1)].revealed = true;
  const auto revealed = static_cast<std::size_t>(
      std::count_if(c.rows.begin(), c.rows.end(), [](const ObservedRow& r) { return r.revealed; }));
  c.k = coin(g, 0.8) ? uniform_int(g, 1, revealed) : uniform_int(g, 1, n + 2);
  return c;
}

}  // namespace cosknn::testgen
