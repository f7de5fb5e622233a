#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "cosknn/core_model.hpp"
#include "cosknn/similarity.hpp"

namespace cosknn {

/// Selected neighbors, best first. Ties in penalized similarity go to the
/// smaller user index.
struct NeighborSelection {
  std::vector<std::size_t> indices;
  std::size_t k = 0;

  bool operator==(const NeighborSelection&) const = default;
};

enum class Degenerate { none, reveal_set_smaller_than_k, all_rows_zero };
std::string_view to_string(Degenerate reason);

struct EstimateResult {
  double value = 0.0;
  NeighborSelection neighbors;
  Degenerate degenerate_reason = Degenerate::none;

  /// Sum of the 1/k weights actually assigned; at most 1.
  double weight_sum() const;
};

enum class ScanMode { automatic, serial, parallel };

struct EstimateOptions {
  Psi psi = Psi::identity;
  /// Divide each neighbor's contribution by its cosine to the query.
  /// Diagnostic only; off for the standard estimate.
  bool cosine_corrected = false;
  ScanMode scan = ScanMode::automatic;
};

/// The k most similar revealed rows with a nonzero masked vector. Empty when
/// fewer than k users are revealed. Throws std::invalid_argument for k < 1.
NeighborSelection select_neighbors(const DatabaseSnapshot& snap, std::size_t k, Psi psi);
NeighborSelection select_neighbors(const DatabaseSnapshot& snap, std::span<const double> query,
                                   std::size_t k, const EstimateOptions& options = {});

/// Cosine-type k-NN estimate |x*| (1/k) sum_{selected} Y_i / |X_i^(n)|.
///
/// Returns 0 with a degenerate tag when fewer than k users are revealed or
/// when every revealed row is zero. When only m < k rows are eligible the
/// sum still divides by k.
EstimateResult estimate(const DatabaseSnapshot& snap, std::size_t k, Psi psi);

/// Same estimate for an arbitrary query vector in place of the snapshot's
/// new user (used for the homogeneity checks).
EstimateResult estimate(const DatabaseSnapshot& snap, std::span<const double> query, std::size_t k,
                        const EstimateOptions& options = {});

/// Applies `estimate` to each snapshot with k taken from `k_by_n` at the
/// snapshot's n. Throws std::out_of_range when the schedule has no entry.
std::vector<EstimateResult> estimate_curve(std::span<const DatabaseSnapshot> stream,
                                           const std::map<std::size_t, std::size_t>& k_by_n, Psi psi);

}  // namespace cosknn
