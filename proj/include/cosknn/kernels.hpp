#pragma once

// Neighbor-scoring kernels. The serial versions are the reference the
// OpenMP versions are tested and benchmarked against; both must produce
// bit-identical scores.

#include <cstddef>
#include <span>
#include <vector>

#include "cosknn/core_model.hpp"
#include "cosknn/similarity.hpp"

namespace cosknn::kernels {

/// Candidate count above which the automatic mode switches to the OpenMP scan.
inline constexpr std::size_t kParallelScanThreshold = 4096;

/// scores[c] = psi(p_i) * sbar(query, row_i) for i = candidates[c], in the
/// single-ratio form of penalized_similarity.
void score_rows_serial(const DatabaseSnapshot& snap, std::span<const double> query, Psi psi,
                       std::span<const std::size_t> candidates, std::span<double> scores);

void score_rows_parallel(const DatabaseSnapshot& snap, std::span<const double> query, Psi psi,
                         std::span<const std::size_t> candidates, std::span<double> scores);

/// Revealed rows with a nonzero masked vector, ascending.
std::vector<std::size_t> eligible_rows_serial(const DatabaseSnapshot& snap);

/// The k best candidates ordered by decreasing score, ties by ascending index.
/// Returns min(k, candidates.size()) indices.
std::vector<std::size_t> top_k(std::span<const std::size_t> candidates, std::span<const double> scores,
                               std::size_t k);

}  // namespace cosknn::kernels
