#include "cosknn/kernels.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace cosknn::kernels {

namespace {
void check_sizes(const DatabaseSnapshot& snap, std::span<const double> query,
                 std::span<const std::size_t> candidates, std::span<double> scores) {
  if (query.size() != snap.d()) throw std::invalid_argument("query length does not match d");
  if (candidates.size() != scores.size()) throw std::invalid_argument("score buffer size mismatch");
}
}  // namespace

void score_rows_serial(const DatabaseSnapshot& snap, std::span<const double> query, Psi psi,
                       std::span<const std::size_t> candidates, std::span<double> scores) {
  check_sizes(snap, query, candidates, scores);
  const auto mask_size = snap.new_user_mask().size();
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const auto i = candidates[c];
    scores[c] = penalized_similarity(query, snap.row(i), snap.overlap(i), mask_size, psi);
  }
}

void score_rows_parallel(const DatabaseSnapshot& snap, std::span<const double> query, Psi psi,
                         std::span<const std::size_t> candidates, std::span<double> scores) {
  check_sizes(snap, query, candidates, scores);
  const auto mask_size = snap.new_user_mask().size();
  const auto count = static_cast<long long>(candidates.size());
#pragma omp parallel for schedule(static)
  for (long long c = 0; c < count; ++c) {
    const auto i = candidates[static_cast<std::size_t>(c)];
    scores[static_cast<std::size_t>(c)] = penalized_similarity(query, snap.row(i), snap.overlap(i), mask_size, psi);
  }
}

std::vector<std::size_t> eligible_rows_serial(const DatabaseSnapshot& snap) {
  std::vector<std::size_t> out;
  out.reserve(snap.reveal_set().size());
  for (auto i : snap.reveal_set()) {
    if (snap.row_norm(i) > 0.0) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> top_k(std::span<const std::size_t> candidates, std::span<const double> scores,
                               std::size_t k) {
  if (candidates.size() != scores.size()) throw std::invalid_argument("top_k: size mismatch");
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto keep = std::min(k, order.size());
  auto better = [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return candidates[a] < candidates[b];
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(), better);
  std::vector<std::size_t> out(keep);
  for (std::size_t r = 0; r < keep; ++r) out[r] = candidates[order[r]];
  return out;
}

}  // namespace cosknn::kernels
