#include "cosknn/estimator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <omp.h>

#include "cosknn/kernels.hpp"

namespace cosknn {

std::string_view to_string(Degenerate reason) {
  switch (reason) {
    case Degenerate::none:
      return "none";
    case Degenerate::reveal_set_smaller_than_k:
      return "reveal_set_smaller_than_k";
    case Degenerate::all_rows_zero:
      return "all_rows_zero";
  }
  return "none";
}

double EstimateResult::weight_sum() const {
  if (neighbors.k == 0) return 0.0;
  return static_cast<double>(neighbors.indices.size()) / static_cast<double>(neighbors.k);
}

namespace {

bool use_parallel(ScanMode mode, std::size_t candidates) {
  switch (mode) {
    case ScanMode::serial:
      return false;
    case ScanMode::parallel:
      return true;
    case ScanMode::automatic:
      return candidates >= kernels::kParallelScanThreshold && !omp_in_parallel();
  }
  return false;
}

}  // namespace

NeighborSelection select_neighbors(const DatabaseSnapshot& snap, std::size_t k, Psi psi) {
  return select_neighbors(snap, snap.new_user_vector().entries(), k, EstimateOptions{.psi = psi});
}

NeighborSelection select_neighbors(const DatabaseSnapshot& snap, std::span<const double> query,
                                   std::size_t k, const EstimateOptions& options) {
  if (k < 1) throw std::invalid_argument("neighbor count k must be >= 1");
  NeighborSelection sel;
  sel.k = k;
  if (snap.reveal_set().size() < k) return sel;

  const auto candidates = kernels::eligible_rows_serial(snap);
  std::vector<double> scores(candidates.size());
  if (use_parallel(options.scan, candidates.size())) {
    kernels::score_rows_parallel(snap, query, options.psi, candidates, scores);
  } else {
    kernels::score_rows_serial(snap, query, options.psi, candidates, scores);
  }
  sel.indices = kernels::top_k(candidates, scores, k);
  return sel;
}

EstimateResult estimate(const DatabaseSnapshot& snap, std::size_t k, Psi psi) {
  return estimate(snap, snap.new_user_vector().entries(), k, EstimateOptions{.psi = psi});
}

EstimateResult estimate(const DatabaseSnapshot& snap, std::span<const double> query, std::size_t k,
                        const EstimateOptions& options) {
  EstimateResult result;
  result.neighbors = select_neighbors(snap, query, k, options);
  if (snap.reveal_set().size() < k) {
    result.degenerate_reason = Degenerate::reveal_set_smaller_than_k;
    return result;
  }
  if (result.neighbors.indices.empty()) {
    result.degenerate_reason = Degenerate::all_rows_zero;
    return result;
  }

  double query_sq = 0.0;
  for (double x : query) query_sq += x * x;
  const double query_norm = std::sqrt(query_sq);

  double acc = 0.0;
  for (auto i : result.neighbors.indices) {
    double term = snap.target(i) / snap.row_norm(i);
    if (options.cosine_corrected) term /= sbar(query, snap.row(i));
    acc += term;
  }
  result.value = query_norm * acc / static_cast<double>(k);
  return result;
}

std::vector<EstimateResult> estimate_curve(std::span<const DatabaseSnapshot> stream,
                                           const std::map<std::size_t, std::size_t>& k_by_n, Psi psi) {
  std::vector<EstimateResult> out;
  out.reserve(stream.size());
  for (const auto& snap : stream) {
    const auto it = k_by_n.find(snap.n());
    if (it == k_by_n.end()) {
      throw std::out_of_range("k schedule has no entry for n = " + std::to_string(snap.n()));
    }
    out.push_back(estimate(snap, it->second, psi));
  }
  return out;
}

}  // namespace cosknn
