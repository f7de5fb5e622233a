#include "cosknn/reference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace cosknn::reference {

namespace {

struct Scored {
  std::size_t index;
  long double score;
};

long double textbook_similarity(std::span<const double> x, std::span<const double> y) {
  long double num = 0.0L;
  long double xx = 0.0L;
  long double yy = 0.0L;
  std::size_t corated = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] == 0.0 || y[j] == 0.0) continue;
    ++corated;
    num += static_cast<long double>(x[j]) * y[j];
    xx += static_cast<long double>(x[j]) * x[j];
    yy += static_cast<long double>(y[j]) * y[j];
  }
  if (corated == 0) return 0.0L;
  return num / (std::sqrt(xx) * std::sqrt(yy));
}

}  // namespace

EstimateResult brute_force_estimate(const DatabaseSnapshot& snap, std::size_t k, Psi psi) {
  return brute_force_estimate(snap, snap.new_user_vector().entries(), k, psi);
}

EstimateResult brute_force_estimate(const DatabaseSnapshot& snap, std::span<const double> query, std::size_t k,
                                    Psi psi) {
  if (k < 1) throw std::invalid_argument("neighbor count k must be >= 1");
  EstimateResult result;
  result.neighbors.k = k;

  std::size_t revealed = 0;
  for (std::size_t i = 0; i < snap.n(); ++i) revealed += snap.is_revealed(i) ? 1 : 0;
  if (revealed < k) {
    result.degenerate_reason = Degenerate::reveal_set_smaller_than_k;
    return result;
  }

  const auto& m = snap.new_user_mask();
  std::vector<Scored> all;
  for (std::size_t i = 0; i < snap.n(); ++i) {
    if (!snap.is_revealed(i)) continue;
    const auto row = snap.row(i);
    const bool zero = std::all_of(row.begin(), row.end(), [](double v) { return v == 0.0; });
    if (zero) continue;
    const long double p = static_cast<long double>(snap.row_mask(i).intersect(m).size()) /
                          static_cast<long double>(m.size());
    const long double weight = psi == Psi::identity ? p : std::sqrt(p);
    all.push_back({i, weight * textbook_similarity(query, row)});
  }
  if (all.empty()) {
    result.degenerate_reason = Degenerate::all_rows_zero;
    return result;
  }

  std::sort(all.begin(), all.end(), [](const Scored& a, const Scored& b) { return a.score > b.score; });
  // Group near-equal scores into tie blocks, then order each block by index.
  for (std::size_t start = 0; start < all.size();) {
    std::size_t end = start + 1;
    while (end < all.size() && all[start].score - all[end].score <= 1e-12L * all[start].score) ++end;
    std::sort(all.begin() + static_cast<std::ptrdiff_t>(start), all.begin() + static_cast<std::ptrdiff_t>(end),
              [](const Scored& a, const Scored& b) { return a.index < b.index; });
    start = end;
  }

  const auto take = std::min(k, all.size());
  long double query_sq = 0.0L;
  for (double x : query) query_sq += static_cast<long double>(x) * x;
  long double sum = 0.0L;
  for (std::size_t r = 0; r < take; ++r) {
    const auto i = all[r].index;
    long double row_sq = 0.0L;
    for (double v : snap.row(i)) row_sq += static_cast<long double>(v) * v;
    sum += static_cast<long double>(snap.target(i)) / std::sqrt(row_sq);
    result.neighbors.indices.push_back(i);
  }
  result.value = static_cast<double>(std::sqrt(query_sq) * sum / static_cast<long double>(k));
  return result;
}

}  // namespace cosknn::reference
