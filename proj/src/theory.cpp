#include "cosknn/theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cosknn::theory {

double eta_true(std::span<const double> x, const ScenarioConfig& cfg) {
  if (x.size() != cfg.d) throw std::invalid_argument("eta_true: vector length does not match d");
  double sum = 0.0;
  bool nonzero = false;
  for (double v : x) {
    sum += v;
    nonzero = nonzero || v != 0.0;
  }
  if (!nonzero) throw std::invalid_argument("eta_true: zero vector");
  return sum / static_cast<double>(cfg.d);
}

uint128 binomial(unsigned n, unsigned k) {
  if (n > 120) throw std::invalid_argument("binomial: n > 120 not supported");
  if (k > n) return 0;
  k = std::min(k, n - k);
  uint128 result = 1;
  // result * (n - k + j) / j stays integral at every step; the product
  // fits because C(120, 60) * 120 < 2^128.
  for (unsigned j = 1; j <= k; ++j) result = result * (n - k + j) / j;
  return result;
}

namespace {

double one_minus_ratio(uint128 num, uint128 den) {
  // 1 - num/den evaluated as (den - num)/den to keep small alphas exact.
  return static_cast<double>(static_cast<long double>(den - num) / static_cast<long double>(den));
}

}  // namespace

double alpha_hypergeometric(std::size_t d, std::size_t mask_size, std::size_t new_user_mask_size) {
  if (new_user_mask_size < 1 || new_user_mask_size > d || mask_size > d) {
    throw std::invalid_argument("alpha_hypergeometric: sizes out of range");
  }
  if (mask_size < new_user_mask_size) return 1.0;
  const auto contained = binomial(static_cast<unsigned>(d - new_user_mask_size),
                                  static_cast<unsigned>(mask_size - new_user_mask_size));
  const auto total = binomial(static_cast<unsigned>(d), static_cast<unsigned>(mask_size));
  return one_minus_ratio(contained, total);
}

double alpha_example2(std::size_t n, std::size_t i, std::size_t d) {
  if (d < 4) throw std::invalid_argument("alpha_example2: d must be >= 4");
  if (i < 1 || i > n) throw std::invalid_argument("alpha_example2: need 1 <= i <= n");
  if (i + d <= n + 4) return 0.0;  // i <= n - d + 4
  const auto rated_steps = n - i;  // 0 <= n - i < d - 4
  const auto num = binomial(static_cast<unsigned>(d - 4), static_cast<unsigned>(rated_steps));
  const auto den = binomial(static_cast<unsigned>(d), static_cast<unsigned>(rated_steps + 4));
  return one_minus_ratio(num, den);
}

double alpha_sum_bound(std::size_t d) {
  if (d < 5) throw std::invalid_argument("alpha_sum_bound: d must be >= 5");
  const double dd = static_cast<double>(d);
  return (dd - 4.0) * (1.0 - 24.0 / (dd * (dd - 1.0) * (dd - 2.0) * (dd - 3.0)));
}

AlphaTable alpha_table(const ScenarioConfig& cfg, std::size_t n, std::size_t new_user_mask_size) {
  AlphaTable table{n, cfg.d, std::vector<double>(n, 0.0)};
  switch (cfg.mask_process) {
    case MaskProcess::full_at_entry:
      return table;
    case MaskProcess::example2_incremental:
      for (std::size_t i = 1; i <= n; ++i) {
        // |M^j| = min(d, j + start - 1) with j = n + 1 - i.
        const auto mask_size = std::min(cfg.d, n - i + cfg.mask_start_size);
        table.values[i - 1] = alpha_hypergeometric(cfg.d, mask_size, new_user_mask_size);
      }
      return table;
    case MaskProcess::custom_nested:
      break;
  }
  throw std::invalid_argument("alpha_table: no closed form for the custom_nested mask process");
}

BoundBreakdown bound_breakdown(const AlphaTable& alpha, std::span<const std::size_t> reveal_set,
                               std::size_t new_user_mask_size, std::size_t k) {
  if (new_user_mask_size < 2) throw std::invalid_argument("bound_breakdown: |M| must be >= 2");
  if (k < 1) throw std::invalid_argument("bound_breakdown: k must be >= 1");
  if (reveal_set.empty()) throw std::invalid_argument("bound_breakdown: empty reveal set");
  BoundBreakdown b;
  double sum = 0.0;
  double prod = 1.0;
  for (auto i : reveal_set) {
    sum += alpha.values.at(i);
    prod *= alpha.values.at(i);
  }
  const double r = static_cast<double>(reveal_set.size());
  const double ratio = static_cast<double>(k) / r;
  b.term_alpha_sum = ratio * sum;
  b.term_alpha_prod = prod;
  b.p_exponent = k <= reveal_set.size() ? 1.0 / static_cast<double>(new_user_mask_size - 1) : 1.0;
  b.term_bias = std::pow(ratio, b.p_exponent);
  b.term_variance = 1.0 / std::sqrt(static_cast<double>(k));
  return b;
}

KSchedule::KSchedule(KScheduleSpec spec, std::size_t d) : spec_(spec), d_(d) {
  switch (spec_.kind) {
    case ScheduleKind::ex1_rate:
      if (d_ < 2) throw ConfigError("schedule.name", "ex1_rate needs d >= 2");
      break;
    case ScheduleKind::ex2_rate:
      break;
    case ScheduleKind::constant:
      if (!(spec_.value >= 1.0) || spec_.value != std::floor(spec_.value)) {
        throw ConfigError("schedule.value", "constant schedule needs an integer k >= 1");
      }
      break;
    case ScheduleKind::power:
      if (!(spec_.value > 0.0 && spec_.value <= 1.0)) {
        throw ConfigError("schedule.value", "power exponent must lie in (0, 1]");
      }
      break;
  }
}

std::size_t KSchedule::operator()(std::size_t n) const {
  if (n < 1) throw std::invalid_argument("k schedule evaluated at n = 0");
  const double nn = static_cast<double>(n);
  double raw = 1.0;
  switch (spec_.kind) {
    case ScheduleKind::ex1_rate:
      raw = std::round(std::pow(nn, 2.0 / static_cast<double>(d_ + 1)));
      break;
    case ScheduleKind::ex2_rate:
      raw = std::round(std::pow(nn, 0.4));
      break;
    case ScheduleKind::constant:
      raw = spec_.value;
      break;
    case ScheduleKind::power:
      raw = std::round(std::pow(nn, spec_.value));
      break;
  }
  return std::clamp(static_cast<std::size_t>(std::max(raw, 1.0)), std::size_t{1}, n);
}

std::map<std::size_t, std::size_t> KSchedule::to_map(std::span<const std::size_t> n_values) const {
  std::map<std::size_t, std::size_t> out;
  for (auto n : n_values) out[n] = (*this)(n);
  return out;
}

}  // namespace cosknn::theory
