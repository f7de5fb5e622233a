#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "cosknn/scenario.hpp"

namespace cosknn::theory {

__extension__ using uint128 = unsigned __int128;

/// True regression function of the mean-rating model with a full new-user
/// mask: (1/d) sum_j x_j, which is |x| phi(x/|x|) with phi(z) = mean(z).
/// Throws std::invalid_argument for the zero vector.
double eta_true(std::span<const double> x, const ScenarioConfig& cfg);

/// Exact binomial coefficient C(n, k); 0 when k > n. Supports n <= 120.
uint128 binomial(unsigned n, unsigned k);

/// P(M^j does not contain M) for a uniform |M|-subset M and a mask M^j
/// that is a uniform |M^j|-subset of d items:
/// 1 - C(d - |M|, |M^j| - |M|) / C(d, |M^j|).
double alpha_hypergeometric(std::size_t d, std::size_t mask_size, std::size_t new_user_mask_size);

/// alpha_ni for the incremental (start size 4) mask process and |M| = 4:
/// 0 if i <= n - d + 4, else 1 - C(d-4, n-i) / C(d, n+4-i).
/// 1 <= i <= n, d >= 4; throws std::invalid_argument otherwise.
double alpha_example2(std::size_t n, std::size_t i, std::size_t d);

/// (d - 4)(1 - 24 / (d(d-1)(d-2)(d-3))). Requires d >= 5.
double alpha_sum_bound(std::size_t d);

/// alpha_ni for i = 1..n at a fixed time n.
struct AlphaTable {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> values;  // values[i-1] = alpha_ni
};

/// Closed-form alpha table for the scenario's mask process and a new-user
/// mask of the given size. Throws for custom_nested, which has no closed form.
AlphaTable alpha_table(const ScenarioConfig& cfg, std::size_t n, std::size_t new_user_mask_size);

/// Per-realization terms of the rate bound.
struct BoundBreakdown {
  double term_alpha_sum = 0.0;   // (k / |R_n|) sum_{i in R_n} alpha_ni
  double term_alpha_prod = 0.0;  // prod_{i in R_n} alpha_ni
  double term_bias = 0.0;        // (k / |R_n|)^{P_n}
  double term_variance = 0.0;    // 1 / sqrt(k)
  double p_exponent = 1.0;       // 1/(|M|-1) if k <= |R_n|, else 1

  double total() const { return term_alpha_sum + term_alpha_prod + term_bias + term_variance; }
};

/// `reveal_set` holds 0-based user indices into `alpha`. Requires |M| >= 2.
BoundBreakdown bound_breakdown(const AlphaTable& alpha, std::span<const std::size_t> reveal_set,
                               std::size_t new_user_mask_size, std::size_t k);

/// Rule n -> k_n, always clamped to [1, n].
///   ex1_rate:    round(n^{2/(d+1)})
///   ex2_rate:    round(n^{2/5})
///   constant(c): c
///   power(a):    round(n^a), 0 < a <= 1
class KSchedule {
 public:
  KSchedule(KScheduleSpec spec, std::size_t d);

  std::size_t operator()(std::size_t n) const;
  std::map<std::size_t, std::size_t> to_map(std::span<const std::size_t> n_values) const;
  const KScheduleSpec& spec() const { return spec_; }

 private:
  KScheduleSpec spec_;
  std::size_t d_;
};

}  // namespace cosknn::theory
