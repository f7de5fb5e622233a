#pragma once

// Independent oracles used only by tests. None of these call into the
// library's numeric code.

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace cosknn::oracle {

/// Cosine over corated items, written out from the definition.
inline long double sbar(std::span<const double> x, std::span<const double> y) {
  std::vector<std::size_t> corated;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] != 0.0 && y[j] != 0.0) corated.push_back(j);
  }
  if (corated.empty()) return 0.0L;
  long double num = 0, a = 0, b = 0;
  for (auto j : corated) {
    num += static_cast<long double>(x[j]) * y[j];
    a += static_cast<long double>(x[j]) * x[j];
    b += static_cast<long double>(y[j]) * y[j];
  }
  return num / (std::sqrt(a) * std::sqrt(b));
}

/// P(a uniform `mask_size`-subset of d items misses some item of a fixed
/// `m`-subset), by enumerating all subsets of {0..d-1}. d <= 20.
inline double alpha_by_enumeration(unsigned d, unsigned mask_size, unsigned m) {
  const std::uint32_t target = (1u << m) - 1u;
  std::uint64_t total = 0, covering = 0;
  for (std::uint32_t s = 0; s < (1u << d); ++s) {
    if (static_cast<unsigned>(std::popcount(s)) != mask_size) continue;
    ++total;
    if ((s & target) == target) ++covering;
  }
  return 1.0 - static_cast<double>(covering) / static_cast<double>(total);
}

/// alpha_ni for the incremental process (start size 4, |M| = 4): user i
/// has taken n+1-i steps, so holds min(d, n+4-i) items.
inline double alpha_example2_by_enumeration(unsigned n, unsigned i, unsigned d) {
  const unsigned held = std::min(d, n + 4 - i);
  return alpha_by_enumeration(d, held, 4);
}

/// Binomial(n, p) pmf by the multiplicative recurrence.
inline std::vector<double> binomial_pmf(std::size_t n, double p) {
  std::vector<double> pmf(n + 1);
  pmf[0] = std::pow(1.0 - p, static_cast<double>(n));
  for (std::size_t k = 1; k <= n; ++k) {
    pmf[k] = pmf[k - 1] * static_cast<double>(n - k + 1) / static_cast<double>(k) * p / (1.0 - p);
  }
  return pmf;
}

/// Ordinary least squares slope and intercept of y on x.
struct Line {
  double slope = 0.0;
  double intercept = 0.0;
};
inline Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  long double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto n = static_cast<long double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  const long double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {static_cast<double>(slope), static_cast<double>((sy - slope * sx) / n)};
}

/// Upper tail of the chi-square distribution with `dof` degrees of freedom,
/// via the Wilson-Hilferty normal approximation; adequate for dof >= 3.
inline double chi_square_upper_tail(double stat, double dof) {
  const double z = (std::cbrt(stat / dof) - (1.0 - 2.0 / (9.0 * dof))) / std::sqrt(2.0 / (9.0 * dof));
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

}  // namespace cosknn::oracle
