#include "cosknn/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cosknn {

double apply_psi(Psi psi, double p) {
  switch (psi) {
    case Psi::identity:
      return p;
    case Psi::sqrt:
      return std::sqrt(p);
  }
  return p;
}

std::string_view to_string(Psi psi) { return psi == Psi::sqrt ? "sqrt" : "identity"; }

Psi parse_psi(std::string_view name) {
  if (name == "identity") return Psi::identity;
  if (name == "sqrt") return Psi::sqrt;
  throw std::invalid_argument("unknown psi '" + std::string(name) + "' (expected identity or sqrt)");
}

double sbar(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("sbar: length mismatch");
  double dot = 0.0;
  double xx = 0.0;
  double yy = 0.0;
  std::size_t corated = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] != 0.0 && y[j] != 0.0) {
      ++corated;
      dot += x[j] * y[j];
      xx += x[j] * x[j];
      yy += y[j] * y[j];
    }
  }
  if (corated == 0) return 0.0;
  // A single corated item is an exact cosine of 1; the ratio below can
  // round either side of it and break ties between such rows.
  if (corated == 1) return 1.0;
  const double ratio = (dot * dot) / (xx * yy);
  // Cauchy-Schwarz; rounding can push a proportional pair a hair above 1.
  return ratio >= 1.0 ? 1.0 : std::sqrt(ratio);
}

double penalty(const MaskSet& user_mask, const MaskSet& new_user_mask) {
  if (new_user_mask.empty()) throw std::invalid_argument("penalty: new user mask is empty");
  return static_cast<double>(user_mask.intersection_size(new_user_mask)) /
         static_cast<double>(new_user_mask.size());
}

double penalized_similarity(std::span<const double> x_star, std::span<const double> row, double p, Psi psi) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("penalized_similarity: penalty outside [0, 1]");
  return apply_psi(psi, p) * sbar(x_star, row);
}

double penalized_similarity(std::span<const double> x_star, std::span<const double> row, std::size_t overlap,
                            std::size_t mask_size, Psi psi) {
  if (mask_size == 0 || overlap > mask_size) throw std::invalid_argument("penalized_similarity: bad overlap");
  if (x_star.size() != row.size()) throw std::invalid_argument("penalized_similarity: length mismatch");
  double dot = 0.0;
  double xx = 0.0;
  double yy = 0.0;
  std::size_t corated = 0;
  for (std::size_t j = 0; j < x_star.size(); ++j) {
    if (x_star[j] != 0.0 && row[j] != 0.0) {
      ++corated;
      dot += x_star[j] * row[j];
      xx += x_star[j] * x_star[j];
      yy += row[j] * row[j];
    }
  }
  if (overlap == 0 || xx == 0.0) return 0.0;
  const auto c = static_cast<double>(overlap);
  const auto m = static_cast<double>(mask_size);
  // psi(p)^2 is p^2 for identity and p for sqrt.
  const double cap = psi == Psi::identity ? (c * c) / (m * m) : c / m;
  if (corated == 1) return std::sqrt(cap);
  const double num = (psi == Psi::identity ? c * c : c) * (dot * dot);
  const double den = (psi == Psi::identity ? m * m : m) * (xx * yy);
  return std::sqrt(std::min(num / den, cap));
}

double best_rating_extension(std::span<const double> x_star, std::span<const double> row_star, double y_i) {
  if (x_star.size() != row_star.size()) throw std::invalid_argument("best_rating_extension: length mismatch");
  double dot = 0.0;
  double xx = 0.0;
  double rr = 0.0;
  for (std::size_t j = 0; j < x_star.size(); ++j) {
    if ((x_star[j] != 0.0) != (row_star[j] != 0.0)) {
      throw std::invalid_argument("best_rating_extension: vectors must share the same support");
    }
    dot += x_star[j] * row_star[j];
    xx += x_star[j] * x_star[j];
    rr += row_star[j] * row_star[j];
  }
  if (xx == 0.0 || rr == 0.0) throw std::invalid_argument("best_rating_extension: zero vector");
  if (!(dot > 0.0)) throw std::invalid_argument("best_rating_extension: non-positive cosine");
  const double x_norm = std::sqrt(xx);
  const double r_norm = std::sqrt(rr);
  const double cosine = dot / (x_norm * r_norm);
  return x_norm * y_i / (r_norm * cosine);
}

double cosine_distance_identity_check(std::span<const double> z, std::span<const double> z2) {
  if (z.size() != z2.size()) throw std::invalid_argument("identity check: length mismatch");
  double zz = 0.0;
  double ww = 0.0;
  double dot = 0.0;
  double dist2 = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    if ((z[j] != 0.0) != (z2[j] != 0.0)) throw std::invalid_argument("identity check: supports differ");
    zz += z[j] * z[j];
    ww += z2[j] * z2[j];
    dot += z[j] * z2[j];
    const double diff = z[j] - z2[j];
    dist2 += diff * diff;
  }
  if (std::abs(zz - 1.0) > 1e-12 || std::abs(ww - 1.0) > 1e-12) {
    throw std::invalid_argument("identity check: inputs must be unit vectors");
  }
  const double cosine = dot / (std::sqrt(zz) * std::sqrt(ww));
  return std::abs(cosine - (1.0 - 0.5 * dist2));
}

}  // namespace cosknn
