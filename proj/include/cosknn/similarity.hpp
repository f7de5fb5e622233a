#pragma once

#include <span>
#include <string_view>

#include "cosknn/mask_set.hpp"

namespace cosknn {

/// Smoothing applied to the penalty before it multiplies the similarity.
/// Both choices are non-decreasing maps [0,1] -> [0,1] with psi(1/2) < 1.
enum class Psi { identity, sqrt };

double apply_psi(Psi psi, double p);
std::string_view to_string(Psi psi);
/// Parses "identity" or "sqrt"; throws std::invalid_argument otherwise.
Psi parse_psi(std::string_view name);

/// Cosine similarity restricted to the corated items
/// J = {j : x_j != 0 and y_j != 0}; 0 when J is empty.
///
/// Computed as sqrt(<x,y>_J^2 / (|x|_J^2 |y|_J^2)). The squared ratio is a
/// single correctly rounded division, so mathematically equal similarities
/// coming from exactly representable inputs (integer ratings, power-of-two
/// or integer rescalings) compare equal bit for bit. Neighbor ranking
/// depends on that for its index tie-break.
double sbar(std::span<const double> x, std::span<const double> y);

/// |user_mask n new_user_mask| / |new_user_mask|. Rejects an empty new_user_mask.
double penalty(const MaskSet& user_mask, const MaskSet& new_user_mask);

/// psi(p) * sbar(x_star, row).
double penalized_similarity(std::span<const double> x_star, std::span<const double> row, double p, Psi psi);

/// psi(overlap / mask_size) * sbar(x_star, row), evaluated as the square
/// root of one rounded ratio of products. Equal to the overload above up to
/// rounding; this is the form used for neighbor ranking.
double penalized_similarity(std::span<const double> x_star, std::span<const double> row, std::size_t overlap,
                            std::size_t mask_size, Psi psi);

/// The y > 0 maximizing sbar((x_star, y), (row_star, y_i)):
/// |x_star| y_i / (|row_star| cos(x_star, row_star)).
///
/// Both vectors must be nonzero with identical support.
double best_rating_extension(std::span<const double> x_star, std::span<const double> row_star, double y_i);

/// |cos(z, z2) - (1 - |z - z2|^2 / 2)| for unit vectors with identical
/// support. Throws std::invalid_argument for inputs that are not unit norm
/// (to 1e-12) or whose supports differ.
double cosine_distance_identity_check(std::span<const double> z, std::span<const double> z2);

}  // namespace cosknn
