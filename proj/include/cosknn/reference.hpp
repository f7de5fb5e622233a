#pragma once

// Serial brute-force estimator kept as an independent oracle for the
// optimized estimator. Shares no scoring or selection code with it.

#include <cstddef>
#include <span>

#include "cosknn/core_model.hpp"
#include "cosknn/estimator.hpp"
#include "cosknn/similarity.hpp"

namespace cosknn::reference {

/// Full sort of every revealed row by (decreasing S, increasing index).
/// S is recomputed from the masks and the textbook cosine formula in long
/// double; values within 1e-12 (relative) of each other count as ties.
EstimateResult brute_force_estimate(const DatabaseSnapshot& snap, std::size_t k, Psi psi);
EstimateResult brute_force_estimate(const DatabaseSnapshot& snap, std::span<const double> query, std::size_t k,
                                    Psi psi);

}  // namespace cosknn::reference
