#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cosknn/scenario.hpp"
#include "cosknn/theory.hpp"

namespace cosknn::experiments {

/// Bound terms averaged over the trials of one MAE row.
struct MeanBound {
  double term_alpha_sum = 0.0;
  double term_alpha_prod = 0.0;
  double term_bias = 0.0;
  double term_variance = 0.0;

  double total() const { return term_alpha_sum + term_alpha_prod + term_bias + term_variance; }
};

struct MaeRow {
  std::size_t n = 0;
  std::size_t k_n = 0;
  std::size_t trials = 0;
  double mae = 0.0;  // degenerate (zero) estimates included as-is
  double mae_stderr = 0.0;
  double degenerate_fraction = 0.0;
  double mae_nondegenerate = 0.0;  // NaN when every trial was degenerate
  std::optional<MeanBound> bound;  // absent when alpha has no closed form
};

struct MaeTable {
  std::vector<MaeRow> rows;
};

struct RunOptions {
  /// OpenMP threads for the trial loop; 0 keeps the runtime default.
  int threads = 0;
};

/// Monte Carlo estimate of E|eta_n(X*) - eta(X*)| at each n of
/// cfg.n_values, with k_n from cfg.schedule and cfg.trials fresh scenario
/// realizations per n. A pure function of cfg; the thread count only
/// changes wall time.
///
/// Throws ConfigError when the new user's mask is not the full item set,
/// since eta is only known in closed form there.
MaeTable run_mae(const ScenarioConfig& cfg, const RunOptions& options = {});

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t n_min = 0;
  std::size_t n_max = 0;
  std::size_t rows_used = 0;
  std::vector<std::string> warnings;
};

/// Least squares of log(mae) on log(n) over rows with fewer than 1%
/// degenerate trials and mae > 0. Throws std::invalid_argument with fewer
/// than three usable rows.
RateFit fit_rate(const MaeTable& table);

struct ConsistencyVerdict {
  bool pass = false;
  std::size_t n_min = 0;
  std::size_t n_max = 0;
  double ratio = 0.0;          // mae(n_max) / mae(n_min)
  double separation_se = 0.0;  // (mae(n_min) - mae(n_max)) / combined stderr
  std::string reason;
};

/// mae(n_max) < max_ratio * mae(n_min) with the drop exceeding 3 combined
/// standard errors, and n_max / n_min >= 64.
ConsistencyVerdict check_consistency(const MaeTable& table, double max_ratio = 1.0);

/// Smallest C with mae <= C * bound_total on every row, and the per-row
/// ratios mae / bound_total. Empty when the table carries no bounds.
struct Envelope {
  double c_fit = 0.0;
  std::vector<double> ratios;
};
std::optional<Envelope> fit_envelope(const MaeTable& table);

struct AlphaEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Frequency with which an incremental (start size 4) mask sequence, after
/// n+1-i steps, fails to contain an independent uniform 4-subset M.
AlphaEstimate alpha_mc(std::size_t n, std::size_t i, std::size_t d, std::size_t trials, std::uint64_t seed,
                       const RunOptions& options = {});

struct AlphaRow {
  std::size_t i = 0;
  double closed_form = 0.0;
  double mc = 0.0;
  double std_error = 0.0;
  double z_score = 0.0;
};

/// alpha_mc next to alpha_example2 for every i in 1..n.
std::vector<AlphaRow> validate_alpha(std::size_t d, std::size_t n, std::size_t trials, std::uint64_t seed,
                                     const RunOptions& options = {});

/// Largest realized sum_{i in R_n} alpha_ni over `trials` draws of the
/// Bernoulli-growth reveal process with parameter p.
double max_realized_alpha_sum(std::size_t d, std::size_t n, double p, std::size_t trials, std::uint64_t seed);

}  // namespace cosknn::experiments
