#include "cosknn/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <omp.h>

#include "cosknn/estimator.hpp"
#include "cosknn/generators.hpp"

namespace cosknn::experiments {

namespace {

struct TrialOutcome {
  double abs_error = 0.0;
  bool degenerate = false;
  theory::BoundBreakdown bound;
};

int thread_count(const RunOptions& options) {
  return options.threads > 0 ? options.threads : omp_get_max_threads();
}

bool new_user_mask_is_full(const ScenarioConfig& cfg) {
  return cfg.new_user_mask_law == NewUserMaskLaw::full_set || cfg.mask_process == MaskProcess::full_at_entry;
}

ScenarioConfig alpha_process_config(std::size_t d) {
  ScenarioConfig cfg;
  cfg.d = d;
  cfg.mask_process = MaskProcess::example2_incremental;
  cfg.mask_start_size = 4;
  cfg.new_user_mask_law = NewUserMaskLaw::same_as_M1;
  return cfg;
}

}  // namespace

MaeTable run_mae(const ScenarioConfig& cfg, const RunOptions& options) {
  cfg.validate();
  if (!new_user_mask_is_full(cfg)) {
    throw ConfigError("new_user.mask_law", "MAE runs need the full new-user mask (eta has no closed form otherwise)");
  }
  const theory::KSchedule schedule(cfg.schedule, cfg.d);
  const bool has_bound = cfg.mask_process != MaskProcess::custom_nested && cfg.d >= 2;

  MaeTable table;
  for (const auto n : cfg.n_values) {
    const auto k = schedule(n);
    std::optional<theory::AlphaTable> alpha;
    if (has_bound) alpha = theory::alpha_table(cfg, n, cfg.d);

    std::vector<TrialOutcome> outcomes(cfg.trials);
    const auto trials = static_cast<long long>(cfg.trials);
#pragma omp parallel for schedule(dynamic) num_threads(thread_count(options))
    for (long long t = 0; t < trials; ++t) {
      const auto key = combine_keys(n, static_cast<std::uint64_t>(t));
      const auto run = gen_scenario_run(cfg.seed, cfg, n, key);
      const auto snap = run.snapshot(cfg);
      const auto result = estimate(snap, k, cfg.psi);
      auto& out = outcomes[static_cast<std::size_t>(t)];
      out.abs_error = std::abs(result.value - theory::eta_true(snap.new_user_vector().entries(), cfg));
      out.degenerate = result.degenerate_reason != Degenerate::none;
      if (alpha) out.bound = theory::bound_breakdown(*alpha, snap.reveal_set(), cfg.d, k);
    }

    // Ordered reduction keeps the table independent of the thread count.
    MaeRow row;
    row.n = n;
    row.k_n = k;
    row.trials = cfg.trials;
    double sum = 0.0;
    double sum_nondeg = 0.0;
    std::size_t degenerate = 0;
    MeanBound bound;
    for (const auto& o : outcomes) {
      sum += o.abs_error;
      if (o.degenerate) {
        ++degenerate;
      } else {
        sum_nondeg += o.abs_error;
      }
      bound.term_alpha_sum += o.bound.term_alpha_sum;
      bound.term_alpha_prod += o.bound.term_alpha_prod;
      bound.term_bias += o.bound.term_bias;
      bound.term_variance += o.bound.term_variance;
    }
    const double count = static_cast<double>(cfg.trials);
    row.mae = sum / count;
    double ss = 0.0;
    for (const auto& o : outcomes) ss += (o.abs_error - row.mae) * (o.abs_error - row.mae);
    row.mae_stderr = cfg.trials > 1 ? std::sqrt(ss / (count - 1.0)) / std::sqrt(count) : 0.0;
    row.degenerate_fraction = static_cast<double>(degenerate) / count;
    row.mae_nondegenerate = degenerate < cfg.trials
                                ? sum_nondeg / static_cast<double>(cfg.trials - degenerate)
                                : std::numeric_limits<double>::quiet_NaN();
    if (alpha) {
      bound.term_alpha_sum /= count;
      bound.term_alpha_prod /= count;
      bound.term_bias /= count;
      bound.term_variance /= count;
      row.bound = bound;
    }
    table.rows.push_back(row);
  }
  return table;
}

RateFit fit_rate(const MaeTable& table) {
  RateFit fit;
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& row : table.rows) {
    if (row.degenerate_fraction >= 0.01) {
      fit.warnings.push_back("n=" + std::to_string(row.n) + " excluded: degenerate fraction >= 1%");
      continue;
    }
    if (!(row.mae > 0.0)) {
      fit.warnings.push_back("n=" + std::to_string(row.n) + " excluded: mae is zero");
      continue;
    }
    xs.push_back(std::log(static_cast<double>(row.n)));
    ys.push_back(std::log(row.mae));
    fit.n_min = fit.rows_used == 0 ? row.n : std::min(fit.n_min, row.n);
    fit.n_max = std::max(fit.n_max, row.n);
    ++fit.rows_used;
  }
  if (fit.rows_used < 3) throw std::invalid_argument("fit_rate: fewer than 3 usable rows");

  const double m = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t r = 0; r < xs.size(); ++r) {
    mx += xs[r];
    my += ys[r];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t r = 0; r < xs.size(); ++r) {
    sxx += (xs[r] - mx) * (xs[r] - mx);
    sxy += (xs[r] - mx) * (ys[r] - my);
    syy += (ys[r] - my) * (ys[r] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_rate: all rows share the same n");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

ConsistencyVerdict check_consistency(const MaeTable& table, double max_ratio) {
  ConsistencyVerdict v;
  if (table.rows.size() < 2) {
    v.reason = "need at least two rows";
    return v;
  }
  const auto by_n = [](const MaeRow& a, const MaeRow& b) { return a.n < b.n; };
  const auto& lo = *std::min_element(table.rows.begin(), table.rows.end(), by_n);
  const auto& hi = *std::max_element(table.rows.begin(), table.rows.end(), by_n);
  v.n_min = lo.n;
  v.n_max = hi.n;
  v.ratio = lo.mae > 0.0 ? hi.mae / lo.mae : std::numeric_limits<double>::infinity();
  const double se = std::hypot(lo.mae_stderr, hi.mae_stderr);
  const double drop = lo.mae - hi.mae;
  v.separation_se = se > 0.0 ? drop / se : (drop > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  if (hi.n < 64 * lo.n) {
    v.reason = "n_max / n_min must be at least 64";
  } else if (!(hi.mae < max_ratio * lo.mae)) {
    v.reason = "mae(n_max) is not below the allowed fraction of mae(n_min)";
  } else if (!(v.separation_se > 3.0)) {
    v.reason = "decrease is within 3 combined standard errors";
  } else {
    v.pass = true;
    v.reason = "ok";
  }
  return v;
}

std::optional<Envelope> fit_envelope(const MaeTable& table) {
  Envelope env;
  for (const auto& row : table.rows) {
    if (!row.bound) return std::nullopt;
    const double ratio = row.mae / row.bound->total();
    env.ratios.push_back(ratio);
    env.c_fit = std::max(env.c_fit, ratio);
  }
  if (env.ratios.empty()) return std::nullopt;
  return env;
}

AlphaEstimate alpha_mc(std::size_t n, std::size_t i, std::size_t d, std::size_t trials, std::uint64_t seed,
                       const RunOptions& options) {
  if (d < 4) throw std::invalid_argument("alpha_mc: d must be >= 4");
  if (i < 1 || i > n) throw std::invalid_argument("alpha_mc: need 1 <= i <= n");
  if (trials < 1) throw std::invalid_argument("alpha_mc: trials must be >= 1");
  const auto cfg = alpha_process_config(d);
  const auto cell = combine_keys(combine_keys(d, n), i);
  const std::size_t steps = n + 1 - i;

  std::vector<char> missed(trials, 0);
  const auto count = static_cast<long long>(trials);
#pragma omp parallel for schedule(static) num_threads(thread_count(options))
  for (long long t = 0; t < count; ++t) {
    RngStream mask_rng(seed, {cell, static_cast<std::uint64_t>(t), Purpose::user_mask});
    RngStream new_rng(seed, {cell, static_cast<std::uint64_t>(t), Purpose::new_user_mask});
    const auto masks = gen_mask_sequence_example2(mask_rng, d, 4);
    const auto m = gen_new_user_mask(new_rng, cfg);
    const auto& at = steps <= masks.size() ? masks[steps - 1] : masks.back();
    missed[static_cast<std::size_t>(t)] = m.subset_of(at) ? 0 : 1;
  }
  std::size_t hits = 0;
  for (auto v : missed) hits += static_cast<std::size_t>(v);
  const double p = static_cast<double>(hits) / static_cast<double>(trials);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials))};
}

std::vector<AlphaRow> validate_alpha(std::size_t d, std::size_t n, std::size_t trials, std::uint64_t seed,
                                     const RunOptions& options) {
  std::vector<AlphaRow> rows;
  rows.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) {
    AlphaRow row;
    row.i = i;
    row.closed_form = theory::alpha_example2(n, i, d);
    const auto mc = alpha_mc(n, i, d, trials, seed, options);
    row.mc = mc.estimate;
    row.std_error = mc.std_error;
    const double diff = row.mc - row.closed_form;
    if (row.std_error > 0.0) {
      row.z_score = diff / row.std_error;
    } else {
      row.z_score = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    }
    rows.push_back(row);
  }
  return rows;
}

double max_realized_alpha_sum(std::size_t d, std::size_t n, double p, std::size_t trials, std::uint64_t seed) {
  std::vector<double> alpha(n);
  for (std::size_t i = 1; i <= n; ++i) alpha[i - 1] = theory::alpha_example2(n, i, d);
  const auto cell = combine_keys(combine_keys(d, n), 0xa1fa);
  double worst = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    RngStream rng(seed, {cell, t, Purpose::reveal});
    const auto reveal = gen_reveal_sequence(rng, RevealProcess::bernoulli_growth, p, n);
    double sum = 0.0;
    for (auto i : reveal.members_at(n)) sum += alpha[i];
    worst = std::max(worst, sum);
  }
  return worst;
}

}  // namespace cosknn::experiments
