#include "cosknn/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "cosknn/config.hpp"
#include "cosknn/csv.hpp"
#include "cosknn/estimator.hpp"
#include "cosknn/experiments.hpp"
#include "cosknn/fixture.hpp"
#include "cosknn/rng.hpp"
#include "cosknn/similarity.hpp"

namespace cosknn {

namespace {

namespace fs = std::filesystem;

// Arguments that name files are recorded by basename and the thread count
// is left out, so reproducible outputs do not depend on where or how wide
// the tool was run.
std::string command_line(const std::vector<std::string>& args) {
  std::string out = "cosknn";
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto& a = args[i];
    if (a == "--threads") {
      ++i;
      continue;
    }
    if (a.rfind("--threads=", 0) == 0) continue;
    out += ' ';
    out += a.find('/') == std::string::npos ? a : fs::path(a).filename().string();
  }
  return out;
}

std::string fmt(double v) { return format_double(v); }

struct Common {
  bool reproducible = false;
  int threads = 0;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_flag("--reproducible", c.reproducible, "Freeze the manifest timestamp");
  sub->add_option("--threads", c.threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
}

int cmd_similarity(const std::string& fixture_path, const std::string& psi_name, bool reproducible,
                   const std::string& cmd, std::ostream& out) {
  const auto fx = load_fixture(fixture_path);
  const auto psi = parse_psi(psi_name);
  const auto& snap = fx.snapshot;

  std::vector<std::string> ids = fx.user_ids;
  ids.push_back(fx.new_user_id);
  std::vector<std::span<const double>> vecs;
  std::vector<MaskSet> masks;
  for (std::size_t i = 0; i < snap.n(); ++i) {
    vecs.push_back(snap.row(i));
    masks.push_back(snap.row_mask(i));
  }
  vecs.push_back(snap.new_user_vector().entries());
  masks.push_back(snap.new_user_mask());

  // The column user plays the query role: penalty = |M_row ∩ M_col| / |M_col|.
  CsvTable table{{"row_id", "col_id", "sbar", "penalty", "s"}, {}};
  for (std::size_t a = 0; a < ids.size(); ++a) {
    for (std::size_t b = 0; b < ids.size(); ++b) {
      if (a == b || masks[b].empty()) continue;
      const double sb = sbar(vecs[b], vecs[a]);
      const double p = penalty(masks[a], masks[b]);
      table.rows.push_back({ids[a], ids[b], fmt(sb), fmt(p), fmt(apply_psi(psi, p) * sb)});
    }
  }
  out << render_csv(table, make_manifest(cmd, "", 0, reproducible));
  return kExitOk;
}

int cmd_estimate(const std::string& fixture_path, std::size_t k, const std::string& psi_name, bool corrected,
                 bool reproducible, const std::string& cmd, std::ostream& out) {
  const auto fx = load_fixture(fixture_path);
  EstimateOptions opts;
  opts.psi = parse_psi(psi_name);
  opts.cosine_corrected = corrected;
  const auto& snap = fx.snapshot;
  const auto query = snap.new_user_vector().entries();
  const auto result = estimate(snap, query, k, opts);

  CsvTable table{{"kind", "user_id", "rank", "sbar", "penalty", "s", "target", "value", "degenerate"}, {}};
  table.rows.push_back({"estimate", fx.new_user_id, "", "", "", "", "", fmt(result.value),
                        std::string(to_string(result.degenerate_reason))});
  const double qn = snap.new_user_vector().norm();
  std::size_t rank = 0;
  for (auto i : result.neighbors.indices) {
    const double sb = sbar(query, snap.row(i));
    const double p = snap.penalty(i);
    double contribution = qn * snap.target(i) / snap.row_norm(i) / static_cast<double>(k);
    if (corrected) contribution /= sb;
    table.rows.push_back({"neighbor", fx.user_ids[i], std::to_string(++rank), fmt(sb), fmt(p),
                          fmt(apply_psi(opts.psi, p) * sb), fmt(snap.target(i)), fmt(contribution), ""});
  }
  out << render_csv(table, make_manifest(cmd, "", 0, reproducible));
  return kExitOk;
}

int cmd_validate_alpha(std::size_t d, std::size_t n, std::size_t trials, std::uint64_t seed, const Common& c,
                       const std::string& out_path, const std::string& cmd, std::ostream& out) {
  const auto rows = experiments::validate_alpha(d, n, trials, seed, {c.threads});
  const auto text = render_csv(alpha_csv(rows), make_manifest(cmd, "", seed, c.reproducible));
  if (out_path.empty()) {
    out << text;
  } else {
    write_text_file(out_path, text);
  }
  return kExitOk;
}

std::vector<std::string> scenario_notes(const ScenarioConfig& cfg) {
  std::vector<std::string> notes;
  if (cfg.mask_process == MaskProcess::example2_incremental && cfg.new_user_mask_law == NewUserMaskLaw::full_set) {
    notes.push_back(
        "incremental mask dynamics with a full new-user mask: the target is mean(x*) and every row is scored "
        "against all d items");
  }
  return notes;
}

int cmd_rates(const std::string& config_path, const std::string& out_dir, const Common& c, const std::string& cmd,
              std::ostream& out) {
  const auto cfg = parse_config(config_path);
  const auto table = experiments::run_mae(cfg, {c.threads});
  auto manifest = make_manifest(cmd, render_config(cfg), cfg.seed, c.reproducible);
  manifest.notes = scenario_notes(cfg);

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  emit_csv(mae_csv(table), dir / "mae.csv", manifest);
  write_text_file(dir / "mae.dat", render_gnuplot_dat(table, manifest));
  emit_csv(bounds_csv(table), dir / "bounds.csv", manifest);

  auto fit_manifest = manifest;
  CsvTable fit_table = ratefit_csv({});
  fit_table.rows.clear();
  try {
    const auto fit = experiments::fit_rate(table);
    fit_table = ratefit_csv(fit);
    for (const auto& w : fit.warnings) fit_manifest.notes.push_back(w);
    out << "slope " << fmt(fit.slope) << " over " << fit.rows_used << " rows\n";
  } catch (const std::invalid_argument& e) {
    fit_manifest.notes.push_back(std::string("no fit: ") + e.what());
    out << "no rate fit: " << e.what() << '\n';
  }
  emit_csv(fit_table, dir / "ratefit.csv", fit_manifest);
  return kExitOk;
}

int cmd_consistency(const std::string& config_path, double max_ratio, const std::string& out_dir, const Common& c,
                    const std::string& cmd, std::ostream& out) {
  const auto cfg = parse_config(config_path);
  const auto table = experiments::run_mae(cfg, {c.threads});
  if (!out_dir.empty()) {
    auto manifest = make_manifest(cmd, render_config(cfg), cfg.seed, c.reproducible);
    manifest.notes = scenario_notes(cfg);
    fs::create_directories(out_dir);
    emit_csv(mae_csv(table), fs::path(out_dir) / "mae.csv", manifest);
  }
  const auto verdict = experiments::check_consistency(table, max_ratio);
  for (const auto& r : table.rows) {
    out << "n=" << r.n << " k_n=" << r.k_n << " mae=" << fmt(r.mae) << " stderr=" << fmt(r.mae_stderr)
        << " degenerate=" << fmt(r.degenerate_fraction) << '\n';
  }
  out << (verdict.pass ? "PASS" : "FAIL") << ": ratio " << fmt(verdict.ratio) << ", separation "
      << fmt(verdict.separation_se) << " se";
  if (!verdict.reason.empty()) out << " (" << verdict.reason << ")";
  out << '\n';
  return verdict.pass ? kExitOk : kExitAssertion;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cosine-type k-NN collaborative filtering laboratory", "cosknn"};
  app.require_subcommand(1);
  app.fallthrough(false);

  auto* version = app.add_subcommand("version", "Print version and RNG algorithm");

  std::string fixture, psi = "identity";
  bool reproducible = false;
  auto* similarity = app.add_subcommand("similarity", "Pairwise similarities of a fixture as CSV");
  similarity->add_option("--fixture", fixture, "Fixture file")->required();
  similarity->add_option("--psi", psi, "Penalty transform: identity or sqrt");
  similarity->add_flag("--reproducible", reproducible, "Freeze the manifest timestamp");

  std::size_t k = 0;
  bool corrected = false;
  auto* est = app.add_subcommand("estimate", "Estimate the new user's target rating for a fixture");
  est->add_option("--fixture", fixture, "Fixture file")->required();
  est->add_option("--k", k, "Number of neighbors")->required()->check(CLI::PositiveNumber);
  est->add_option("--psi", psi, "Penalty transform: identity or sqrt");
  est->add_flag("--cosine-corrected", corrected, "Divide each contribution by its cosine");
  est->add_flag("--reproducible", reproducible, "Freeze the manifest timestamp");

  std::size_t d = 0, n = 0, trials = 0;
  std::uint64_t seed = 20090101;
  std::string out_path;
  Common alpha_common;
  auto* alpha = app.add_subcommand("validate-alpha", "Closed-form alpha against simulation");
  alpha->add_option("--d", d, "Number of items")->required();
  alpha->add_option("--n", n, "Database size")->required();
  alpha->add_option("--trials", trials, "Monte Carlo trials")->required()->check(CLI::PositiveNumber);
  alpha->add_option("--seed", seed, "Master seed");
  alpha->add_option("--out", out_path, "Output CSV (default stdout)");
  add_common(alpha, alpha_common);

  std::string config_path, out_dir;
  Common rates_common;
  auto* rates = app.add_subcommand("rates", "MAE curve, rate fit and bound terms");
  rates->add_option("--config", config_path, "Scenario config")->required();
  rates->add_option("--out", out_dir, "Output directory")->required();
  add_common(rates, rates_common);

  double max_ratio = 1.0;
  Common cons_common;
  auto* cons = app.add_subcommand("consistency", "Assert that the MAE falls between the smallest and largest n");
  cons->add_option("--config", config_path, "Scenario config")->required();
  cons->add_option("--max-ratio", max_ratio, "Required bound on mae(n_max) / mae(n_min)")
      ->check(CLI::PositiveNumber);
  cons->add_option("--out", out_dir, "Also write mae.csv here");
  add_common(cons, cons_common);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (!args.empty() && !args.front().empty() && args.front().front() != '-' &&
        app.get_subcommand_no_throw(args.front()) == nullptr) {
      err << "error: unknown subcommand '" << args.front() << "'\n\n" << app.help();
      return kExitUsage;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  const auto cmd = command_line(args);
  try {
    if (*version) {
      out << "cosknn " << COSKNN_VERSION << '\n' << "rng " << kRngAlgorithm << '\n';
      return kExitOk;
    }
    if (*similarity) return cmd_similarity(fixture, psi, reproducible, cmd, out);
    if (*est) return cmd_estimate(fixture, k, psi, corrected, reproducible, cmd, out);
    if (*alpha) return cmd_validate_alpha(d, n, trials, seed, alpha_common, out_path, cmd, out);
    if (*rates) return cmd_rates(config_path, out_dir, rates_common, cmd, out);
    if (*cons) return cmd_consistency(config_path, max_ratio, out_dir, cons_common, cmd, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace cosknn
