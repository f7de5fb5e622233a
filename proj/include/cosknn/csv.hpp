#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cosknn/experiments.hpp"
#include "cosknn/scenario.hpp"

namespace cosknn {

/// Provenance written as `#` comment lines at the top of every output file.
struct RunManifest {
  std::string command;      // subcommand and arguments
  std::string config_text;  // resolved config, may be empty
  std::uint64_t seed = 0;
  std::string rng_algorithm;
  std::string code_version;
  std::string timestamp;
  std::vector<std::string> notes;
};

/// Fills rng_algorithm, code_version and timestamp. With `reproducible`
/// the timestamp is the fixed string 1970-01-01T00:00:00Z.
RunManifest make_manifest(std::string command, std::string config_text, std::uint64_t seed, bool reproducible);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Manifest comments, header and rows; LF line endings, RFC 4180 quoting.
std::string render_csv(const CsvTable& table, const RunManifest& manifest);

/// Writes render_csv output to `path`. Throws std::runtime_error naming the path.
void emit_csv(const CsvTable& table, const std::filesystem::path& path, const RunManifest& manifest);

/// Whitespace-separated columns for gnuplot: n k_n mae mae_stderr.
std::string render_gnuplot_dat(const experiments::MaeTable& table, const RunManifest& manifest);

void write_text_file(const std::filesystem::path& path, const std::string& content);

/// Columns: n, k_n, trials, mae, mae_stderr, degenerate_fraction.
CsvTable mae_csv(const experiments::MaeTable& table);
/// Columns: slope, intercept, r_squared, n_min, n_max, rows_used.
CsvTable ratefit_csv(const experiments::RateFit& fit);
/// Columns: n, k_n, term_alpha_sum, term_alpha_prod, term_bias, term_variance,
/// bound_total, mae, mae_nondegenerate, mae_over_bound.
CsvTable bounds_csv(const experiments::MaeTable& table);
/// Columns: i, alpha_closed_form, alpha_mc, stderr, z_score.
CsvTable alpha_csv(const std::vector<experiments::AlphaRow>& rows);

}  // namespace cosknn
