#include "cosknn/csv.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cosknn/config.hpp"
#include "cosknn/rng.hpp"

namespace cosknn {

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string quote(const std::string& cell) {
  if (cell.find_first_of(",\"\n\r") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_manifest(std::ostream& out, const RunManifest& m) {
  out << "# command: " << m.command << '\n';
  out << "# code_version: " << m.code_version << '\n';
  out << "# rng_algorithm: " << m.rng_algorithm << '\n';
  out << "# seed: " << m.seed << '\n';
  out << "# timestamp: " << m.timestamp << '\n';
  for (const auto& note : m.notes) out << "# note: " << note << '\n';
  if (!m.config_text.empty()) {
    out << "# config:\n";
    std::istringstream lines(m.config_text);
    for (std::string line; std::getline(lines, line);) out << "#   " << line << '\n';
  }
}

}  // namespace

RunManifest make_manifest(std::string command, std::string config_text, std::uint64_t seed, bool reproducible) {
  RunManifest m;
  m.command = std::move(command);
  m.config_text = std::move(config_text);
  m.seed = seed;
  m.rng_algorithm = std::string(kRngAlgorithm);
  m.code_version = COSKNN_VERSION;
  m.timestamp = reproducible ? "1970-01-01T00:00:00Z" : utc_now();
  return m;
}

std::string render_csv(const CsvTable& table, const RunManifest& manifest) {
  std::ostringstream out;
  write_manifest(out, manifest);
  for (std::size_t c = 0; c < table.header.size(); ++c) out << (c ? "," : "") << quote(table.header[c]);
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << quote(row[c]);
    out << '\n';
  }
  return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

void emit_csv(const CsvTable& table, const std::filesystem::path& path, const RunManifest& manifest) {
  write_text_file(path, render_csv(table, manifest));
}

std::string render_gnuplot_dat(const experiments::MaeTable& table, const RunManifest& manifest) {
  std::ostringstream out;
  write_manifest(out, manifest);
  out << "# n k_n mae mae_stderr\n";
  for (const auto& row : table.rows) {
    out << row.n << ' ' << row.k_n << ' ' << format_double(row.mae) << ' ' << format_double(row.mae_stderr)
        << '\n';
  }
  return out.str();
}

CsvTable mae_csv(const experiments::MaeTable& table) {
  CsvTable csv{{"n", "k_n", "trials", "mae", "mae_stderr", "degenerate_fraction"}, {}};
  for (const auto& r : table.rows) {
    csv.rows.push_back({std::to_string(r.n), std::to_string(r.k_n), std::to_string(r.trials), format_double(r.mae),
                        format_double(r.mae_stderr), format_double(r.degenerate_fraction)});
  }
  return csv;
}

CsvTable ratefit_csv(const experiments::RateFit& fit) {
  return {{"slope", "intercept", "r_squared", "n_min", "n_max", "rows_used"},
          {{format_double(fit.slope), format_double(fit.intercept), format_double(fit.r_squared),
            std::to_string(fit.n_min), std::to_string(fit.n_max), std::to_string(fit.rows_used)}}};
}

CsvTable bounds_csv(const experiments::MaeTable& table) {
  CsvTable csv{{"n", "k_n", "term_alpha_sum", "term_alpha_prod", "term_bias", "term_variance", "bound_total", "mae",
                "mae_nondegenerate", "mae_over_bound"},
               {}};
  for (const auto& r : table.rows) {
    if (!r.bound) continue;
    const auto& b = *r.bound;
    csv.rows.push_back({std::to_string(r.n), std::to_string(r.k_n), format_double(b.term_alpha_sum),
                        format_double(b.term_alpha_prod), format_double(b.term_bias), format_double(b.term_variance),
                        format_double(b.total()), format_double(r.mae), format_double(r.mae_nondegenerate),
                        format_double(r.mae / b.total())});
  }
  return csv;
}

CsvTable alpha_csv(const std::vector<experiments::AlphaRow>& rows) {
  CsvTable csv{{"i", "alpha_closed_form", "alpha_mc", "stderr", "z_score"}, {}};
  for (const auto& r : rows) {
    csv.rows.push_back({std::to_string(r.i), format_double(r.closed_form), format_double(r.mc),
                        format_double(r.std_error), format_double(r.z_score)});
  }
  return csv;
}

}  // namespace cosknn
