#include "cosknn/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace cosknn {

std::string_view to_string(MaskProcess v) {
  switch (v) {
    case MaskProcess::full_at_entry:
      return "full_at_entry";
    case MaskProcess::example2_incremental:
      return "example2_incremental";
    case MaskProcess::custom_nested:
      return "custom_nested";
  }
  return "?";
}

std::string_view to_string(RevealProcess v) {
  return v == RevealProcess::all_users ? "all_users" : "bernoulli_growth";
}

std::string_view to_string(NewUserMaskLaw v) { return v == NewUserMaskLaw::full_set ? "full_set" : "same_as_M1"; }

std::string_view to_string(RatingModel v) {
  return v == RatingModel::mean_rating ? "mean_rating" : "mean_rating_multiplicative_noise";
}

std::string_view to_string(ScheduleKind v) {
  switch (v) {
    case ScheduleKind::ex1_rate:
      return "ex1_rate";
    case ScheduleKind::ex2_rate:
      return "ex2_rate";
    case ScheduleKind::constant:
      return "constant";
    case ScheduleKind::power:
      return "power";
  }
  return "?";
}

void ScenarioConfig::validate() const {
  if (d < 1) throw ConfigError("d", "must be an integer >= 1");
  if (d > 120) throw ConfigError("d", "must be <= 120");
  if (!(s > 1.0) || !std::isfinite(s)) throw ConfigError("s", "must be a finite real > 1");
  if (mask_process != MaskProcess::full_at_entry) {
    if (mask_start_size < 1 || mask_start_size > d) {
      throw ConfigError("mask.start_size", "must lie in [1, d] = [1, " + std::to_string(d) + "]");
    }
  }
  if (mask_process == MaskProcess::custom_nested && !(mask_growth_prob > 0.0 && mask_growth_prob <= 1.0)) {
    throw ConfigError("mask.growth_prob", "must lie in (0, 1]");
  }
  if (!(reveal_p > 0.0 && reveal_p < 1.0)) throw ConfigError("reveal.p", "must lie in the open interval (0, 1)");
  const double delta_max = (s - 1.0) / (s + 1.0);
  if (rating_model == RatingModel::mean_rating_multiplicative_noise) {
    if (!(noise_delta >= 0.0 && noise_delta < delta_max)) {
      throw ConfigError("rating.delta", "must lie in [0, (s-1)/(s+1)) = [0, " + format_double(delta_max) + ")");
    }
  } else if (noise_delta != 0.0) {
    throw ConfigError("rating.delta", "only allowed with rating.model = mean_rating_multiplicative_noise");
  }
  if (trials < 1) throw ConfigError("trials", "must be >= 1");
  if (n_values.empty()) throw ConfigError("experiment.n_values", "must list at least one n");
  for (std::size_t r = 0; r < n_values.size(); ++r) {
    if (n_values[r] < 1) throw ConfigError("experiment.n_values", "every n must be >= 1");
    if (r > 0 && n_values[r] <= n_values[r - 1]) {
      throw ConfigError("experiment.n_values", "values must be strictly ascending");
    }
  }
  switch (schedule.kind) {
    case ScheduleKind::ex1_rate:
      if (d < 2) throw ConfigError("schedule.name", "ex1_rate needs d >= 2");
      break;
    case ScheduleKind::ex2_rate:
      break;
    case ScheduleKind::constant:
      if (!(schedule.value >= 1.0) || schedule.value != std::floor(schedule.value)) {
        throw ConfigError("schedule.value", "constant schedule needs an integer k >= 1");
      }
      break;
    case ScheduleKind::power:
      if (!(schedule.value > 0.0 && schedule.value <= 1.0)) {
        throw ConfigError("schedule.value", "power exponent must lie in (0, 1]");
      }
      break;
  }
}

double ScenarioConfig::effective_scale() const {
  return rating_model == RatingModel::mean_rating_multiplicative_noise ? s * (1.0 + noise_delta) : s;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::size_t parse_size(const std::string& key, std::string_view v) {
  std::size_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ConfigError(key, "expected a non-negative integer, got '" + std::string(v) + "'");
  }
  return out;
}

std::uint64_t parse_u64(const std::string& key, std::string_view v) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ConfigError(key, "expected a 64-bit unsigned integer, got '" + std::string(v) + "'");
  }
  return out;
}

double parse_real(const std::string& key, std::string_view v) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError(key, "expected a real number, got '" + std::string(v) + "'");
  }
  return out;
}

template <typename Enum, std::size_t N>
Enum parse_enum(const std::string& key, std::string_view v, const Enum (&options)[N]) {
  std::string allowed;
  for (auto opt : options) {
    if (to_string(opt) == v) return opt;
    allowed += (allowed.empty() ? "" : ", ") + std::string(to_string(opt));
  }
  throw ConfigError(key, "unknown value '" + std::string(v) + "' (allowed: " + allowed + ")");
}

using Setter = std::function<void(ScenarioConfig&, const std::string&, std::string_view)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"d", [](ScenarioConfig& c, const std::string& k, std::string_view v) { c.d = parse_size(k, v); }},
      {"s", [](ScenarioConfig& c, const std::string& k, std::string_view v) { c.s = parse_real(k, v); }},
      {"seed", [](ScenarioConfig& c, const std::string& k, std::string_view v) { c.seed = parse_u64(k, v); }},
      {"trials", [](ScenarioConfig& c, const std::string& k, std::string_view v) { c.trials = parse_size(k, v); }},
      {"mask.process",
       [](ScenarioConfig& c, const std::string& k, std::string_view v) {
         static const MaskProcess opts[] = {MaskProcess::full_at_entry, MaskProcess::example2_incremental,
                                            MaskProcess::custom_nested};
         c.mask_process = parse_enum(k, v, opts);
       }},
      {"mask.start_size",
       [](ScenarioConfig& c, const std::string& k, std::string_view v) { c.mask_start_size = parse_size(k, v); }},
      {"mask.growth_prob",
       [](ScenarioConfig& c, const std::string& k, std::string_view v) { c.mask_growth_prob = parse_real(k, v); }},
      {"reveal.process",
       [](ScenarioConfig& c, const std::string& k, std::string_view v) {
         static const RevealProcess opts[] = {RevealProcess::all_users, RevealProcess::bernoulli_growth};
         c.reveal_process = parse_enum(k, v, opts);
       }},
      {"reveal.p", [](ScenarioConfig& c, const std::string& k, std::string_view v) { c.reveal_p = parse_real(k, v); }},
      {"new_user.mask_law",
       [](ScenarioConfig& c, const std::string& k, std::string_view v) {
         static const NewUserMaskLaw opts[] = {NewUserMaskLaw::full_set, NewUserMaskLaw::same_as_M1};
         c.new_user_mask_law = parse_enum(k, v, opts);
       }},
      {"rating.model",
       [](ScenarioConfig& c, const std::string& k, std::string_view v) {
         static const RatingModel opts[] = {RatingModel::mean_rating, RatingModel::mean_rating_multiplicative_noise};
         c.rating_model = parse_enum(k, v, opts);
       }},
      {"rating.delta",
       [](ScenarioConfig& c, const std::string& k, std::string_view v) { c.noise_delta = parse_real(k, v); }},
      {"estimator.psi",
       [](ScenarioConfig& c, const std::string& k, std::string_view v) {
         static const Psi opts[] = {Psi::identity, Psi::sqrt};
         c.psi = parse_enum(k, v, opts);
       }},
      {"schedule.name",
       [](ScenarioConfig& c, const std::string& k, std::string_view v) {
         static const ScheduleKind opts[] = {ScheduleKind::ex1_rate, ScheduleKind::ex2_rate, ScheduleKind::constant,
                                             ScheduleKind::power};
         c.schedule.kind = parse_enum(k, v, opts);
       }},
      {"schedule.value",
       [](ScenarioConfig& c, const std::string& k, std::string_view v) { c.schedule.value = parse_real(k, v); }},
      {"experiment.n_values",
       [](ScenarioConfig& c, const std::string& k, std::string_view v) {
         c.n_values.clear();
         std::size_t start = 0;
         while (start <= v.size()) {
           const auto comma = v.find(',', start);
           const auto item = trim(v.substr(start, comma == std::string_view::npos ? v.npos : comma - start));
           if (item.empty()) throw ConfigError(k, "empty entry in list");
           c.n_values.push_back(parse_size(k, item));
           if (comma == std::string_view::npos) break;
           start = comma + 1;
         }
       }},
  };
  return table;
}

}  // namespace

ScenarioConfig parse_config_text(std::string_view text) {
  ScenarioConfig cfg;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    auto line = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(key, "unknown key");
    if (!seen.insert(key).second) throw ConfigError(key, "given more than once");
    if (value.empty()) throw ConfigError(key, "missing value");
    it->second(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string render_config(const ScenarioConfig& cfg) {
  std::ostringstream out;
  out << "d = " << cfg.d << '\n';
  out << "s = " << format_double(cfg.s) << '\n';
  out << "seed = " << cfg.seed << '\n';
  out << "trials = " << cfg.trials << '\n';
  out << "mask.process = " << to_string(cfg.mask_process) << '\n';
  out << "mask.start_size = " << cfg.mask_start_size << '\n';
  out << "mask.growth_prob = " << format_double(cfg.mask_growth_prob) << '\n';
  out << "reveal.process = " << to_string(cfg.reveal_process) << '\n';
  out << "reveal.p = " << format_double(cfg.reveal_p) << '\n';
  out << "new_user.mask_law = " << to_string(cfg.new_user_mask_law) << '\n';
  out << "rating.model = " << to_string(cfg.rating_model) << '\n';
  out << "rating.delta = " << format_double(cfg.noise_delta) << '\n';
  out << "estimator.psi = " << to_string(cfg.psi) << '\n';
  out << "schedule.name = " << to_string(cfg.schedule.kind) << '\n';
  out << "schedule.value = " << format_double(cfg.schedule.value) << '\n';
  out << "experiment.n_values = ";
  for (std::size_t r = 0; r < cfg.n_values.size(); ++r) out << (r ? "," : "") << cfg.n_values[r];
  out << '\n';
  return out.str();
}

}  // namespace cosknn
