#include "cosknn/fixture.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace cosknn {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw std::runtime_error("fixture line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto at = s.find(sep, start);
    out.push_back(trim(s.substr(start, at == std::string_view::npos ? s.npos : at - start)));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view v, std::size_t line, const char* what) {
  T out{};
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    fail(line, std::string("bad ") + what + " '" + std::string(v) + "'");
  }
  return out;
}

struct ParsedUser {
  std::string id;
  std::vector<double> values;
  MaskSet rated;
  std::optional<double> target;
};

ParsedUser parse_user(std::string_view line, std::size_t line_no, std::size_t d) {
  const auto fields = split(line, ',');
  if (fields.size() != 3) fail(line_no, "expected 'id,items,target'");
  ParsedUser user{std::string(fields[0]), std::vector<double>(d, 0.0), MaskSet(d), std::nullopt};
  if (!fields[1].empty()) {
    for (auto pair : split(fields[1], ';')) {
      const auto colon = pair.find(':');
      if (colon == std::string_view::npos) fail(line_no, "item entries must look like j:value");
      const auto j = parse_number<std::size_t>(trim(pair.substr(0, colon)), line_no, "item index");
      const auto v = parse_number<double>(trim(pair.substr(colon + 1)), line_no, "rating");
      if (j < 1 || j > d) fail(line_no, "item index " + std::to_string(j) + " outside 1.." + std::to_string(d));
      if (user.rated.contains(j - 1)) fail(line_no, "item " + std::to_string(j) + " listed twice");
      if (v == 0.0) fail(line_no, "rated items must have a nonzero rating");
      user.rated.insert(j - 1);
      user.values[j - 1] = v;
    }
  }
  if (fields[2] != "NA" && fields[2] != "?") user.target = parse_number<double>(fields[2], line_no, "target");
  return user;
}

}  // namespace

Fixture parse_fixture(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> lines;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    auto line = trim(text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos));
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    lines.emplace_back(line_no, line);
  }
  if (!lines.empty() && lines.front().second == "d,s,n") lines.erase(lines.begin());
  if (lines.empty()) throw std::runtime_error("fixture: missing header line 'd,s,n'");

  const auto header = split(lines.front().second, ',');
  if (header.size() != 3) fail(lines.front().first, "header must be 'd,s,n'");
  const RatingScale scale{parse_number<std::size_t>(header[0], lines.front().first, "d"),
                          parse_number<double>(header[1], lines.front().first, "s")};
  const auto n = parse_number<std::size_t>(header[2], lines.front().first, "n");
  if (lines.size() != n + 2) {
    throw std::runtime_error("fixture: header announces n = " + std::to_string(n) + " users but the file has " +
                             std::to_string(lines.size() - 1) + " user lines (including the new user)");
  }

  std::vector<std::string> ids;
  std::vector<ObservedRow> rows;
  for (std::size_t r = 1; r <= n; ++r) {
    auto user = parse_user(lines[r].second, lines[r].first, scale.d);
    ids.push_back(user.id);
    rows.push_back({std::move(user.values), std::move(user.rated), user.target.has_value(), user.target.value_or(0.0)});
  }
  auto query = parse_user(lines.back().second, lines.back().first, scale.d);
  if (query.target) fail(lines.back().first, "the new user's target must be NA");
  if (query.rated.empty()) fail(lines.back().first, "the new user must rate at least one item");
  try {
    auto snap = snapshot_from_observed(scale, rows, NewUser{std::move(query.values), std::move(query.rated)});
    return Fixture{std::move(ids), std::move(query.id), std::move(snap)};
  } catch (const ModelError& e) {
    throw std::runtime_error(std::string("fixture: ") + e.what());
  }
}

Fixture load_fixture(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open fixture '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_fixture(buf.str());
}

}  // namespace cosknn
