#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cosknn/core_model.hpp"

namespace cosknn {

/// A snapshot read from a fixture file.
///
/// Format (`#` starts a comment line):
///
///     d,s,n                 first data line, e.g. 5,10,8
///     id,j:v;j:v;...,target one line per database user, items 1-based,
///                           target a number or NA
///     id,j:v;j:v;...,NA     last line: the new user
///
/// An empty item field means the user has rated nothing yet.
struct Fixture {
  std::vector<std::string> user_ids;
  std::string new_user_id;
  DatabaseSnapshot snapshot;
};

/// Throws std::runtime_error with the offending line number.
Fixture parse_fixture(std::string_view text);
Fixture load_fixture(const std::filesystem::path& path);

}  // namespace cosknn
