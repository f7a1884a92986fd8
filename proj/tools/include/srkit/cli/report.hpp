#pragma once

#include "srkit/checks.hpp"
#include "srkit/serialize.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace srkit::cli {

struct Report {
  std::string command;
  Json inputs = Json::object();
  Json outputs = Json::object();
  CheckList checks;
  std::optional<std::uint64_t> seed;
  Json tolerances = Json::object();
  double wall_time = 0;
  int exit_code = 0;
  /// One-line human summary; not serialized.
  std::string summary;
};

Json versions();
Json to_json(const Report& r);
Report report_from_json(const Json& j);
/// Two-space indented JSON with sorted keys and a trailing newline.
std::string serialize(const Report& r);

/// Writes through a temporary file in the same directory and renames it into place.
void write_atomically(const std::filesystem::path& path, const std::string& text);

}  // namespace srkit::cli
