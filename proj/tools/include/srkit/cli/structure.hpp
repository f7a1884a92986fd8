#pragma once

#include "srkit/expr.hpp"
#include "srkit/frame.hpp"
#include "srkit/weights.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace srkit::cli {

/// A parsed structure-definition file.
///
///   name = "grushin"
///   dimension = 2
///   fields = ["dx", "x*dy"]
///   weights = [1, 2]
///   density_log_grad = ["p/x", "0"]
///   base_point = "0,0"
///   complete = true
///
///   [params]
///   p = 1
struct Structure {
  std::string name;
  std::size_t dimension = 0;
  std::vector<std::string> field_text;
  SRFrame frame{"", {VectorField(1)}};
  std::optional<WeightVector> weights;
  std::vector<std::string> density_text;
  Density density;
  Point base_point;
  /// User assertion, never inferred.
  std::optional<bool> complete;
  ParameterMap params;
  std::string source;
};

Structure parse_structure_text(std::string_view text, const std::string& source = "<string>");
Structure parse_structure(const std::filesystem::path& path);

}  // namespace srkit::cli
