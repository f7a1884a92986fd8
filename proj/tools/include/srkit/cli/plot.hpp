#pragma once

#include "srkit/serialize.hpp"

#include <filesystem>
#include <string>

namespace srkit::cli {

/// Deterministic SVG for geodesic and distance reports (trajectory polyline), bm reports
/// (midpoint cloud with the certified box) and multi-ℓ bm reports (margin curve).
/// Throws when the report has nothing plottable.
std::string render_svg(const Json& report);

void emit_plot(const Json& report, const std::filesystem::path& path);

}  // namespace srkit::cli
