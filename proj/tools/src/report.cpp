#include "srkit/cli/report.hpp"

#include "srkit/error.hpp"

#include <CLI11.hpp>
#include <fstream>

namespace srkit::cli {

Json versions() {
  return {{"srkit", SRKIT_VERSION},
          {"gmp", gmp_version},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
          {"cli11", CLI11_VERSION}};
}

Json to_json(const Report& r) {
  Json j;
  j["command"] = r.command;
  j["inputs"] = r.inputs;
  j["outputs"] = r.outputs;
  j["checks"] = srkit::to_json(r.checks);
  j["versions"] = versions();
  j["seed"] = r.seed ? Json(*r.seed) : Json(nullptr);
  j["tolerances"] = r.tolerances;
  j["wall_time"] = r.wall_time;
  j["exit_code"] = r.exit_code;
  return j;
}

Report report_from_json(const Json& j) {
  Report r;
  r.command = j.at("command").get<std::string>();
  r.inputs = j.at("inputs");
  r.outputs = j.at("outputs");
  for (const auto& c : j.at("checks")) r.checks.push_back({c.at("name"), c.at("passed"), c.at("detail")});
  if (!j.at("seed").is_null()) r.seed = j.at("seed").get<std::uint64_t>();
  r.tolerances = j.at("tolerances");
  r.wall_time = j.at("wall_time").get<double>();
  r.exit_code = j.at("exit_code").get<int>();
  return r;
}

std::string serialize(const Report& r) { return to_json(r).dump(2) + "\n"; }

void write_atomically(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw Error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace srkit::cli
