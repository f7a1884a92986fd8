#include "srkit/cli/app.hpp"
#include "srkit/cli/plot.hpp"
#include "srkit/cli/report.hpp"
#include "srkit/cli/structure.hpp"
#include "srkit/error.hpp"
#include "srkit/expr.hpp"

#include <doctest.h>
#include <fstream>
#include <sstream>

using namespace srkit;
using namespace srkit::cli;

namespace {

const std::filesystem::path gallery = SRKIT_GALLERY_DIR;
const std::filesystem::path golden = SRKIT_GOLDEN_DIR;

struct Run {
  int code;
  std::string out, err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

Json json_of(const Run& r) { return Json::parse(r.out); }

std::string without_wall_time(const std::string& text) {
  Json j = Json::parse(text);
  j.erase("wall_time");
  return j.dump();
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

ParseError parse_error_of(const std::string& text) {
  try {
    parse_structure_text(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("no parse error for: " << text);
  return ParseError("", 0, 0);
}

}  // namespace

TEST_CASE("bundled structures") {
  auto g = parse_structure(gallery / "grushin.toml");
  CHECK(g.dimension == 2);
  CHECK(g.frame.fields() == std::vector<VectorField>{parse_vector_field("dx", 2), parse_vector_field("x*dy", 2)});
  CHECK(g.weights == WeightVector({1, 2}));
  CHECK(g.complete == true);
  auto h = parse_structure(gallery / "heisenberg.toml");
  CHECK(h.frame.fields() ==
        std::vector<VectorField>{parse_vector_field("dx - (1/2)*y*dz", 3), parse_vector_field("dy + (1/2)*x*dz", 3)});
  auto w = parse_structure(gallery / "grushin_weighted.toml");
  CHECK(w.density.log_gradient[0] == parse_rational_function("1/x", 2));
  CHECK(w.base_point == parse_point("1,0"));
}

TEST_CASE("structure file errors carry positions") {
  auto e = parse_error_of("dimension = 2\nfields = [\"dx\", \"x^-1*dy\"]\n");
  CHECK(e.line() == 2);
  CHECK(e.column() > 17);
  auto m = parse_error_of("dimension = 2\n");
  CHECK(std::string(m.what()).find("missing key 'fields'") != std::string::npos);
  auto u = parse_error_of("dimension = 2\nfields = [\"dx\"]\ncolour = \"red\"\n");
  CHECK(u.line() == 3);
  auto d = parse_error_of("dimension = 2\ndimension = 3\nfields = [\"dx\"]\n");
  CHECK(d.line() == 2);
  CHECK(d.column() == 1);
  auto w = parse_error_of("dimension = 2\nfields = [\"dx\"]\nweights = [1, 2, 3]\n");
  CHECK(w.line() == 3);
  auto s = parse_error_of("dimension = 2\nfields = [\"dx\",\n  \"y*dq\"]\n");
  CHECK(s.line() == 3);
  CHECK(s.column() >= 3);
  auto t = parse_error_of("dimension = 2\nfields = [\"dx\"\n");
  CHECK(t.line() >= 2);
  CHECK_THROWS_AS(parse_structure(gallery / "does_not_exist.toml"), Error);
}

TEST_CASE("structure comments, tables and parameters") {
  auto s = parse_structure_text(
      "# comment\nname = \"w\"\ndimension = 2\nfields = [\n  \"dx\",  # first\n  \"x*dy\",\n]\n"
      "density_log_grad = [\"p/x\", \"0\"]\nweights = \"1,2\"\n[params]\np = 3/2\n");
  CHECK(s.name == "w");
  CHECK(s.frame.size() == 2);
  CHECK(s.density.log_gradient[0] == parse_rational_function("(3/2)/x", 2));
  CHECK(s.weights == WeightVector({1, 2}));
}

TEST_CASE("documented command examples") {
  auto v = invoke({"verdict", (gallery / "heisenberg.toml").string(), "--at", "0,0,0", "--weights", "1,1,2", "--json"});
  CHECK(v.code == ok);
  CHECK(json_of(v)["outputs"]["outcome"] == "BE_FAILS_ALL_K");
  auto s = invoke({"strata", (gallery / "euclidean2.toml").string(), "--json"});
  CHECK(s.code == ok);
  CHECK(json_of(s)["outputs"]["step"] == 1);
  auto n = invoke({"grushin", "np", "--p", "1", "--json"});
  CHECK(n.code == ok);
  CHECK(json_of(n)["outputs"]["N_p"] == "inf");
  auto f = invoke({"filtration", (gallery / "grushin.toml").string(), "--at", "0,0", "--depth", "4", "--json"});
  CHECK(json_of(f)["outputs"]["dims"] == Json::array({1, 2}));
  auto c = invoke({"classify", (gallery / "grushin.toml").string(), "--at", "0,0", "--seed", "42", "--probes", "16", "--radius", "1/8", "--json"});
  CHECK(json_of(c)["outputs"]["verdict"] == "singular");
  CHECK(json_of(c)["seed"] == 42);
  auto b = invoke({"be-deficit", (gallery / "grushin.toml").string(), "--u", "y^2", "--at", "0,0", "--json"});
  CHECK(b.code == ok);
  CHECK(json_of(b)["outputs"]["B"] == "4*x^2*y^2");
  auto r = invoke({"grushin", "ricci", "--p", "3", "--N", "10", "--json"});
  CHECK(r.code == ok);
  CHECK(json_of(r)["outputs"]["ricci_nv"]["dxdx"] == "0");
}

TEST_CASE("exit codes") {
  CHECK(invoke({"frobnicate"}).code == error);
  CHECK(invoke({"strata"}).code == error);
  CHECK(invoke({"strata", (gallery / "grushin.toml").string(), "--bogus"}).code == error);
  CHECK(invoke({"grushin", "psd", "--p", "3", "--N", "9", "--x", "1"}).code == negative);
  CHECK(invoke({"grushin", "psd", "--p", "3", "--N", "10", "--x", "1"}).code == ok);
  CHECK(invoke({"grushin", "np", "--p", "1/2"}).code == error);
  CHECK(invoke({"grushin", "bm", "--p", "1", "--ell", "5", "--half"}).code == error);
  CHECK(invoke({"grushin", "bm", "--p", "0", "--ell", "2", "--grid", "4"}).code == negative);
  CHECK(invoke({"nilpotentize", (gallery / "grushin.toml").string(), "--weights", "1,1"}).code == negative);
  auto bad = std::filesystem::temp_directory_path() / "srkit_bad.toml";
  std::ofstream(bad) << "dimension = 2\nfields = [\"x^-1*dx\"]\n";
  auto e = invoke({"strata", bad.string()});
  CHECK(e.code == error);
  CHECK(e.err.find("line 2") != std::string::npos);
  auto line = std::filesystem::temp_directory_path() / "srkit_line.toml";
  std::ofstream(line) << "dimension = 2\nfields = [\"dx\"]\n";
  CHECK(invoke({"filtration", line.string(), "--depth", "3"}).code == negative);
  CHECK(invoke({"--help"}).code == ok);
}

TEST_CASE("reports embed seed, tolerances and versions") {
  for (auto args : std::vector<std::vector<std::string>>{
           {"strata", (gallery / "heisenberg.toml").string(), "--json"},
           {"grushin", "distance", "--from", "1,0", "--to", "2,0", "--json"},
           {"classify", (gallery / "martinet.toml").string(), "--json"}}) {
    auto j = json_of(invoke(args));
    CHECK(j.contains("seed"));
    CHECK(j.contains("tolerances"));
    CHECK(j["tolerances"].is_object());
    CHECK(j["versions"].contains("srkit"));
    CHECK(j.contains("wall_time"));
    CHECK(j.contains("checks"));
  }
}

TEST_CASE("determinism") {
  for (auto args : std::vector<std::vector<std::string>>{
           {"classify", (gallery / "grushin.toml").string(), "--seed", "7", "--json"},
           {"verdict", (gallery / "engel.toml").string(), "--json"},
           {"grushin", "distance", "--from", "2,0", "--to", "2,1", "--json"},
           {"selfcheck", (gallery / "heisenberg.toml").string(), "--json"}}) {
    auto a = invoke(args), b = invoke(args);
    CHECK(a.code == b.code);
    CHECK(without_wall_time(a.out) == without_wall_time(b.out));
  }
}

TEST_CASE("report round trip is byte-identical") {
  for (auto args : std::vector<std::vector<std::string>>{{"verdict", (gallery / "grushin.toml").string(), "--json"},
                                                         {"grushin", "ricci", "--p", "1/2", "--N", "inf", "--x", "2", "--json"},
                                                         {"grushin", "geodesic", "--cov", "1,1", "--json"}}) {
    auto text = invoke(args).out;
    CHECK(serialize(report_from_json(Json::parse(text))) == text);
  }
}

TEST_CASE("report files and plots") {
  auto dir = std::filesystem::temp_directory_path() / "srkit_cli_test";
  std::filesystem::create_directories(dir);
  auto rep = dir / "geo.json", svg = dir / "geo.svg", csv = dir / "geo.csv";
  auto g = invoke({"grushin", "geodesic", "--from", "1,0", "--cov", "0,1", "--T", "2", "--h", "0.001", "--report", rep.string(),
                "--svg", svg.string(), "--csv", csv.string()});
  CHECK(g.code == ok);
  CHECK(slurp(svg) == slurp(golden / "geodesic.svg"));
  CHECK(slurp(svg).find("<polyline") != std::string::npos);
  CHECK(render_svg(Json::parse(slurp(rep))) == slurp(svg));
  std::ifstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "t,x,y,px,py,H");
  std::size_t rows = 0;
  for (std::string l; std::getline(lines, l);) ++rows;
  CHECK(rows == 2001);

  auto bm = invoke({"grushin", "bm", "--p", "1", "--ell", "10,25,50", "--grid", "4", "--json"});
  CHECK(bm.code == ok);
  auto curve = render_svg(json_of(bm));
  CHECK(curve.find("<polyline") != std::string::npos);
  CHECK(curve.find("margin") != std::string::npos);
  CHECK(json_of(bm)["outputs"]["margin_curve"].size() == 3);

  auto single = invoke({"grushin", "bm", "--p", "1", "--ell", "10", "--grid", "4", "--json"});
  auto cloud = render_svg(json_of(single));
  CHECK(cloud.find("<circle") != std::string::npos);
  CHECK(cloud == render_svg(json_of(single)));

  CHECK_THROWS_AS(render_svg(Json::object()), Error);
  auto strata = invoke({"strata", (gallery / "grushin.toml").string(), "--json"});
  CHECK_THROWS_AS(render_svg(json_of(strata)), Error);
  CHECK(invoke({"strata", (gallery / "grushin.toml").string(), "--svg", (dir / "x.svg").string()}).code == error);
}

TEST_CASE("selfcheck on the gallery") {
  auto r = invoke({"selfcheck", "--json"});
  CHECK(r.code == ok);
  auto j = json_of(r);
  CHECK(j["outputs"]["structures"] == 6);
  CHECK(j["outputs"]["passed"] == j["outputs"]["checks"]);
}
