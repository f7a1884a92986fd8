#include "srkit/cli/plot.hpp"

#include "srkit/cli/report.hpp"
#include "srkit/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

namespace srkit::cli {

namespace {

constexpr double width = 640, height = 480, pad = 56;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Frame {
  double x0, x1, y0, y1;

  double sx(double x) const { return pad + (x - x0) / (x1 - x0) * (width - 2 * pad); }
  double sy(double y) const { return height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad); }
};

using Points = std::vector<std::pair<double, double>>;

Frame fit(const Points& pts, std::vector<std::pair<double, double>> extra = {}) {
  Frame f{INFINITY, -INFINITY, INFINITY, -INFINITY};
  auto grow = [&](double x, double y) {
    f.x0 = std::min(f.x0, x);
    f.x1 = std::max(f.x1, x);
    f.y0 = std::min(f.y0, y);
    f.y1 = std::max(f.y1, y);
  };
  for (auto [x, y] : pts) grow(x, y);
  for (auto [x, y] : extra) grow(x, y);
  auto widen = [](double& lo, double& hi) {
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
    double m = 0.05 * (hi - lo);
    lo -= m;
    hi += m;
  };
  widen(f.x0, f.x1);
  widen(f.y0, f.y1);
  return f;
}

std::string header(const std::string& title, const Frame& f, const std::string& xname, const std::string& yname) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" viewBox=\"0 0 640 480\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"white\"/>\n";
  s += "<rect x=\"" + num(pad) + "\" y=\"" + num(pad) + "\" width=\"" + num(width - 2 * pad) + "\" height=\"" +
       num(height - 2 * pad) + "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
  s += "<text x=\"320\" y=\"28\" font-family=\"monospace\" font-size=\"14\" text-anchor=\"middle\">" + title + "</text>\n";
  auto text = [&](double x, double y, const std::string& t, const char* anchor) {
    s += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"" +
         anchor + "\">" + t + "</text>\n";
  };
  text(pad, height - pad + 16, label(f.x0), "start");
  text(width - pad, height - pad + 16, label(f.x1), "end");
  text(pad - 6, height - pad, label(f.y0), "end");
  text(pad - 6, pad + 10, label(f.y1), "end");
  text(width / 2, height - pad + 30, xname, "middle");
  text(pad - 30, height / 2, yname, "middle");
  return s;
}

std::string polyline(const Frame& f, const Points& pts, const char* colour) {
  std::string s = "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) s += ' ';
    s += num(f.sx(pts[i].first)) + "," + num(f.sy(pts[i].second));
  }
  return s + "\"/>\n";
}

Points read_points(const Json& arr) {
  Points pts;
  for (const auto& p : arr) pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  return pts;
}

std::string trajectory_svg(const std::string& title, const Points& pts) {
  if (pts.empty()) throw Error("nothing plottable: empty trajectory");
  Frame f = fit(pts);
  std::string s = header(title, f, "x", "y");
  s += polyline(f, pts, "#1f5fa8");
  s += "<circle cx=\"" + num(f.sx(pts.front().first)) + "\" cy=\"" + num(f.sy(pts.front().second)) + "\" r=\"3\" fill=\"#1f5fa8\"/>\n";
  s += "<circle cx=\"" + num(f.sx(pts.back().first)) + "\" cy=\"" + num(f.sy(pts.back().second)) + "\" r=\"3\" fill=\"#c0392b\"/>\n";
  return s + "</svg>\n";
}

std::string midpoint_svg(const Json& run) {
  Points pts;
  for (const auto& s : run.at("samples"))
    if (s.at("accepted").get<bool>()) pts.emplace_back(s.at("midpoint").at(0).get<double>(), s.at("midpoint").at(1).get<double>());
  if (pts.empty()) throw Error("nothing plottable: no accepted midpoints");
  double reach = run.at("certified_box").at("x_max").get<double>();
  Frame f = fit(pts, {{-reach, 0.0}, {reach, 1.0}});
  std::string s = header("midpoints, ell = " + run.at("ell").get<std::string>(), f, "x", "y");
  s += "<rect x=\"" + num(f.sx(-reach)) + "\" y=\"" + num(f.sy(1)) + "\" width=\"" + num(f.sx(reach) - f.sx(-reach)) +
       "\" height=\"" + num(f.sy(0) - f.sy(1)) + "\" fill=\"none\" stroke=\"#c0392b\" stroke-dasharray=\"4 3\"/>\n";
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
              return num(a.first) == num(b.first) && num(a.second) == num(b.second);
            }),
            pts.end());
  for (auto [x, y] : pts) s += "<circle cx=\"" + num(f.sx(x)) + "\" cy=\"" + num(f.sy(y)) + "\" r=\"2\" fill=\"#1f5fa8\"/>\n";
  return s + "</svg>\n";
}

std::string margin_svg(const Json& curve) {
  Points pts = read_points(curve);
  if (pts.empty()) throw Error("nothing plottable: empty margin curve");
  Frame f = fit(pts);
  std::string s = header("BM margin against ell", f, "ell", "margin");
  s += polyline(f, pts, "#1f5fa8");
  for (auto [x, y] : pts) s += "<circle cx=\"" + num(f.sx(x)) + "\" cy=\"" + num(f.sy(y)) + "\" r=\"3\" fill=\"#1f5fa8\"/>\n";
  return s + "</svg>\n";
}

}  // namespace

std::string render_svg(const Json& report) {
  if (!report.is_object() || !report.contains("command") || !report.contains("outputs"))
    throw Error("nothing plottable: not a report");
  const std::string cmd = report.at("command").get<std::string>();
  const Json& out = report.at("outputs");
  if (cmd == "grushin geodesic") return trajectory_svg("geodesic", read_points(out.at("samples")));
  if (cmd == "grushin distance") return trajectory_svg("minimizing arc", read_points(out.at("path")));
  if (cmd == "grushin bm") {
    const Json& runs = out.at("runs");
    if (runs.size() > 1) return margin_svg(out.at("margin_curve"));
    if (runs.size() == 1) return midpoint_svg(runs.at(0));
  }
  throw Error("nothing plottable in a '" + cmd + "' report");
}

void emit_plot(const Json& report, const std::filesystem::path& path) { write_atomically(path, render_svg(report)); }

}  // namespace srkit::cli
