#include "plot.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "infoplane/error.h"

namespace infoplane::cli {

using nlohmann::json;

namespace {

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

double Get(const json& obj, const char* key) {
  if (!obj.contains(key) || !obj.at(key).is_number()) {
    throw InputError(std::string("report is missing numeric field '") + key + "'");
  }
  return obj.at(key).get<double>();
}

bool IsClassification(const json& report) {
  return report.at("plane").at("kind").get<std::string>() == "classification";
}

std::vector<std::pair<double, double>> Pairs(const json& list) {
  std::vector<std::pair<double, double>> out;
  if (!list.is_array()) return out;
  for (const auto& p : list) {
    if (p.is_array() && p.size() == 2) {
      out.emplace_back(p[0].get<double>(), p[1].get<double>());
    } else if (p.is_object()) {
      out.emplace_back(Get(p, "utility"), Get(p, "leakage"));
    }
  }
  return out;
}

}  // namespace

PlotTransform TransformForReport(const json& report) {
  if (!report.contains("plane")) throw InputError("report has no plane");
  const json& plane = report.at("plane");
  PlotTransform t;
  if (IsClassification(report)) {
    t.utility_max = Get(plane, "h_y");
    t.leakage_max = Get(plane, "h_a");
  } else {
    t.utility_max = Get(plane, "var_y");
    t.leakage_max = Get(plane, "var_a");
  }
  if (report.contains("points")) {
    for (const auto& p : report.at("points")) {
      t.utility_max = std::max(t.utility_max, Get(p, "utility"));
      t.leakage_max = std::max(t.leakage_max, Get(p, "leakage"));
    }
  }
  t.utility_max = t.utility_max > 0.0 ? t.utility_max * 1.05 : 1.0;
  t.leakage_max = t.leakage_max > 0.0 ? t.leakage_max * 1.05 : 1.0;
  return t;
}

std::string RenderSvg(const json& report) {
  const PlotTransform t = TransformForReport(report);
  const bool cls = IsClassification(report);
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Fmt(kSvgWidth)
      << "\" height=\"" << Fmt(kSvgHeight) << "\" viewBox=\"0 0 " << Fmt(kSvgWidth) << ' '
      << Fmt(kSvgHeight) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << Fmt(kSvgWidth) << "\" height=\""
      << Fmt(kSvgHeight) << "\" fill=\"white\"/>\n";

  // Region: explicit outline if present, else the bounding rectangle.
  std::vector<std::pair<double, double>> region;
  if (report.contains("region")) region = Pairs(report.at("region"));
  if (region.empty() && report.contains("vertices") &&
      report.at("vertices").contains("polygon")) {
    region = Pairs(report.at("vertices").at("polygon"));
  }
  if (region.empty()) {
    const json& plane = report.at("plane");
    const double u = cls ? Get(plane, "h_y") : Get(plane, "var_y");
    const double l = cls ? Get(plane, "h_a") : Get(plane, "var_a");
    region = {{0.0, 0.0}, {u, 0.0}, {u, l}, {0.0, l}};
  }
  svg << "<polygon class=\"region\" points=\"";
  for (std::size_t i = 0; i < region.size(); ++i) {
    svg << (i ? " " : "") << Fmt(t.X(region[i].first)) << ',' << Fmt(t.Y(region[i].second));
  }
  svg << "\" fill=\"#d8ead3\" stroke=\"#7aa56f\" stroke-width=\"1\"/>\n";

  // Axes and ticks.
  svg << "<line x1=\"" << Fmt(t.left) << "\" y1=\"" << Fmt(t.top + t.height) << "\" x2=\""
      << Fmt(t.left + t.width) << "\" y2=\"" << Fmt(t.top + t.height)
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << Fmt(t.left) << "\" y1=\"" << Fmt(t.top) << "\" x2=\""
      << Fmt(t.left) << "\" y2=\"" << Fmt(t.top + t.height) << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double u = t.utility_max * k / 5.0;
    const double l = t.leakage_max * k / 5.0;
    svg << "<text x=\"" << Fmt(t.X(u)) << "\" y=\"" << Fmt(t.top + t.height + 16)
        << "\" text-anchor=\"middle\">" << Fmt(u) << "</text>\n";
    svg << "<text x=\"" << Fmt(t.left - 6) << "\" y=\"" << Fmt(t.Y(l) + 4)
        << "\" text-anchor=\"end\">" << Fmt(l) << "</text>\n";
  }
  svg << "<text x=\"" << Fmt(t.left + t.width / 2) << "\" y=\"" << Fmt(kSvgHeight - 12)
      << "\" text-anchor=\"middle\">" << (cls ? "I(Y;Z) [bits]" : "VarE[Y|Z]") << "</text>\n";
  svg << "<text x=\"16\" y=\"" << Fmt(t.top + t.height / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << Fmt(t.top + t.height / 2)
      << ")\">" << (cls ? "I(A;Z) [bits]" : "VarE[A|Z]") << "</text>\n";

  if (report.contains("frontier")) {
    const auto frontier = Pairs(report.at("frontier"));
    if (frontier.size() >= 2) {
      svg << "<polyline class=\"frontier\" points=\"";
      for (std::size_t i = 0; i < frontier.size(); ++i) {
        svg << (i ? " " : "") << Fmt(t.X(frontier[i].first)) << ','
            << Fmt(t.Y(frontier[i].second));
      }
      svg << "\" fill=\"none\" stroke=\"#2a7d2a\" stroke-width=\"2\"/>\n";
    }
  }

  if (report.contains("vertices")) {
    const json& v = report.at("vertices");
    const json& plane = report.at("plane");
    const double full = cls ? Get(plane, "h_y") : Get(plane, "var_y");
    if (v.contains("e_y") && v.contains("e_a")) {
      const std::pair<double, double> marks[2] = {{Get(v, "e_y"), 0.0},
                                                  {full, Get(v, "e_a")}};
      const char* labels[2] = {"E_Y*", "E_A*"};
      for (int k = 0; k < 2; ++k) {
        svg << "<circle class=\"vertex\" cx=\"" << Fmt(t.X(marks[k].first)) << "\" cy=\""
            << Fmt(t.Y(marks[k].second)) << "\" r=\"4\" fill=\"black\"/>\n";
        svg << "<text x=\"" << Fmt(t.X(marks[k].first) + 6) << "\" y=\""
            << Fmt(t.Y(marks[k].second) - 6) << "\">" << labels[k] << "</text>\n";
      }
    }
  }

  if (report.contains("points")) {
    for (const auto& p : report.at("points")) {
      const double x = t.X(Get(p, "utility"));
      const double y = t.Y(Get(p, "leakage"));
      const std::string name = p.contains("name") ? p.at("name").get<std::string>() : "";
      svg << "<circle class=\"point\" cx=\"" << Fmt(x) << "\" cy=\"" << Fmt(y)
          << "\" r=\"4\" fill=\"#c0392b\"/>\n";
      svg << "<text x=\"" << Fmt(x + 6) << "\" y=\"" << Fmt(y + 14) << "\">" << Escape(name)
          << "</text>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace infoplane::cli
