#include "strauss/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace strauss {

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

} // namespace

std::string emit_svg(const SweepTable& table, const SvgSpec& spec) {
  if (table.rows.empty()) throw std::runtime_error("emit_svg: empty table");
  if (spec.series.empty()) throw std::runtime_error("emit_svg: no series");

  const auto x = table.column(spec.x_column);
  std::vector<std::vector<double>> ys;
  for (const auto& s : spec.series) {
    auto col = table.column(s.column);
    for (double& v : col) v *= s.scale;
    ys.push_back(std::move(col));
  }

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) continue;
    for (const auto& y : ys) {
      if (!std::isfinite(y[i])) continue;
      xmin = std::min(xmin, x[i]);
      xmax = std::max(xmax, x[i]);
      ymin = std::min(ymin, y[i]);
      ymax = std::max(ymax, y[i]);
    }
  }
  if (!(xmin < xmax) || !std::isfinite(ymin))
    throw std::runtime_error("emit_svg: no finite data to plot");
  if (ymin == ymax) {
    ymin -= 1.0;
    ymax += 1.0;
  }

  const double W = 800, H = 500;
  const double ml = 70, mr = 20, mt = 40, mb = 50;
  auto px = [&](double v) {
    return ml + (v - xmin) / (xmax - xmin) * (W - ml - mr);
  };
  auto py = [&](double v) {
    return H - mb - (v - ymin) / (ymax - ymin) * (H - mt - mb);
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\" "
        "font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
  if (!spec.title.empty())
    os << "<text x=\"400\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
       << spec.title << "</text>\n";

  // axes
  os << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr
     << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
     << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << ml << "\" y=\"" << H - mb + 18
     << "\" text-anchor=\"middle\">" << num(xmin) << "</text>\n";
  os << "<text x=\"" << W - mr << "\" y=\"" << H - mb + 18
     << "\" text-anchor=\"end\">" << num(xmax) << "</text>\n";
  os << "<text x=\"" << ml - 6 << "\" y=\"" << H - mb
     << "\" text-anchor=\"end\">" << num(ymin) << "</text>\n";
  os << "<text x=\"" << ml - 6 << "\" y=\"" << mt + 4
     << "\" text-anchor=\"end\">" << num(ymax) << "</text>\n";
  os << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 12
     << "\" text-anchor=\"middle\">" << spec.x_column << "</text>\n";

  if (spec.marker_x && std::isfinite(*spec.marker_x) &&
      *spec.marker_x >= xmin && *spec.marker_x <= xmax) {
    os << "<line x1=\"" << px(*spec.marker_x) << "\" y1=\"" << mt << "\" x2=\""
       << px(*spec.marker_x) << "\" y2=\"" << H - mb
       << "\" stroke=\"black\" stroke-dasharray=\"5,4\"/>\n";
  }

  for (std::size_t s = 0; s < ys.size(); ++s) {
    const char* color = kPalette[s % 8];
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!std::isfinite(x[i]) || !std::isfinite(ys[s][i])) continue;
      if (!first) os << " ";
      os << num(px(x[i])) << "," << num(py(ys[s][i]));
      first = false;
    }
    os << "\"/>\n";
    // legend entry
    const double ly = mt + 16.0 * s;
    os << "<line x1=\"" << W - mr - 150 << "\" y1=\"" << ly << "\" x2=\""
       << W - mr - 130 << "\" y2=\"" << ly << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << W - mr - 124 << "\" y=\"" << ly + 4 << "\">"
       << spec.series[s].column;
    if (spec.series[s].scale != 1.0)
      os << " (x" << num(spec.series[s].scale) << ")";
    os << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

} // namespace strauss
