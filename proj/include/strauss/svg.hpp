#pragma once

#include <optional>
#include <string>
#include <vector>

#include "strauss/sweep_table.hpp"

namespace strauss {

/// One plotted series: a table column against the x column, optionally
/// multiplied by a scale factor (for combining quantities of different
/// magnitude in one plot).
struct SvgSeries {
  std::string column;
  double scale = 1.0;
};

struct SvgSpec {
  std::string x_column;
  std::vector<SvgSeries> series;
  std::optional<double> marker_x; ///< vertical dashed marker (e.g. a boundary)
  std::string title;
};

/// Standalone SVG line plot (800x500 viewBox) with axes, one polyline per
/// series, and a legend. Rows with non-finite cells are skipped per series.
/// Throws std::runtime_error for an empty table or data error.
std::string emit_svg(const SweepTable& table, const SvgSpec& spec);

} // namespace strauss
