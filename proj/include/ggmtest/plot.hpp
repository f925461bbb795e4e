#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace ggm {

enum class PlotKind { Roc, Risk, FnVsN };

std::optional<PlotKind> parse_plot_kind(std::string_view name) noexcept;

// Plot area inside the SVG canvas, in pixels.
struct PlotFrame {
  double left = 70.0;
  double top = 40.0;
  double width = 440.0;
  double height = 360.0;
  double canvas_width = 700.0;
  double canvas_height = 470.0;
};

/// Standalone SVG line chart, one <polyline> per series. Input is the CSV
/// written by the experiment command: roc.csv for Roc, risk.csv for Risk,
/// results.csv for FnVsN. `n_filter` keeps only rows with that n.
/// Throws ErrorKind::Parse on a header mismatch or when no rows remain.
std::string render_plot(PlotKind kind, std::string_view csv_text, std::optional<std::size_t> n_filter = std::nullopt,
                        const PlotFrame& frame = {});

}  // namespace ggm
