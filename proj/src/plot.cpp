#include "ggmtest/plot.hpp"

#include "ggmtest/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

namespace ggm {

namespace {

struct Series {
  std::string procedure;
  std::size_t n = 0;
  std::vector<std::pair<double, double>> points;
};

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fixed2(double v) {
  if (std::fabs(v) < 0.005) v = 0.0;
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  return {buf, res.ptr};
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw Error(ErrorKind::Parse, "not a number: '" + s + "'");
  return v;
}

std::size_t to_count(const std::string& s) {
  std::size_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw Error(ErrorKind::Parse, "not a count: '" + s + "'");
  return v;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? "," : "") + v[k];
  return out;
}

Series& series_for(std::vector<Series>& all, const std::string& proc, std::size_t n, bool by_n) {
  for (auto& s : all)
    if (s.procedure == proc && (!by_n || s.n == n)) return s;
  all.push_back({proc, by_n ? n : 0, {}});
  return all.back();
}

}  // namespace

std::optional<PlotKind> parse_plot_kind(std::string_view name) noexcept {
  if (name == "roc") return PlotKind::Roc;
  if (name == "risk") return PlotKind::Risk;
  if (name == "fn-vs-n") return PlotKind::FnVsN;
  return std::nullopt;
}

std::string render_plot(PlotKind kind, std::string_view csv_text, std::optional<std::size_t> n_filter,
                        const PlotFrame& f) {
  const auto table = parse_csv(csv_text);
  const std::string_view expected = kind == PlotKind::Roc    ? kRocHeader
                                    : kind == PlotKind::Risk ? kRiskHeader
                                                             : kResultsHeader;
  if (table.header.empty()) throw Error(ErrorKind::Parse, "results file is empty");
  if (join(table.header) != expected)
    throw Error(ErrorKind::Parse, "unexpected header '" + join(table.header) + "', expected '" + std::string(expected) + "'");

  const auto width = table.header.size();
  std::vector<Series> series;
  std::set<std::size_t> ns;
  for (const auto& row : table.rows) {
    if (row.size() != width) throw Error(ErrorKind::Parse, "row with " + std::to_string(row.size()) + " fields");
    const auto n = to_count(row[1]);
    if (n_filter && n != *n_filter) continue;
    ns.insert(n);
    const bool by_n = kind != PlotKind::FnVsN;
    auto& s = series_for(series, row[0], n, by_n);
    if (kind == PlotKind::FnVsN) s.points.emplace_back(static_cast<double>(n), to_double(row[8]));
    else s.points.emplace_back(to_double(row[2]), to_double(row[3]));
  }
  if (series.empty()) throw Error(ErrorKind::Parse, "no rows to plot");

  double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
  if (kind != PlotKind::Roc) {
    y_hi = 0.0;
    for (const auto& s : series)
      for (const auto& [x, y] : s.points) y_hi = std::max(y_hi, y);
    if (!(y_hi > 0.0)) y_hi = 1.0;
  }
  if (kind == PlotKind::FnVsN) {
    x_lo = static_cast<double>(*ns.begin());
    x_hi = static_cast<double>(*ns.rbegin());
    if (x_hi <= x_lo) {
      x_lo -= 1.0;
      x_hi += 1.0;
    }
    for (auto& s : series) std::sort(s.points.begin(), s.points.end());
  }

  auto px = [&](double x) { return f.left + (x - x_lo) / (x_hi - x_lo) * f.width; };
  auto py = [&](double y) { return f.top + f.height - (y - y_lo) / (y_hi - y_lo) * f.height; };

  const char* title = kind == PlotKind::Roc ? "ROC" : kind == PlotKind::Risk ? "Risk function" : "Type II errors";
  const char* x_label = kind == PlotKind::Roc ? "1 - specificity" : kind == PlotKind::Risk ? "alpha" : "n";
  const char* y_label = kind == PlotKind::Roc ? "sensitivity" : kind == PlotKind::Risk ? "risk" : "mean FN";

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed2(f.canvas_width) + "\" height=\"" +
         fixed2(f.canvas_height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + fixed2(f.canvas_width) + "\" height=\"" + fixed2(f.canvas_height) +
         "\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fixed2(f.left + f.width / 2) + "\" y=\"20\" text-anchor=\"middle\">" + title + "</text>\n";
  svg += "<rect x=\"" + fixed2(f.left) + "\" y=\"" + fixed2(f.top) + "\" width=\"" + fixed2(f.width) + "\" height=\"" +
         fixed2(f.height) + "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int t = 0; t <= 5; ++t) {
    const double xv = x_lo + (x_hi - x_lo) * t / 5.0;
    const double yv = y_lo + (y_hi - y_lo) * t / 5.0;
    const double bottom = f.top + f.height;
    svg += "<line x1=\"" + fixed2(px(xv)) + "\" y1=\"" + fixed2(bottom) + "\" x2=\"" + fixed2(px(xv)) + "\" y2=\"" +
           fixed2(bottom + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fixed2(px(xv)) + "\" y=\"" + fixed2(bottom + 18) + "\" text-anchor=\"middle\">" +
           format_number(xv) + "</text>\n";
    svg += "<line x1=\"" + fixed2(f.left - 5) + "\" y1=\"" + fixed2(py(yv)) + "\" x2=\"" + fixed2(f.left) + "\" y2=\"" +
           fixed2(py(yv)) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fixed2(f.left - 8) + "\" y=\"" + fixed2(py(yv) + 4) + "\" text-anchor=\"end\">" +
           format_number(yv) + "</text>\n";
  }
  svg += "<text x=\"" + fixed2(f.left + f.width / 2) + "\" y=\"" + fixed2(f.top + f.height + 40) +
         "\" text-anchor=\"middle\">" + x_label + "</text>\n";
  svg += "<text x=\"18\" y=\"" + fixed2(f.top + f.height / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         fixed2(f.top + f.height / 2) + ")\">" + y_label + "</text>\n";

  const bool label_n = kind != PlotKind::FnVsN && ns.size() > 1;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    std::string pts;
    for (const auto& [x, y] : s.points) {
      if (!pts.empty()) pts += ' ';
      pts += fixed2(px(x)) + "," + fixed2(py(y));
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";

    const double ly = f.top + 10 + 18.0 * static_cast<double>(k);
    const double lx = f.left + f.width + 15;
    const auto label = s.procedure + (label_n ? " n=" + std::to_string(s.n) : "");
    svg += "<line x1=\"" + fixed2(lx) + "\" y1=\"" + fixed2(ly) + "\" x2=\"" + fixed2(lx + 20) + "\" y2=\"" + fixed2(ly) +
           "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fixed2(lx + 26) + "\" y=\"" + fixed2(ly + 4) + "\">" + escape(label) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace ggm
