#include <algorithm>
#include <cstdio>
#include <map>
#include <vector>

#include "rwre/errors.hpp"
#include "rwre/harness.hpp"

namespace rwre {

namespace {

// Panel geometry, pixels.
constexpr double kWidth = 860.0;
constexpr double kPanelHeight = 340.0;
constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 34.0;
constexpr double kMarginBottom = 44.0;
constexpr double kBoxWidth = 18.0;
constexpr double kPairGap = 22.0;  // centre offset of each box in a pair

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

void tag_line(std::string& s, double x1, double y1, double x2, double y2,
              const std::string& attrs) {
  s += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) +
       "\" y2=\"" + num(y2) + "\" " + attrs + "/>\n";
}

void tag_text(std::string& s, double x, double y, const std::string& anchor,
              const std::string& body) {
  s += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" +
       anchor + "\" font-size=\"11\" font-family=\"sans-serif\">" + body +
       "</text>\n";
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// Draw one box glyph: whisker stem, box, median bar, whisker caps.
void draw_box(std::string& s, const SummaryRow& row, double cx,
              const PanelScale& scale, const char* fill) {
  const double y_q1 = scale.y_of(row.q1);
  const double y_q3 = scale.y_of(row.q3);
  const double y_med = scale.y_of(row.median);
  const double y_wl = scale.y_of(row.whisker_lo);
  const double y_wh = scale.y_of(row.whisker_hi);
  const double half = 0.5 * kBoxWidth;
  tag_line(s, cx, y_wl, cx, y_q1, "stroke=\"#333333\" class=\"whisker\"");
  tag_line(s, cx, y_q3, cx, y_wh, "stroke=\"#333333\" class=\"whisker\"");
  tag_line(s, cx - half * 0.6, y_wl, cx + half * 0.6, y_wl,
           "stroke=\"#333333\" class=\"whisker\"");
  tag_line(s, cx - half * 0.6, y_wh, cx + half * 0.6, y_wh,
           "stroke=\"#333333\" class=\"whisker\"");
  s += "<rect class=\"box\" x=\"" + num(cx - half) + "\" y=\"" + num(y_q3) +
       "\" width=\"" + num(kBoxWidth) + "\" height=\"" + num(y_q1 - y_q3) +
       "\" fill=\"" + fill + "\" stroke=\"#111111\"/>\n";
  tag_line(s, cx - half, y_med, cx + half, y_med,
           "stroke=\"#111111\" stroke-width=\"1.6\" class=\"median\"");
}

}  // namespace

PanelScale panel_scale(const std::vector<SummaryRow>& panel_rows,
                       double theta_star, double y_top, double y_bottom) {
  if (panel_rows.empty()) throw EmptyCell("no summary rows for panel");
  double lo = theta_star, hi = theta_star;
  for (const auto& r : panel_rows) {
    lo = std::min(lo, r.whisker_lo);
    hi = std::max(hi, r.whisker_hi);
  }
  if (hi <= lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.08 * (hi - lo);
  return {lo - pad, hi + pad, y_top, y_bottom};
}

std::string emit_boxplot_svg(const std::vector<SummaryRow>& rows,
                             const std::map<std::string, double>& theta_star) {
  // Panels appear in first-appearance order of the example label.
  std::vector<std::string> panels;
  for (const auto& r : rows)
    if (std::find(panels.begin(), panels.end(), r.example) == panels.end())
      panels.push_back(r.example);

  const double total_height = kPanelHeight * static_cast<double>(panels.size());
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                  num(kWidth) + "\" height=\"" + num(total_height) +
                  "\" viewBox=\"0 0 " + num(kWidth) + " " +
                  num(total_height) + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" +
       num(total_height) + "\" fill=\"#ffffff\"/>\n";

  for (std::size_t pi = 0; pi < panels.size(); ++pi) {
    const std::string& example = panels[pi];
    const auto ts_it = theta_star.find(example);
    if (ts_it == theta_star.end())
      throw ConfigError("no theta* supplied for example " + example);
    const double ts = ts_it->second;

    std::vector<SummaryRow> panel_rows;
    std::vector<long long> ns;
    for (const auto& r : rows) {
      if (r.example != example) continue;
      panel_rows.push_back(r);
      if (std::find(ns.begin(), ns.end(), r.n) == ns.end()) ns.push_back(r.n);
    }
    std::sort(ns.begin(), ns.end());

    const double top = kPanelHeight * static_cast<double>(pi) + kMarginTop;
    const double bottom =
        kPanelHeight * static_cast<double>(pi + 1) - kMarginBottom;
    const double left = kMarginLeft;
    const double right = kWidth - kMarginRight;
    const PanelScale scale = panel_scale(panel_rows, ts, top, bottom);

    tag_text(s, left, top - 12.0, "start", example);
    // axes
    tag_line(s, left, top, left, bottom, "stroke=\"#000000\"");
    tag_line(s, left, bottom, right, bottom, "stroke=\"#000000\"");
    // y ticks
    for (int t = 0; t <= 4; ++t) {
      const double val =
          scale.vmin + (scale.vmax - scale.vmin) * static_cast<double>(t) / 4.0;
      const double y = scale.y_of(val);
      tag_line(s, left - 4.0, y, left, y, "stroke=\"#000000\"");
      tag_text(s, left - 7.0, y + 3.5, "end", short_num(val));
    }
    // reference line at theta*
    const double y_ts = scale.y_of(ts);
    tag_line(s, left, y_ts, right, y_ts,
             "stroke=\"#c0392b\" stroke-dasharray=\"6 4\" "
             "class=\"theta-star\"");

    const double slot =
        (right - left) / static_cast<double>(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const double cx = left + slot * (static_cast<double>(i) + 0.5);
      tag_text(s, cx, bottom + 16.0, "middle", std::to_string(ns[i]));
      for (const auto& r : panel_rows) {
        if (r.n != ns[i]) continue;
        if (r.estimator == "mle")
          draw_box(s, r, cx - 0.5 * kPairGap, scale, "#ffffff");
        else
          draw_box(s, r, cx + 0.5 * kPairGap, scale, "#bfbfbf");
      }
    }
    // legend
    s += "<rect x=\"" + num(right - 190.0) + "\" y=\"" + num(top - 24.0) +
         "\" width=\"12\" height=\"12\" fill=\"#ffffff\" "
         "stroke=\"#111111\"/>\n";
    tag_text(s, right - 174.0, top - 14.0, "start", "mle");
    s += "<rect x=\"" + num(right - 120.0) + "\" y=\"" + num(top - 24.0) +
         "\" width=\"12\" height=\"12\" fill=\"#bfbfbf\" "
         "stroke=\"#111111\"/>\n";
    tag_text(s, right - 104.0, top - 14.0, "start", "moment");
  }
  s += "</svg>\n";
  return s;
}

}  // namespace rwre
