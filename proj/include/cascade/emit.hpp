#pragma once

// Result emission. Always writes CSV; optionally renders one self-contained
// SVG line chart per CSV. All numeric output uses 10 significant digits and
// '\n' newlines, and rows are sorted by (policy name, numeric key), so a
// given ExperimentResults value always serializes to identical bytes.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "cascade/harness.hpp"

namespace cascade {

inline std::string format_double10(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

namespace detail {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (x, y)
};

inline const char* series_color(std::size_t i) {
  static constexpr const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                            "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  return palette[i % (sizeof(palette) / sizeof(palette[0]))];
}

inline void write_svg_chart(const std::filesystem::path& file, const std::string& title,
                            const std::string& x_label, const std::string& y_label,
                            const std::vector<Series>& series) {
  constexpr double width = 800, height = 500;
  constexpr double left = 80, right = 160, top = 40, bottom = 60;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  bool first = true;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (first) {
        x_min = x_max = x;
        y_min = y_max = y;
        first = false;
      } else {
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
        y_min = std::min(y_min, y);
        y_max = std::max(y_max, y);
      }
    }
  }
  if (x_max == x_min) x_max = x_min + 1;
  if (y_max == y_min) y_max = y_min + 1;
  y_min = std::min(y_min, 0.0);

  auto sx = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
  auto sy = [&](double y) { return top + plot_h - (y - y_min) / (y_max - y_min) * plot_h; };

  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << title << "</text>\n";

  // axes
  out << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
      << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
      << top + plot_h << "\" stroke=\"black\"/>\n";
  constexpr int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double fx = x_min + (x_max - x_min) * i / ticks;
    const double fy = y_min + (y_max - y_min) * i / ticks;
    out << "<line x1=\"" << sx(fx) << "\" y1=\"" << top + plot_h << "\" x2=\"" << sx(fx)
        << "\" y2=\"" << top + plot_h + 5 << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << sx(fx) << "\" y=\"" << top + plot_h + 20
        << "\" text-anchor=\"middle\" font-size=\"11\">" << format_double10(fx) << "</text>\n"
        << "<line x1=\"" << left - 5 << "\" y1=\"" << sy(fy) << "\" x2=\"" << left << "\" y2=\""
        << sy(fy) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << left - 8 << "\" y=\"" << sy(fy) + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << format_double10(fy) << "</text>\n";
  }
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 15
      << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n"
      << "<text x=\"20\" y=\"" << top + plot_h / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 20 "
      << top + plot_h / 2 << ")\">" << y_label << "</text>\n";

  // series + legend
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    out << "<polyline fill=\"none\" stroke=\"" << series_color(i) << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : s.points) out << sx(x) << "," << sy(y) << " ";
    out << "\"/>\n";
    for (const auto& [x, y] : s.points) {
      out << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"2.5\" fill=\""
          << series_color(i) << "\"/>\n";
    }
    const double ly = top + 18 + 20 * static_cast<double>(i);
    out << "<line x1=\"" << left + plot_w + 15 << "\" y1=\"" << ly << "\" x2=\""
        << left + plot_w + 45 << "\" y2=\"" << ly << "\" stroke=\"" << series_color(i)
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << left + plot_w + 52 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">"
        << s.label << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace detail

// Writes regret_vs_horizon.csv plus one cumulative_T<horizon>.csv per
// horizon (and matching .svg files when emit_svg is set). Returns the paths
// written.
inline std::vector<std::filesystem::path> emit_results(const ExperimentResults& results,
                                                       const std::filesystem::path& out_dir,
                                                       bool emit_svg) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;

  std::vector<const CellResult*> cells;
  cells.reserve(results.cells.size());
  for (const auto& cell : results.cells) cells.push_back(&cell);
  std::sort(cells.begin(), cells.end(), [](const CellResult* a, const CellResult* b) {
    if (a->policy != b->policy) return a->policy < b->policy;
    return a->horizon < b->horizon;
  });

  {
    const auto file = out_dir / "regret_vs_horizon.csv";
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << "policy,horizon,mean_final_regret,stderr,runs\n";
    for (const CellResult* cell : cells) {
      const AggregatePoint& last = cell->curve.points.back();
      out << cell->policy << "," << cell->horizon << "," << format_double10(last.mean) << ","
          << format_double10(last.std_err) << "," << last.runs << "\n";
    }
    written.push_back(file);
  }

  std::vector<std::int64_t> horizons;
  for (const CellResult* cell : cells) {
    if (std::find(horizons.begin(), horizons.end(), cell->horizon) == horizons.end()) {
      horizons.push_back(cell->horizon);
    }
  }
  std::sort(horizons.begin(), horizons.end());

  for (std::int64_t horizon : horizons) {
    const auto file = out_dir / ("cumulative_T" + std::to_string(horizon) + ".csv");
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << "policy,t,mean_cum_regret,stderr,runs\n";
    for (const CellResult* cell : cells) {
      if (cell->horizon != horizon) continue;
      for (const AggregatePoint& point : cell->curve.points) {
        out << cell->policy << "," << point.t << "," << format_double10(point.mean) << ","
            << format_double10(point.std_err) << "," << point.runs << "\n";
      }
    }
    written.push_back(file);
  }

  if (emit_svg) {
    {
      std::vector<detail::Series> series;
      for (const CellResult* cell : cells) {
        if (series.empty() || series.back().label != cell->policy) {
          series.push_back({cell->policy, {}});
        }
        series.back().points.emplace_back(static_cast<double>(cell->horizon),
                                          cell->curve.points.back().mean);
      }
      const auto file = out_dir / "regret_vs_horizon.svg";
      detail::write_svg_chart(file, "Final regret vs horizon", "horizon T", "mean final regret",
                              series);
      written.push_back(file);
    }
    for (std::int64_t horizon : horizons) {
      std::vector<detail::Series> series;
      for (const CellResult* cell : cells) {
        if (cell->horizon != horizon) continue;
        detail::Series s{cell->policy, {}};
        for (const AggregatePoint& point : cell->curve.points) {
          s.points.emplace_back(static_cast<double>(point.t), point.mean);
        }
        series.push_back(std::move(s));
      }
      const auto file = out_dir / ("cumulative_T" + std::to_string(horizon) + ".svg");
      detail::write_svg_chart(file, "Cumulative regret, T=" + std::to_string(horizon), "t",
                              "mean cumulative regret", series);
      written.push_back(file);
    }
  }
  return written;
}

}  // namespace cascade
