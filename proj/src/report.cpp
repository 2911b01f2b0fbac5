#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

#include "acoroute/runner.hpp"

namespace acoroute {

namespace {

std::string csv_num(double v) { return format_double(v); }

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

void write_runs_csv(std::ostream& out, const std::vector<MetricsRecord>& records) {
  out << "scenario,protocol,fant_mode,pause_time,seed,pdr,throughput_bps,"
         "mean_delay_s,mean_jitter_s,overhead_ratio,drops_buffer_overflow,"
         "drops_buffer_timeout,drops_no_route,drops_loop,drops_link_failure,"
         "sent,delivered,in_flight,ant_packets,ant_bits,pdr_full,"
         "throughput_full_bps,mean_delay_full_s,mean_jitter_full_s,fants_sent,"
         "fants_forwarded,fants_flood_copies,bants_sent,discoveries,retries,"
         "mean_forward_trip_s\n";
  for (const auto& r : records) {
    out << r.scenario << ',' << r.protocol << ',' << r.fant_mode << ','
        << csv_num(r.pause_time) << ',' << r.seed << ',' << csv_num(r.pdr) << ','
        << csv_num(r.throughput_bps) << ',' << csv_num(r.mean_delay_s) << ','
        << csv_num(r.mean_jitter_s) << ',' << csv_num(r.overhead_ratio) << ','
        << r.drops[0] << ',' << r.drops[1] << ',' << r.drops[2] << ','
        << r.drops[3] << ',' << r.drops[4] << ',' << r.sent << ',' << r.delivered
        << ',' << r.in_flight << ',' << r.ant_packets << ',' << r.ant_bits << ','
        << csv_num(r.pdr_full) << ',' << csv_num(r.throughput_full_bps) << ','
        << csv_num(r.mean_delay_full_s) << ',' << csv_num(r.mean_jitter_full_s)
        << ',' << r.counters.fants_sent << ',' << r.counters.fants_forwarded << ','
        << r.counters.fants_flood_copies << ',' << r.counters.bants_sent << ','
        << r.counters.discoveries << ',' << r.counters.retries << ','
        << csv_num(r.mean_forward_trip_s) << '\n';
  }
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << "protocol,fant_mode,pause_time,runs";
  for (const char* metric : {"pdr", "throughput_bps", "mean_delay_s",
                             "mean_jitter_s", "overhead_ratio"})
    out << ',' << metric << "_mean," << metric << "_stddev," << metric << "_ci95";
  out << '\n';
  for (const auto& row : rows) {
    out << row.protocol << ',' << row.fant_mode << ',' << csv_num(row.pause_time)
        << ',' << row.run_count;
    for (const auto* m : {&row.pdr, &row.throughput_bps, &row.mean_delay_s,
                          &row.mean_jitter_s, &row.overhead_ratio})
      out << ',' << csv_num(m->mean) << ',' << csv_num(m->stddev) << ','
          << csv_num(m->ci95_half_width);
    out << '\n';
  }
}

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b"};

void write_chart_svg(std::ostream& out, const std::vector<AggregateRow>& rows,
                     const std::string& title, const std::string& y_label,
                     const AggregateMetric AggregateRow::*metric) {
  // series key: (protocol, fant_mode) -> points (pause_time, mean, ci)
  struct Point {
    double x, y, ci;
  };
  std::map<std::pair<std::string, std::string>, std::vector<Point>> series;
  double x_min = 0, x_max = 0, y_max = 0;
  bool any = false;
  for (const auto& row : rows) {
    const AggregateMetric& m = row.*metric;
    if (std::isnan(m.mean)) continue;
    series[{row.protocol, row.fant_mode}].push_back(
        {row.pause_time, m.mean, m.ci95_half_width});
    if (!any) {
      x_min = x_max = row.pause_time;
      any = true;
    }
    x_min = std::min(x_min, row.pause_time);
    x_max = std::max(x_max, row.pause_time);
    y_max = std::max(y_max, m.mean + (std::isnan(m.ci95_half_width) ? 0 : m.ci95_half_width));
  }
  if (x_max == x_min) x_max = x_min + 1;
  if (y_max <= 0) y_max = 1;
  y_max *= 1.05;

  const double width = 640, height = 440;
  const double left = 80, right = width - 160, top = 50, bottom = height - 60;
  auto sx = [&](double x) { return left + (x - x_min) / (x_max - x_min) * (right - left); };
  auto sy = [&](double y) { return bottom - y / y_max * (bottom - top); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height
      << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << px((left + right) / 2) << "\" y=\"28\" font-size=\"16\" "
         "text-anchor=\"middle\" font-family=\"sans-serif\">" << title << "</text>\n";

  // axes
  out << "<line x1=\"" << px(left) << "\" y1=\"" << px(bottom) << "\" x2=\""
      << px(right) << "\" y2=\"" << px(bottom) << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << px(left) << "\" y1=\"" << px(top) << "\" x2=\"" << px(left)
      << "\" y2=\"" << px(bottom) << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x_min + (x_max - x_min) * i / 4.0;
    const double yv = y_max * i / 4.0;
    out << "<line x1=\"" << px(sx(xv)) << "\" y1=\"" << px(bottom) << "\" x2=\""
        << px(sx(xv)) << "\" y2=\"" << px(bottom + 5) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << px(sx(xv)) << "\" y=\"" << px(bottom + 20)
        << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">"
        << tick_label(xv) << "</text>\n";
    out << "<line x1=\"" << px(left - 5) << "\" y1=\"" << px(sy(yv)) << "\" x2=\""
        << px(left) << "\" y2=\"" << px(sy(yv)) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << px(left - 8) << "\" y=\"" << px(sy(yv) + 4)
        << "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">"
        << tick_label(yv) << "</text>\n";
  }
  out << "<text x=\"" << px((left + right) / 2) << "\" y=\"" << px(height - 15)
      << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\">"
         "pause time (s)</text>\n";
  out << "<text x=\"20\" y=\"" << px((top + bottom) / 2)
      << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "transform=\"rotate(-90 20 " << px((top + bottom) / 2) << ")\">" << y_label
      << "</text>\n";

  int color_index = 0;
  double legend_y = top + 10;
  for (auto& [key, points] : series) {
    const char* color = kPalette[color_index % 6];
    ++color_index;
    std::sort(points.begin(), points.end(),
              [](const Point& a, const Point& b) { return a.x < b.x; });
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& p : points) out << px(sx(p.x)) << ',' << px(sy(p.y)) << ' ';
    out << "\"/>\n";
    for (const auto& p : points) {
      out << "<circle cx=\"" << px(sx(p.x)) << "\" cy=\"" << px(sy(p.y))
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
      if (!std::isnan(p.ci) && p.ci > 0) {
        const double y0 = sy(std::max(0.0, p.y - p.ci));
        const double y1 = sy(p.y + p.ci);
        out << "<line x1=\"" << px(sx(p.x)) << "\" y1=\"" << px(y0) << "\" x2=\""
            << px(sx(p.x)) << "\" y2=\"" << px(y1) << "\" stroke=\"" << color
            << "\"/>\n";
        for (double ye : {y0, y1})
          out << "<line x1=\"" << px(sx(p.x) - 4) << "\" y1=\"" << px(ye)
              << "\" x2=\"" << px(sx(p.x) + 4) << "\" y2=\"" << px(ye)
              << "\" stroke=\"" << color << "\"/>\n";
      }
    }
    out << "<rect x=\"" << px(right + 12) << "\" y=\"" << px(legend_y - 9)
        << "\" width=\"12\" height=\"12\" fill=\"" << color << "\"/>\n";
    out << "<text x=\"" << px(right + 30) << "\" y=\"" << px(legend_y + 1)
        << "\" font-size=\"12\" font-family=\"sans-serif\">" << key.first << '/'
        << key.second << "</text>\n";
    legend_y += 20;
  }
  out << "</svg>\n";
}

void write_file(const std::filesystem::path& path,
                const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  body(out);
}

}  // namespace

void emit_report(const std::vector<MetricsRecord>& records,
                 const std::string& out_dir) {
  if (records.empty()) throw std::invalid_argument("emit_report: no records");
  std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec && !std::filesystem::is_directory(dir))
    throw std::runtime_error("cannot create output directory: " + out_dir);

  const auto rows = aggregate(records);
  write_file(dir / "runs.csv", [&](std::ostream& o) { write_runs_csv(o, records); });
  write_file(dir / "aggregate.csv",
             [&](std::ostream& o) { write_aggregate_csv(o, rows); });
  write_file(dir / "chart_pdr.svg", [&](std::ostream& o) {
    write_chart_svg(o, rows, "Packet delivery ratio vs pause time", "PDR",
                    &AggregateRow::pdr);
  });
  write_file(dir / "chart_throughput.svg", [&](std::ostream& o) {
    write_chart_svg(o, rows, "Throughput vs pause time", "throughput (bit/s)",
                    &AggregateRow::throughput_bps);
  });
  write_file(dir / "chart_delay.svg", [&](std::ostream& o) {
    write_chart_svg(o, rows, "End-to-end delay vs pause time", "mean delay (s)",
                    &AggregateRow::mean_delay_s);
  });
  write_file(dir / "chart_jitter.svg", [&](std::ostream& o) {
    write_chart_svg(o, rows, "Jitter vs pause time", "mean jitter (s)",
                    &AggregateRow::mean_jitter_s);
  });
}

}  // namespace acoroute
