#include "acoroute/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace acoroute {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}

const char* to_string(DropCategory category) {
  switch (category) {
    case DropCategory::BufferOverflow: return "buffer_overflow";
    case DropCategory::BufferTimeout: return "buffer_timeout";
    case DropCategory::NoRoute: return "no_route";
    case DropCategory::Loop: return "loop";
    case DropCategory::LinkFailure: return "link_failure";
  }
  return "unknown";
}

void DeliveryLog::record_send(std::uint64_t packet_id, int flow,
                              SimTime created_at, std::int64_t payload_bits) {
  if (payload_bits <= 0)
    throw std::invalid_argument("record_send: payload_bits must be positive");
  auto [it, inserted] = packets_.try_emplace(packet_id);
  if (!inserted)
    throw std::logic_error("record_send: packet reported twice");
  it->second.flow = flow;
  it->second.created_at = created_at;
  it->second.payload_bits = payload_bits;
  ++sent_;
}

void DeliveryLog::record_delivery(std::uint64_t packet_id, SimTime delivered_at) {
  auto it = packets_.find(packet_id);
  if (it == packets_.end())
    throw std::logic_error("record_delivery: packet never sent");
  if (it->second.state != 0)
    throw std::logic_error("record_delivery: packet already terminal");
  if (delivered_at < it->second.created_at)
    throw std::logic_error("record_delivery: delivered before created");
  it->second.delivered_at = delivered_at;
  it->second.state = 1;
  ++delivered_;
}

void DeliveryLog::record_drop(std::uint64_t packet_id, DropCategory category) {
  auto it = packets_.find(packet_id);
  if (it == packets_.end())
    throw std::logic_error("record_drop: packet never sent");
  if (it->second.state != 0)
    throw std::logic_error("record_drop: packet already terminal");
  it->second.state = 2;
  ++drops_[static_cast<int>(category)];
}

void DeliveryLog::record_ant_packet(std::int64_t bits) {
  if (bits <= 0) throw std::invalid_argument("record_ant_packet: bits must be positive");
  ++ant_packets_;
  ant_bits_ += static_cast<std::uint64_t>(bits);
}

std::uint64_t DeliveryLog::dropped(DropCategory category) const {
  return drops_[static_cast<int>(category)];
}

std::uint64_t DeliveryLog::drop_total() const {
  std::uint64_t total = 0;
  for (auto d : drops_) total += d;
  return total;
}

namespace {

struct WindowStats {
  double pdr = kNan;
  double throughput_bps = 0.0;
  double mean_delay = kNan;
  double mean_jitter = kNan;
};

WindowStats window_stats(const std::map<std::uint64_t, DeliveryLog::PacketInfo>& packets,
                         SimTime ws, SimTime we) {
  WindowStats out;
  std::uint64_t sent_in_window = 0;
  std::uint64_t delivered_of_window = 0;
  std::uint64_t delivered_bits_in_window = 0;
  double delay_sum = 0.0;
  std::uint64_t delay_count = 0;
  // flow -> deliveries (delivered_at, delay) inside the window
  std::map<int, std::vector<std::pair<SimTime, double>>> flows;

  for (const auto& [id, info] : packets) {
    if (info.created_at >= ws && info.created_at <= we) {
      ++sent_in_window;
      if (info.state == 1) ++delivered_of_window;
    }
    if (info.state == 1 && info.delivered_at >= ws && info.delivered_at <= we) {
      delivered_bits_in_window += static_cast<std::uint64_t>(info.payload_bits);
      const double delay = info.delivered_at - info.created_at;
      delay_sum += delay;
      ++delay_count;
      flows[info.flow].emplace_back(info.delivered_at, delay);
    }
  }

  if (sent_in_window > 0)
    out.pdr = static_cast<double>(delivered_of_window) / static_cast<double>(sent_in_window);
  if (we > ws)
    out.throughput_bps = static_cast<double>(delivered_bits_in_window) / (we - ws);
  if (delay_count > 0) out.mean_delay = delay_sum / static_cast<double>(delay_count);

  // Jitter: per flow, mean absolute difference of consecutive end-to-end
  // delays in arrival order; then mean over flows with at least two
  // deliveries.
  double flow_jitter_sum = 0.0;
  int flow_jitter_count = 0;
  for (auto& [flow, deliveries] : flows) {
    if (deliveries.size() < 2) continue;
    std::stable_sort(deliveries.begin(), deliveries.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    double sum = 0.0;
    for (std::size_t i = 1; i < deliveries.size(); ++i)
      sum += std::abs(deliveries[i].second - deliveries[i - 1].second);
    flow_jitter_sum += sum / static_cast<double>(deliveries.size() - 1);
    ++flow_jitter_count;
  }
  if (flow_jitter_count > 0)
    out.mean_jitter = flow_jitter_sum / static_cast<double>(flow_jitter_count);
  return out;
}

}  // namespace

MetricsRecord DeliveryLog::finalize(SimTime window_start, SimTime window_end,
                                    std::uint64_t in_flight) const {
  if (!(window_end > window_start))
    throw std::invalid_argument("finalize: window_end must exceed window_start");

  MetricsRecord rec;
  rec.sent = sent_;
  rec.delivered = delivered_;
  for (int i = 0; i < kDropCategoryCount; ++i) rec.drops[i] = drops_[i];
  rec.in_flight = in_flight;
  rec.ant_packets = ant_packets_;
  rec.ant_bits = ant_bits_;
  rec.empty = (sent_ == 0);
  rec.mean_forward_trip_s = kNan;

  const WindowStats window = window_stats(packets_, window_start, window_end);
  rec.pdr = std::isnan(window.pdr) ? 0.0 : window.pdr;
  rec.throughput_bps = window.throughput_bps;
  rec.mean_delay_s = window.mean_delay;
  rec.mean_jitter_s = window.mean_jitter;

  const WindowStats full = window_stats(packets_, 0.0, window_end);
  rec.pdr_full = std::isnan(full.pdr) ? 0.0 : full.pdr;
  rec.throughput_full_bps = full.throughput_bps;
  rec.mean_delay_full_s = full.mean_delay;
  rec.mean_jitter_full_s = full.mean_jitter;

  std::uint64_t delivered_bits = 0;
  for (const auto& [id, info] : packets_)
    if (info.state == 1) delivered_bits += static_cast<std::uint64_t>(info.payload_bits);
  rec.overhead_ratio = delivered_bits > 0
                           ? static_cast<double>(ant_bits_) / static_cast<double>(delivered_bits)
                           : kNan;
  return rec;
}

namespace {

// Two-sided 95% Student-t quantiles, df 1..30 then selected larger dfs.
double t95(int df) {
  static const double table[30] = {
      12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
      2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
      2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (df < 1) throw std::invalid_argument("t95: df must be >= 1");
  if (df <= 30) return table[df - 1];
  if (df <= 40) return 2.021;
  if (df <= 60) return 2.000;
  if (df <= 120) return 1.980;
  return 1.960;
}

}  // namespace

AggregateMetric summarize(const std::vector<double>& values) {
  AggregateMetric out;
  std::vector<double> clean;
  for (double v : values)
    if (!std::isnan(v)) clean.push_back(v);
  out.count = static_cast<int>(clean.size());
  if (clean.empty()) {
    out.mean = kNan;
    out.stddev = kNan;
    out.ci95_half_width = kNan;
    return out;
  }
  double sum = 0.0;
  for (double v : clean) sum += v;
  out.mean = sum / clean.size();
  if (clean.size() == 1) {
    out.stddev = 0.0;
    out.ci95_half_width = 0.0;
    return out;
  }
  double ss = 0.0;
  for (double v : clean) ss += (v - out.mean) * (v - out.mean);
  out.stddev = std::sqrt(ss / (clean.size() - 1));
  out.ci95_half_width =
      t95(static_cast<int>(clean.size()) - 1) * out.stddev / std::sqrt(double(clean.size()));
  return out;
}

std::vector<AggregateRow> aggregate(const std::vector<MetricsRecord>& records) {
  if (records.empty()) throw std::invalid_argument("aggregate: no records");

  std::map<std::tuple<std::string, std::string, double>, std::vector<const MetricsRecord*>>
      groups;
  for (const auto& rec : records)
    groups[{rec.protocol, rec.fant_mode, rec.pause_time}].push_back(&rec);

  std::vector<AggregateRow> rows;
  for (const auto& [key, members] : groups) {
    AggregateRow row;
    row.protocol = std::get<0>(key);
    row.fant_mode = std::get<1>(key);
    row.pause_time = std::get<2>(key);
    row.run_count = static_cast<int>(members.size());
    auto collect = [&](auto getter) {
      std::vector<double> values;
      for (const auto* rec : members) values.push_back(getter(*rec));
      return summarize(values);
    };
    row.pdr = collect([](const MetricsRecord& r) { return r.pdr; });
    row.throughput_bps = collect([](const MetricsRecord& r) { return r.throughput_bps; });
    row.mean_delay_s = collect([](const MetricsRecord& r) { return r.mean_delay_s; });
    row.mean_jitter_s = collect([](const MetricsRecord& r) { return r.mean_jitter_s; });
    row.overhead_ratio = collect([](const MetricsRecord& r) { return r.overhead_ratio; });
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace acoroute
