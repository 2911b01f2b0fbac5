#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "acoroute/sim_kernel.hpp"

namespace acoroute {

enum class DropCategory {
  BufferOverflow,
  BufferTimeout,
  NoRoute,
  Loop,
  LinkFailure,
};
const char* to_string(DropCategory category);
constexpr int kDropCategoryCount = 5;

// Per-run protocol counters exported by the routing engines.
struct ProtocolCounters {
  std::uint64_t fants_sent = 0;         // FANT generations (incl. retries)
  std::uint64_t fants_forwarded = 0;    // unicast forwardings (forward mode)
  std::uint64_t fants_flood_copies = 0; // one per broadcast reception
  std::uint64_t bants_sent = 0;
  std::uint64_t bants_dropped = 0;
  std::uint64_t bant_cap_hits = 0;
  std::uint64_t fant_discards = 0;      // duplicate / ttl / loop discards
  std::uint64_t discoveries = 0;
  std::uint64_t retries = 0;
  std::uint64_t ants_launched = 0;      // antnet forward ants
  std::uint64_t ants_completed = 0;
  std::uint64_t ants_killed = 0;
};

// One run's measured results. Values that need at least one delivery are
// NaN-marked when undefined; `empty` is set when the run sent nothing.
struct MetricsRecord {
  std::string scenario;
  std::string protocol;   // ara | eara | antnet
  std::string fant_mode;  // flood | forward (manet), regular | flying (antnet)
  double pause_time = 0.0;
  std::uint64_t seed = 0;

  bool empty = false;

  // Measurement window (post warm-up).
  double pdr = 0.0;
  double throughput_bps = 0.0;
  double mean_delay_s = 0.0;
  double mean_jitter_s = 0.0;
  double overhead_ratio = 0.0;  // ant bits / delivered data bits

  // Whole-run values.
  double pdr_full = 0.0;
  double throughput_full_bps = 0.0;
  double mean_delay_full_s = 0.0;
  double mean_jitter_full_s = 0.0;

  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::uint64_t drops[kDropCategoryCount] = {0, 0, 0, 0, 0};
  std::uint64_t in_flight = 0;  // live packets when the run ended
  std::uint64_t ant_packets = 0;
  std::uint64_t ant_bits = 0;

  ProtocolCounters counters;

  // antnet mode only: forward-ant trip statistics. NaN when unused.
  double mean_forward_trip_s = 0.0;

  std::uint64_t drop_total() const {
    std::uint64_t total = 0;
    for (auto d : drops) total += d;
    return total;
  }
};

// Raw per-packet accounting for one run. Every packet id is reported as
// sent exactly once and reaches at most one terminal state; violations are
// hard errors since they mean the accounting itself is broken.
class DeliveryLog {
 public:
  void record_send(std::uint64_t packet_id, int flow, SimTime created_at,
                   std::int64_t payload_bits);
  void record_delivery(std::uint64_t packet_id, SimTime delivered_at);
  void record_drop(std::uint64_t packet_id, DropCategory category);
  void record_ant_packet(std::int64_t bits);

  std::uint64_t sent() const { return sent_; }
  std::uint64_t delivered() const { return delivered_; }
  std::uint64_t dropped(DropCategory category) const;
  std::uint64_t drop_total() const;
  std::uint64_t ant_packets() const { return ant_packets_; }
  std::uint64_t ant_bits() const { return ant_bits_; }

  // pdr / throughput / delay / jitter over [window_start, window_end] plus
  // whole-run values; conservation fields filled from the counters, with
  // in_flight supplied by the caller from live simulation state.
  MetricsRecord finalize(SimTime window_start, SimTime window_end,
                         std::uint64_t in_flight) const;

  struct PacketInfo {
    int flow = -1;
    SimTime created_at = 0.0;
    SimTime delivered_at = -1.0;  // < 0: not delivered
    std::int64_t payload_bits = 0;
    int state = 0;  // 0 sent, 1 delivered, 2 dropped
  };
  const std::map<std::uint64_t, PacketInfo>& packets() const { return packets_; }

 private:
  std::map<std::uint64_t, PacketInfo> packets_;
  std::uint64_t sent_ = 0;
  std::uint64_t delivered_ = 0;
  std::uint64_t drops_[kDropCategoryCount] = {0, 0, 0, 0, 0};
  std::uint64_t ant_packets_ = 0;
  std::uint64_t ant_bits_ = 0;
};

// Group statistics across seeded runs.
struct AggregateMetric {
  double mean = 0.0;
  double stddev = 0.0;
  double ci95_half_width = 0.0;
  int count = 0;
};

struct AggregateRow {
  std::string protocol;
  std::string fant_mode;
  double pause_time = 0.0;
  int run_count = 0;
  AggregateMetric pdr;
  AggregateMetric throughput_bps;
  AggregateMetric mean_delay_s;
  AggregateMetric mean_jitter_s;
  AggregateMetric overhead_ratio;
};

// Mean / sample stddev / Student-t 95% half-width over `values`.
// Half-width is 0 for a single value; NaN inputs are skipped.
AggregateMetric summarize(const std::vector<double>& values);

// Groups records by (protocol, fant_mode, pause_time), sorted by key.
// Throws std::invalid_argument on empty input.
std::vector<AggregateRow> aggregate(const std::vector<MetricsRecord>& records);

}  // namespace acoroute
