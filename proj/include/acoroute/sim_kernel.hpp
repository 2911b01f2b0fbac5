#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <queue>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace acoroute {

// Simulated seconds. Always finite, never decreasing within a run.
using SimTime = double;
using NodeId = int;

enum class EventKind {
  PacketHop,
  AntHop,
  MobilityTick,
  EvaporationTick,
  SessionStart,
  AntLaunchTick,
  StatsSnapshot,
  BufferTimeout,
};

const char* to_string(EventKind kind);

// Seeded random stream. (seed, label) fully determines the value sequence
// on every platform: raw values come straight from mt19937_64 and all
// distributions are derived here rather than via std:: distribution
// objects, whose output is implementation-defined.
class RngStream {
 public:
  RngStream(std::uint64_t root_seed, std::string_view label);

  std::uint64_t raw() { return gen_(); }

  // [0, 1)
  double uniform01() { return (raw() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // [0, n), unbiased
  std::uint64_t uniform_int(std::uint64_t n);

  double exponential(double rate);

 private:
  std::mt19937_64 gen_;
};

// Line-delimited event trace: one line per dispatched event with fields
// (time, seq, kind, node, detail).
class TraceSink {
 public:
  explicit TraceSink(std::ostream& out) : out_(out) {}
  void line(SimTime t, std::uint64_t seq, EventKind kind, NodeId node,
            const std::string& detail);

 private:
  std::ostream& out_;
};

// Deterministic discrete-event engine. Events are dispatched in
// nondecreasing (fire_at, seq) order; seq is the insertion counter, so
// same-time events fire FIFO. Single-threaded per run.
class SimKernel {
 public:
  SimKernel() = default;
  SimKernel(const SimKernel&) = delete;
  SimKernel& operator=(const SimKernel&) = delete;

  SimTime now() const { return clock_; }

  // Throws std::logic_error when fire_at < now() or not finite: scheduling
  // into the past is a programming bug, not a recoverable condition.
  std::uint64_t schedule(SimTime fire_at, EventKind kind, NodeId node,
                         std::string detail, std::function<void()> fn);

  // Dispatches every event with fire_at <= end, advances the clock to
  // `end`, returns the number dispatched.
  std::uint64_t run_until(SimTime end);

  void set_trace(TraceSink* sink) { trace_ = sink; }

  // Appends to the detail of the event currently being dispatched, so a
  // handler can record what it actually did on the same trace line.
  void note(const std::string& text);

  std::size_t pending() const { return queue_.size(); }

 private:
  struct Event {
    SimTime fire_at;
    std::uint64_t seq;
    EventKind kind;
    NodeId node;
    std::string detail;
    std::function<void()> fn;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
      return a.seq > b.seq;
    }
  };

  SimTime clock_ = 0.0;
  std::uint64_t next_seq_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  TraceSink* trace_ = nullptr;
  std::string* active_detail_ = nullptr;
};

// Stable shortest-round-trip-ish formatting used everywhere output must be
// byte-reproducible: %.17g always round-trips a double exactly.
std::string format_double(double v);
// Fixed-point seconds for trace timestamps.
std::string format_time(SimTime t);

}  // namespace acoroute
