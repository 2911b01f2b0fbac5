#include "acoroute/sim_kernel.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace acoroute {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::PacketHop: return "packet_hop";
    case EventKind::AntHop: return "ant_hop";
    case EventKind::MobilityTick: return "mobility_tick";
    case EventKind::EvaporationTick: return "evaporation_tick";
    case EventKind::SessionStart: return "session_start";
    case EventKind::AntLaunchTick: return "ant_launch_tick";
    case EventKind::StatsSnapshot: return "stats_snapshot";
    case EventKind::BufferTimeout: return "buffer_timeout";
  }
  return "unknown";
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

RngStream::RngStream(std::uint64_t root_seed, std::string_view label)
    : gen_(splitmix64(root_seed ^ fnv1a64(label))) {}

std::uint64_t RngStream::uniform_int(std::uint64_t n) {
  if (n == 0) throw std::logic_error("uniform_int: n must be positive");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = raw();
  } while (x >= limit);
  return x % n;
}

double RngStream::exponential(double rate) {
  if (!(rate > 0.0)) throw std::logic_error("exponential: rate must be positive");
  return -std::log1p(-uniform01()) / rate;
}

void TraceSink::line(SimTime t, std::uint64_t seq, EventKind kind, NodeId node,
                     const std::string& detail) {
  out_ << format_time(t) << ' ' << seq << ' ' << to_string(kind) << ' ' << node
       << ' ' << detail << '\n';
}

std::uint64_t SimKernel::schedule(SimTime fire_at, EventKind kind, NodeId node,
                                  std::string detail, std::function<void()> fn) {
  if (!std::isfinite(fire_at) || fire_at < clock_) {
    throw std::logic_error("schedule: fire_at=" + format_double(fire_at) +
                           " is before now=" + format_double(clock_));
  }
  const std::uint64_t seq = next_seq_++;
  queue_.push(Event{fire_at, seq, kind, node, std::move(detail), std::move(fn)});
  return seq;
}

std::uint64_t SimKernel::run_until(SimTime end) {
  if (!std::isfinite(end) || end < clock_) {
    throw std::logic_error("run_until: end precedes current clock");
  }
  std::uint64_t dispatched = 0;
  while (!queue_.empty() && queue_.top().fire_at <= end) {
    Event ev = queue_.top();
    queue_.pop();
    clock_ = ev.fire_at;
    std::string detail = std::move(ev.detail);
    active_detail_ = &detail;
    if (ev.fn) ev.fn();
    active_detail_ = nullptr;
    if (trace_) trace_->line(ev.fire_at, ev.seq, ev.kind, ev.node, detail);
    ++dispatched;
  }
  clock_ = end;
  return dispatched;
}

void SimKernel::note(const std::string& text) {
  if (!active_detail_) return;
  if (!active_detail_->empty()) active_detail_->append("; ");
  active_detail_->append(text);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_time(SimTime t) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9f", t);
  return buf;
}

}  // namespace acoroute
