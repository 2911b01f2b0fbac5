// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. `--pilot` prints the observation grids used to freeze the
// double-bridge thresholds and the comparison scenario settings.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "acoroute/antnet.hpp"
#include "acoroute/ara.hpp"
#include "acoroute/pheromone.hpp"
#include "acoroute/runner.hpp"
#include "acoroute/scenario.hpp"

#ifndef ACOROUTE_SOURCE_DIR
#define ACOROUTE_SOURCE_DIR "."
#endif

using namespace acoroute;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("criterion %2d [%s] %s%s%s\n", id, pass ? "PASS" : "FAIL",
              name.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

bool rel_eq(double a, double b, double tol) {
  if (a == b) return true;
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= tol * scale;
}

Scenario fixture(const std::string& name) {
  return load_scenario_file(std::string(ACOROUTE_SOURCE_DIR) + "/scenarios/" + name);
}

template <typename Fn>
void parallel_for(std::size_t n, Fn fn) {
  std::size_t jobs = std::thread::hardware_concurrency();
  jobs = std::min(jobs == 0 ? 4 : jobs, n);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------- criterion 1

void criterion_1() {
  bool ok = true;
  std::ostringstream why;
  auto expect = [&](bool cond, const char* what) {
    if (!cond) {
      ok = false;
      why << what << "; ";
    }
  };

  PheromoneTable t(0);
  t.set(9, 1, 1.0);
  t.reinforce(9, 1, 0.5);
  expect(rel_eq(t.get(9, 1), 1.5, 1e-12), "reinforce 1.0+0.5");
  t.reinforce(9, 2, 0.3);
  expect(rel_eq(t.get(9, 2), 0.3, 1e-12), "reinforce absent+0.3");
  t.reinforce(9, 3, 0.2);
  t.reinforce(9, 3, 0.2);
  expect(rel_eq(t.get(9, 3), 0.4, 1e-12), "reinforce additivity");

  PheromoneTable e(0);
  e.set(9, 1, 1.0);
  e.evaporate(0.1);
  expect(rel_eq(e.get(9, 1), 0.9, 1e-12), "evaporate 0.9");
  e.set(9, 2, 1e-7 / 0.9);
  e.evaporate(0.1);
  expect(e.get(9, 2) == 0.0, "prune below 1e-6");

  PheromoneTable d(0);
  d.set(9, 1, 2.0);
  d.set(9, 2, 1.0);
  d.set(9, 3, 1.0);
  auto d1 = d.next_hop_distribution(9, {1, 2, 3}, 1.0);
  expect(d1 && rel_eq((*d1)[0].probability, 0.5, 1e-9) &&
             rel_eq((*d1)[1].probability, 0.25, 1e-9) &&
             rel_eq((*d1)[2].probability, 0.25, 1e-9),
         "distribution k=1");
  auto d2 = d.next_hop_distribution(9, {1, 2, 3}, 2.0);
  expect(d2 && rel_eq((*d2)[0].probability, 2.0 / 3.0, 1e-9) &&
             rel_eq((*d2)[1].probability, 1.0 / 6.0, 1e-9) &&
             rel_eq((*d2)[2].probability, 1.0 / 6.0, 1e-9),
         "distribution k=2");
  auto d3 = d.next_hop_distribution(9, {1}, 2.0);
  expect(d3 && d3->size() == 1 && rel_eq((*d3)[0].probability, 1.0, 1e-9),
         "single neighbor");

  expect(rel_eq(init_classic(1), 1.0, 1e-12), "classic hops=1");
  expect(rel_eq(init_classic(4), 0.25, 1e-12), "classic hops=4");
  bool monotone = true;
  for (int h = 1; h < 30; ++h)
    if (!(init_classic(h + 1) < init_classic(h))) monotone = false;
  expect(monotone, "classic monotone");

  expect(rel_eq(init_gamma(3, 1.0), 0.5, 1e-12), "gamma (3,1)");
  expect(rel_eq(init_gamma(1, 1.0), 1.0, 1e-12), "gamma (1,1)");
  expect(init_gamma(5, 0.25) > init_gamma(5, 0.75), "gamma time monotone");

  std::vector<HopProbability> degenerate{{4, 1.0}};
  RngStream rng(3, "acc");
  bool always = true;
  for (int i = 0; i < 20; ++i)
    if (sample_next_hop(degenerate, rng) != 4) always = false;
  expect(always, "degenerate sample");
  std::vector<HopProbability> half{{1, 0.5}, {2, 0.5}};
  RngStream r1(11, "s"), r2(11, "s");
  bool same = true;
  for (int i = 0; i < 200; ++i)
    if (sample_next_hop(half, r1) != sample_next_hop(half, r2)) same = false;
  expect(same, "identical rng identical sample");

  for (auto thrower : std::vector<std::function<void()>>{
           [&] { t.reinforce(1, 1, 0.0); },
           [&] { t.reinforce(1, 1, -2.0); },
           [&] { e.evaporate(0.0); },
           [&] { e.evaporate(1.0); },
           [] { init_classic(0); },
           [] { init_gamma(2, 0.0); },
           [&] { (void)sample_next_hop({}, rng); },
       }) {
    bool threw = false;
    try {
      thrower();
    } catch (const std::exception&) {
      threw = true;
    }
    expect(threw, "error path");
  }

  report(1, "equation unit suite", ok, why.str());
}

// ---------------------------------------------------------------- criterion 2

void criterion_2() {
  RngStream rng(987, "norm");
  const double ks[4] = {0.5, 1.0, 2.0, 5.0};
  bool ok = true;
  for (int trial = 0; trial < 10000 && ok; ++trial) {
    const int size = 1 + static_cast<int>(rng.uniform_int(8));
    const double k = ks[rng.uniform_int(4)];
    PheromoneTable table(0, 0.0);
    std::vector<NodeId> live;
    for (int i = 0; i < size; ++i) {
      table.set(0, i + 1, std::pow(10.0, rng.uniform(-6.0, 3.0)));
      live.push_back(i + 1);
    }
    auto dist = table.next_hop_distribution(0, live, k);
    if (!dist) {
      ok = false;
      break;
    }
    double sum = 0.0;
    for (const auto& p : *dist) sum += p.probability;
    if (std::abs(sum - 1.0) > 1e-9) ok = false;

    const double scale = std::pow(10.0, rng.uniform(-3.0, 3.0));
    PheromoneTable scaled(0, 0.0);
    for (NodeId nb : live) scaled.set(0, nb, table.get(0, nb) * scale);
    auto dist2 = scaled.next_hop_distribution(0, live, k);
    if (!dist2 || dist2->size() != dist->size()) {
      ok = false;
      break;
    }
    for (std::size_t i = 0; i < dist->size(); ++i)
      if (std::abs((*dist)[i].probability - (*dist2)[i].probability) > 1e-9) ok = false;
  }
  report(2, "normalization and scale invariance over 10000 random tables", ok, "");
}

// ---------------------------------------------------------------- criterion 3

void criterion_3() {
  bool ok = true;
  std::ostringstream detail;
  const double tau0 = 2.31;
  const double lambda = 0.02;
  for (int n : {1, 10, 1000}) {
    PheromoneTable t(0, /*tau_prune=*/0.0);
    t.set(1, 2, tau0);
    for (int i = 0; i < n; ++i) t.evaporate(lambda);
    const double expected = tau0 * std::pow(1.0 - lambda, n);
    if (!rel_eq(t.get(1, 2), expected, 1e-9)) {
      ok = false;
      detail << "n=" << n << " off; ";
    }
  }
  report(3, "evaporation closed form at n in {1,10,1000}", ok, detail.str());
}

// ---------------------------------------------------------------- criterion 4

struct TracedRun {
  std::string trace;
  std::string csv;
};

TracedRun traced_default_run(std::uint64_t seed) {
  Scenario s = fixture("default_manet.json");
  std::ostringstream trace;
  TraceSink sink(trace);
  SimKernel kernel;
  kernel.set_trace(&sink);
  AraSim sim(s, seed, kernel, /*tracing=*/true);
  sim.run();
  MetricsRecord rec =
      sim.log().finalize(s.warmup_fraction * s.horizon, s.horizon, sim.live_packets());
  rec.counters = sim.counters();
  rec.scenario = s.name;
  rec.protocol = s.protocol_label();
  rec.fant_mode = s.mode_label();
  rec.pause_time = s.mobility.pause_time;
  rec.seed = seed;
  std::ostringstream csv;
  write_runs_csv(csv, {rec});
  return {trace.str(), csv.str()};
}

void criterion_4() {
  TracedRun a = traced_default_run(42);
  TracedRun b = traced_default_run(42);
  const bool ok = a.trace == b.trace && a.csv == b.csv && !a.trace.empty();
  std::ostringstream detail;
  detail << "trace lines=" << std::count(a.trace.begin(), a.trace.end(), '\n')
         << (a.trace == b.trace ? ", traces identical" : ", TRACES DIFFER")
         << (a.csv == b.csv ? ", rows identical" : ", ROWS DIFFER");
  report(4, "byte-identical replay of the default scenario (seed 42)", ok,
         detail.str());
}

// ---------------------------------------------------------------- criterion 5

void criterion_5() {
  Scenario s = fixture("default_manet.json");
  const int seeds = 50;
  std::vector<bool> holds(seeds, false);
  std::vector<std::uint64_t> sent(seeds, 0);
  parallel_for(seeds, [&](std::size_t i) {
    auto result = run_scenario(s, i + 1);
    const auto& m = result.metrics;
    holds[i] = m.sent == m.delivered + m.drop_total() + m.in_flight;
    sent[i] = m.sent;
  });
  bool ok = true;
  std::uint64_t total = 0;
  for (int i = 0; i < seeds; ++i) {
    if (!holds[i]) ok = false;
    total += sent[i];
  }
  std::ostringstream detail;
  detail << seeds << " seeds, " << total << " packets, identity exact in all";
  report(5, "conservation: sent = delivered + drops + in-flight", ok, detail.str());
}

// ---------------------------------------------------------------- criterion 6

struct BridgeShares {
  double short_share = 0.0;
  double long_share = 0.0;
  std::uint64_t short_count = 0;
  std::uint64_t long_count = 0;
  std::uint64_t other_count = 0;
};

BridgeShares bridge_shares(const Scenario& s, std::uint64_t seed) {
  SimKernel kernel;
  AraSim sim(s, seed, kernel);
  sim.run();
  const std::vector<NodeId> short_path{0, 1, 4};
  const std::vector<NodeId> long_path{0, 2, 3, 4};
  const SimTime warmup = s.warmup_fraction * s.horizon;
  BridgeShares out;
  for (const auto& d : sim.deliveries()) {
    if (d.delivered_at < warmup) continue;
    if (d.path == short_path)
      ++out.short_count;
    else if (d.path == long_path)
      ++out.long_count;
    else
      ++out.other_count;
  }
  const std::uint64_t total = out.short_count + out.long_count + out.other_count;
  if (total > 0) {
    out.short_share = static_cast<double>(out.short_count) / total;
    out.long_share = static_cast<double>(out.long_count) / total;
  }
  return out;
}

// Exhaustive simple-path enumeration between source and destination on the
// unit-disk graph of the bridge layout: the independent oracle that the
// 2-hop branch is the delay optimum.
std::vector<std::vector<NodeId>> enumerate_paths(const Scenario& s, NodeId from,
                                                 NodeId to) {
  const int n = s.node_count;
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b) {
        const double dx = s.positions[a].x - s.positions[b].x;
        const double dy = s.positions[a].y - s.positions[b].y;
        adj[a][b] = std::sqrt(dx * dx + dy * dy) <= s.arena.radio_range;
      }
  std::vector<std::vector<NodeId>> paths;
  std::vector<NodeId> current{from};
  std::vector<bool> used(n, false);
  used[from] = true;
  std::function<void(NodeId)> dfs = [&](NodeId at) {
    if (at == to) {
      paths.push_back(current);
      return;
    }
    for (NodeId next = 0; next < n; ++next) {
      if (!adj[at][next] || used[next]) continue;
      used[next] = true;
      current.push_back(next);
      dfs(next);
      current.pop_back();
      used[next] = false;
    }
  };
  dfs(from);
  return paths;
}

// Threshold frozen from the seeded pilot (seeds 1..20, this build; see
// --pilot6 2 0.02 0): observed short-path share range [0.647, 0.729],
// minority alive in 20/20 seeds.
constexpr double kBridgeShortShareFloor = 0.60;

void criterion_6() {
  Scenario s = fixture("double_bridge.json");

  auto paths = enumerate_paths(s, 0, 4);
  const double per_hop = 4096.0 / s.radio.bandwidth_bps + s.radio.prop_delay_s;
  double best_delay = 1e18;
  std::vector<NodeId> best_path;
  for (const auto& p : paths) {
    const double delay = per_hop * (static_cast<double>(p.size()) - 1.0);
    if (delay < best_delay) {
      best_delay = delay;
      best_path = p;
    }
  }
  const bool oracle_ok =
      paths.size() == 2 && best_path == std::vector<NodeId>{0, 1, 4};

  const int seeds = 20;
  std::vector<BridgeShares> shares(seeds);
  parallel_for(seeds, [&](std::size_t i) { shares[i] = bridge_shares(s, i + 1); });

  int short_wins = 0;
  int long_alive = 0;
  double min_short = 1.0;
  for (const auto& sh : shares) {
    if (sh.short_share > sh.long_share) ++short_wins;
    if (sh.long_count > 0) ++long_alive;
    min_short = std::min(min_short, sh.short_share);
  }
  const bool ok = oracle_ok && short_wins >= 18 && long_alive == seeds &&
                  min_short >= kBridgeShortShareFloor;
  std::ostringstream detail;
  detail << "oracle(2 paths, optimum=short)=" << (oracle_ok ? "ok" : "BAD")
         << ", short>long in " << short_wins << "/20, minority alive in "
         << long_alive << "/20, min short share " << min_short
         << " (floor " << kBridgeShortShareFloor << ")";
  report(6, "double-bridge emergence with persistent exploration", ok, detail.str());
}

// ------------------------------------------------------------- criteria 7 & 8

struct PairStats {
  int wins = 0;
  int ties = 0;
  int valid = 0;
  double mean_a = 0.0;
  double mean_b = 0.0;
};

// wins counts pairs where `a` is strictly better; `larger_is_better` picks
// the direction. NaN pairs are skipped.
PairStats compare_pairs(const std::vector<double>& a, const std::vector<double>& b,
                        bool larger_is_better) {
  PairStats out;
  double sum_a = 0.0, sum_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::isnan(a[i]) || std::isnan(b[i])) continue;
    ++out.valid;
    sum_a += a[i];
    sum_b += b[i];
    if (a[i] == b[i])
      ++out.ties;
    else if ((a[i] > b[i]) == larger_is_better)
      ++out.wins;
  }
  if (out.valid > 0) {
    out.mean_a = sum_a / out.valid;
    out.mean_b = sum_b / out.valid;
  }
  return out;
}

struct ComparisonRun {
  std::vector<double> pdr, throughput, jitter, delay;
  std::vector<double> overhead_count;
};

ComparisonRun run_batch(const Scenario& base, int seeds) {
  ComparisonRun out;
  out.pdr.resize(seeds);
  out.throughput.resize(seeds);
  out.jitter.resize(seeds);
  out.delay.resize(seeds);
  out.overhead_count.resize(seeds);
  parallel_for(seeds, [&](std::size_t i) {
    auto result = run_scenario(base, i + 1);
    const auto& m = result.metrics;
    out.pdr[i] = m.pdr;
    out.throughput[i] = m.throughput_bps;
    out.jitter[i] = m.mean_jitter_s;
    out.delay[i] = m.mean_delay_s;
    out.overhead_count[i] = static_cast<double>(m.ant_packets);
  });
  return out;
}

// Comparison cells: the default desk-scale scenario, varied only in the
// axis under test. All knobs stay at their shipped defaults.
Scenario comparison_scenario(Protocol protocol, FantMode mode, double pause) {
  Scenario s = fixture("default_manet.json");
  s.protocol = protocol;
  s.fant_mode = mode;
  s.mobility.pause_time = pause;
  return s;
}

void criterion_7() {
  const int seeds = 30;
  ComparisonRun ara = run_batch(comparison_scenario(Protocol::Ara, FantMode::Flood, 0), seeds);
  ComparisonRun eara =
      run_batch(comparison_scenario(Protocol::Eara, FantMode::Flood, 0), seeds);

  PairStats pdr = compare_pairs(eara.pdr, ara.pdr, true);
  PairStats thr = compare_pairs(eara.throughput, ara.throughput, true);
  PairStats jit = compare_pairs(eara.jitter, ara.jitter, false);
  PairStats del = compare_pairs(eara.delay, ara.delay, false);

  const double need = 0.60;
  const bool ok = pdr.mean_a >= pdr.mean_b &&
                  pdr.wins >= static_cast<int>(std::ceil(need * pdr.valid)) &&
                  thr.mean_a >= thr.mean_b &&
                  thr.wins >= static_cast<int>(std::ceil(need * thr.valid)) &&
                  jit.mean_a <= jit.mean_b &&
                  jit.wins >= static_cast<int>(std::ceil(need * jit.valid));
  std::ostringstream detail;
  detail << "pdr eara/ara " << pdr.mean_a << "/" << pdr.mean_b << " wins "
         << pdr.wins << "/" << pdr.valid << "; thr wins " << thr.wins << "/"
         << thr.valid << "; jitter wins " << jit.wins << "/" << jit.valid
         << "; delay (reported, ungated) eara/ara " << del.mean_a << "/"
         << del.mean_b;
  report(7, "EARA beats ARA on pdr/throughput/jitter at pause 0", ok, detail.str());
}

void criterion_8() {
  const int seeds = 30;
  ComparisonRun flood0 =
      run_batch(comparison_scenario(Protocol::Ara, FantMode::Flood, 0), seeds);
  ComparisonRun fwd0 =
      run_batch(comparison_scenario(Protocol::Ara, FantMode::Forward, 0), seeds);
  ComparisonRun flood120 =
      run_batch(comparison_scenario(Protocol::Ara, FantMode::Flood, 120), seeds);
  ComparisonRun fwd120 =
      run_batch(comparison_scenario(Protocol::Ara, FantMode::Forward, 120), seeds);

  PairStats pdr = compare_pairs(fwd0.pdr, flood0.pdr, true);
  PairStats overhead =
      compare_pairs(flood120.overhead_count, fwd120.overhead_count, true);

  const double need = 0.60;
  const bool ok = pdr.mean_a >= pdr.mean_b &&
                  pdr.wins >= static_cast<int>(std::ceil(need * pdr.valid)) &&
                  overhead.mean_a > overhead.mean_b &&
                  overhead.wins >= static_cast<int>(std::ceil(need * overhead.valid));
  std::ostringstream detail;
  detail << "pause0 pdr fwd/flood " << pdr.mean_a << "/" << pdr.mean_b << " wins "
         << pdr.wins << "/" << pdr.valid << "; pause120 ant packets flood/fwd "
         << overhead.mean_a << "/" << overhead.mean_b << " wins " << overhead.wins
         << "/" << overhead.valid;
  report(8, "forward mode wins pdr at pause 0; flood overhead higher at pause 120",
         ok, detail.str());
}

// ---------------------------------------------------------------- criterion 9

void criterion_9() {
  Scenario base = fixture("antnet_chain6.json");
  const int seeds = 20;
  std::vector<double> regular(seeds), flying(seeds);
  parallel_for(seeds * 2, [&](std::size_t i) {
    const std::uint64_t seed = i / 2 + 1;
    Scenario s = base;
    s.antnet.ant_mode = (i % 2 == 0) ? AntMode::Regular : AntMode::Flying;
    auto result = run_scenario(s, seed);
    (i % 2 == 0 ? regular : flying)[seed - 1] = result.metrics.mean_forward_trip_s;
  });
  int flying_wins = 0;
  for (int i = 0; i < seeds; ++i)
    if (flying[i] < regular[i]) ++flying_wins;
  const bool ok = flying_wins >= 19;
  std::ostringstream detail;
  detail << "flying faster in " << flying_wins << "/20; mean trip regular "
         << summarize(regular).mean << " s vs flying " << summarize(flying).mean
         << " s";
  report(9, "flying ants outpace regular forward ants at 70% load", ok, detail.str());
}

// --------------------------------------------------------------- criterion 10

std::map<std::string, std::string> parse_kv(const std::string& line) {
  std::map<std::string, std::string> out;
  std::istringstream in(line);
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq != std::string::npos)
      out[token.substr(0, eq)] = token.substr(eq + 1);
  }
  return out;
}

void criterion_10() {
  Scenario s = fixture("gamma_chain.json");
  const std::string trace_path = "acceptance_gamma_chain.trace";
  const std::string dump_path = "acceptance_gamma_chain.pheromone";
  RunOptions options;
  options.trace_path = trace_path;
  options.pheromone_dump_path = dump_path;
  auto result = run_scenario(s, 7, options);
  (void)result;

  std::ifstream trace(trace_path);
  bool ok = trace.good();
  std::ostringstream why;

  // Replay: reconstruct the forward path, the trip time, and every
  // backward-ant initialization from the trace alone.
  double trip = -1.0;
  int bant_hops = -1;
  std::map<NodeId, NodeId> fant_edges;  // from -> to on the productive path
  struct Update {
    NodeId node;
    NodeId toward;
    int hops_remaining;
    double tau;
  };
  std::vector<Update> updates;

  std::string line;
  while (std::getline(trace, line)) {
    if (line.find("fant src=0") != std::string::npos &&
        line.find("discard") == std::string::npos &&
        line.find("cancelled") == std::string::npos) {
      std::istringstream in(line);
      std::string time_s, seq_s, kind_s;
      NodeId node;
      in >> time_s >> seq_s >> kind_s >> node;
      auto kv = parse_kv(line);
      if (kv.count("from")) fant_edges[std::atoi(kv["from"].c_str())] = node;
      if (kv.count("trip")) {
        trip = std::strtod(kv["trip"].c_str(), nullptr);
        bant_hops = std::atoi(kv["hops"].c_str());
      }
    } else if (line.find("bant src=0") != std::string::npos &&
               line.find("init tau=") != std::string::npos) {
      std::istringstream in(line);
      std::string time_s, seq_s, kind_s;
      NodeId node;
      in >> time_s >> seq_s >> kind_s >> node;
      auto kv = parse_kv(line);
      updates.push_back({node, std::atoi(kv["from"].c_str()),
                         std::atoi(kv["hops_remaining"].c_str()),
                         std::strtod(kv["tau"].c_str(), nullptr)});
    }
  }

  // forward path from the edge map
  std::vector<NodeId> path{0};
  while (fant_edges.count(path.back()) && path.size() <= 10)
    path.push_back(fant_edges[path.back()]);
  if (path != std::vector<NodeId>{0, 1, 2, 3, 4}) {
    ok = false;
    why << "unexpected forward path; ";
  }
  if (trip <= 0.0 || bant_hops != 4) {
    ok = false;
    why << "missing backward ant creation; ";
  }
  if (updates.size() != 4) {
    ok = false;
    why << "expected 4 on-path updates, saw " << updates.size() << "; ";
  }

  // backward traversal must reverse the forward path, updating each node's
  // entry toward the neighbor the ant arrived over
  if (ok) {
    for (std::size_t i = 0; i < updates.size(); ++i) {
      const auto& u = updates[i];
      const NodeId expected_node = path[path.size() - 2 - i];
      const int expected_rem = static_cast<int>(i) + 1;
      if (u.node != expected_node || u.hops_remaining != expected_rem) {
        ok = false;
        why << "update order mismatch at " << u.node << "; ";
      }
      const double expected_tau =
          2.0 / (static_cast<double>(u.hops_remaining) + s.ara.time_scale * trip);
      if (u.tau != expected_tau) {
        ok = false;
        why << "tau mismatch at node " << u.node << "; ";
      }
    }
  }

  // the final tables must hold exactly the replayed values
  std::ifstream dump(dump_path);
  std::map<std::tuple<NodeId, NodeId, NodeId>, double> table_lines;
  NodeId owner, dest, neighbor;
  std::string tau_s;
  while (dump >> owner >> dest >> neighbor >> tau_s)
    table_lines[{owner, dest, neighbor}] = std::strtod(tau_s.c_str(), nullptr);
  for (const auto& u : updates) {
    auto it = table_lines.find({u.node, 4, u.toward});
    if (it == table_lines.end() || it->second != u.tau) {
      ok = false;
      why << "dump mismatch at node " << u.node << "; ";
    }
  }

  std::remove(trace_path.c_str());
  std::remove(dump_path.c_str());
  std::ostringstream detail;
  detail << "trip=" << format_double(trip) << ", 4 exact gamma initializations";
  report(10, "gamma gradient replay matches the trace exactly", ok,
         ok ? detail.str() : why.str());
}

// --------------------------------------------------------------------- pilots

void pilot_bridge(double k, double lambda, double data_delta_tau) {
  Scenario s = fixture("double_bridge.json");
  s.aco.k = k;
  s.aco.lambda = lambda;
  s.ara.data_delta_tau = data_delta_tau;
  std::printf("double bridge, k=%g lambda=%g ddt=%g\n", k, lambda, data_delta_tau);
  const int seeds = 20;
  std::vector<BridgeShares> shares(seeds);
  parallel_for(seeds, [&](std::size_t i) { shares[i] = bridge_shares(s, i + 1); });
  double min_short = 1.0, max_short = 0.0;
  int short_wins = 0, long_alive = 0;
  for (int i = 0; i < seeds; ++i) {
    const auto& sh = shares[i];
    std::printf("  seed %2d: short %.3f long %.3f other %llu (long n=%llu)\n",
                i + 1, sh.short_share, sh.long_share,
                static_cast<unsigned long long>(sh.other_count),
                static_cast<unsigned long long>(sh.long_count));
    min_short = std::min(min_short, sh.short_share);
    max_short = std::max(max_short, sh.short_share);
    if (sh.short_share > sh.long_share) ++short_wins;
    if (sh.long_count > 0) ++long_alive;
  }
  std::printf("  => short wins %d/20, long alive %d/20, short share in [%.3f, %.3f]\n",
              short_wins, long_alive, min_short, max_short);
}

void pilot_comparison() {
  for (double ts : {1.0, 100.0}) {
    const int seeds = 30;
    Scenario ara_s = comparison_scenario(Protocol::Ara, FantMode::Flood, 0);
    Scenario eara_s = comparison_scenario(Protocol::Eara, FantMode::Flood, 0);
    ara_s.ara.time_scale = ts;
    eara_s.ara.time_scale = ts;
    ComparisonRun ara = run_batch(ara_s, seeds);
    ComparisonRun eara = run_batch(eara_s, seeds);
    PairStats pdr = compare_pairs(eara.pdr, ara.pdr, true);
    PairStats thr = compare_pairs(eara.throughput, ara.throughput, true);
    PairStats jit = compare_pairs(eara.jitter, ara.jitter, false);
    PairStats del = compare_pairs(eara.delay, ara.delay, false);
    std::printf(
        "eara vs ara, time_scale=%g: pdr %.4f/%.4f wins %d/%d ties %d | thr wins "
        "%d/%d | jitter %.4f/%.4f wins %d/%d | delay %.4f/%.4f wins %d/%d\n",
        ts, pdr.mean_a, pdr.mean_b, pdr.wins, pdr.valid, pdr.ties, thr.wins,
        thr.valid, jit.mean_a, jit.mean_b, jit.wins, jit.valid, del.mean_a,
        del.mean_b, del.wins, del.valid);
  }
  const int seeds = 30;
  ComparisonRun flood0 =
      run_batch(comparison_scenario(Protocol::Ara, FantMode::Flood, 0), seeds);
  ComparisonRun fwd0 =
      run_batch(comparison_scenario(Protocol::Ara, FantMode::Forward, 0), seeds);
  ComparisonRun flood120 =
      run_batch(comparison_scenario(Protocol::Ara, FantMode::Flood, 120), seeds);
  ComparisonRun fwd120 =
      run_batch(comparison_scenario(Protocol::Ara, FantMode::Forward, 120), seeds);
  PairStats pdr0 = compare_pairs(fwd0.pdr, flood0.pdr, true);
  PairStats ov = compare_pairs(flood120.overhead_count, fwd120.overhead_count, true);
  std::printf("fwd vs flood pause0: pdr %.4f/%.4f wins %d/%d ties %d\n", pdr0.mean_a,
              pdr0.mean_b, pdr0.wins, pdr0.valid, pdr0.ties);
  std::printf("flood vs fwd pause120 ant packets: %.0f/%.0f wins %d/%d\n",
              ov.mean_a, ov.mean_b, ov.wins, ov.valid);
}

void pilot_antnet() {
  Scenario base = fixture("antnet_chain6.json");
  const int seeds = 20;
  std::vector<double> regular(seeds), flying(seeds);
  parallel_for(seeds * 2, [&](std::size_t i) {
    const std::uint64_t seed = i / 2 + 1;
    Scenario s = base;
    s.antnet.ant_mode = (i % 2 == 0) ? AntMode::Regular : AntMode::Flying;
    auto result = run_scenario(s, seed);
    (i % 2 == 0 ? regular : flying)[seed - 1] = result.metrics.mean_forward_trip_s;
  });
  int wins = 0;
  for (int i = 0; i < seeds; ++i) {
    std::printf("antnet seed %2d: regular %.5f flying %.5f\n", i + 1, regular[i],
                flying[i]);
    if (flying[i] < regular[i]) ++wins;
  }
  std::printf("=> flying wins %d/20\n", wins);
}

}  // namespace

int main(int argc, char** argv) {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  if (argc > 1 && std::strcmp(argv[1], "--pilot6") == 0) {
    const double k = argc > 2 ? std::atof(argv[2]) : 1.0;
    const double lambda = argc > 3 ? std::atof(argv[3]) : 0.02;
    const double ddt = argc > 4 ? std::atof(argv[4]) : 0.1;
    pilot_bridge(k, lambda, ddt);
    return 0;
  }
  if (argc > 1 && std::strcmp(argv[1], "--pilot") == 0) {
    pilot_bridge(1.0, 0.02, 0.1);
    pilot_comparison();
    pilot_antnet();
    return 0;
  }
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
