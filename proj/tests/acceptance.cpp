// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "nocsec/adversary.hpp"
#include "nocsec/aont.hpp"
#include "nocsec/error.hpp"
#include "nocsec/quasigroup.hpp"
#include "nocsec/rng.hpp"
#include "nocsec/routing.hpp"
#include "nocsec/simulator.hpp"

using namespace nocsec;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double limit_seconds, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > limit_seconds) {
    o.pass = false;
    o.detail += "; over time limit";
  }
  if (!o.pass) ++failures;
  std::printf("[%s] %d %s: %s (%.2f s, limit %.0f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs,
              limit_seconds);
  std::fflush(stdout);
}

std::string pct(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f%%", p * 100.0);
  return buf;
}

Outcome quasigroup_correctness() {
  std::uint64_t checked = 0;
  for (std::uint32_t p : {3u, 5u, 17u, 257u}) {
    const auto params = AontParams::for_prime(p);
    const std::uint32_t n = params.n;
    for (std::uint64_t k = 0; k < 100; ++k) {
      const auto q = Quasigroup::generate(random_key(mix_seed(p, k), params), params);
      const auto t = q.table();
      const auto d = q.dual_table();
      for (std::uint32_t i = 0; i < n; ++i) {
        std::vector<bool> row(n + 1);
        std::vector<bool> col(n + 1);
        for (std::uint32_t j = 0; j < n; ++j) {
          if (row[t[i][j]] || col[t[j][i]]) return {false, "not a Latin square at p=" + std::to_string(p)};
          row[t[i][j]] = true;
          col[t[j][i]] = true;
          const Symbol a = i + 1;
          const Symbol b = j + 1;
          if (d[i][t[i][j] - 1] != b || t[i][d[i][j] - 1] != b) {
            return {false, "dual identity broken at p=" + std::to_string(p) + " a=" + std::to_string(a)};
          }
          ++checked;
        }
      }
    }
  }
  return {true, std::to_string(checked) + " pairs over 400 keys"};
}

Outcome aont_roundtrip() {
  Rng rng(2024);
  int done = 0;
  for (std::uint32_t p : {5u, 17u}) {
    const auto params = AontParams::for_prime(p);
    for (int t = 0; t < 1000; ++t) {
      std::vector<std::uint8_t> msg(1 + rng.below(256));
      for (auto& b : msg) b = static_cast<std::uint8_t>(rng.next());
      if (inverse(transform(msg, params, rng.next())) != msg) {
        return {false, "mismatch at p=" + std::to_string(p) + " len=" + std::to_string(msg.size())};
      }
      ++done;
    }
  }
  return {true, std::to_string(done) + " messages byte-exact"};
}

Outcome all_or_nothing() {
  const auto params = AontParams::for_prime(5);
  const std::vector<std::uint8_t> msg{0xC5, 0x3A};
  const auto ct = transform(msg, params, 99);
  if (ct.s != 2) return {false, "expected s=2"};
  bool pass = true;
  std::ostringstream os;
  for (std::size_t w = 0; w < ct.blocks.size(); ++w) {
    const auto plains = enumerate_consistent_plaintexts(capture(ct, {w}));
    const std::set<std::vector<std::uint8_t>> distinct(plains.begin(), plains.end());
    const bool has_true = distinct.count(msg) == 1;
    os << (w ? ", " : "") << "withhold block " << w + 1 << ": " << distinct.size() << "/256 distinct consistent"
       << (has_true ? "" : " (original missing)");
    pass = pass && distinct.size() == 256;
  }
  return {pass, os.str()};
}

Outcome disjointness() {
  std::uint64_t plans = 0;
  for (const MeshDims d : {MeshDims{4, 4}, MeshDims{8, 8}}) {
    for (int s = 0; s < d.size(); ++s) {
      for (int t = 0; t < d.size(); ++t) {
        if (s == t) continue;
        const Coord src = d.coord(s);
        const Coord dst = d.coord(t);
        const auto reg = regions(src, dst, d);
        if (reg.blue.empty() || reg.red.empty()) {
          return {false, "degraded fallback at " + to_string(src) + "->" + to_string(dst)};
        }
        for (const Coord& b : reg.blue) {
          for (const Coord& r : reg.red) {
            const auto plan = plan_routes_with_pivots(src, dst, d, b, r);
            const auto ib = intermediates(plan.path_blue, src, dst);
            const auto ir = intermediates(plan.path_red, src, dst);
            for (const Coord& c : ib) {
              if (std::find(ir.begin(), ir.end(), c) != ir.end()) {
                return {false, "shared router " + to_string(c) + " for " + to_string(src) + "->" + to_string(dst)};
              }
            }
            ++plans;
          }
        }
      }
    }
  }
  return {true, std::to_string(plans) + " (pair, pivot pair) plans on 4x4 and 8x8, zero shared routers"};
}

Outcome eavesdropping() {
  struct Row {
    MeshDims dims;
    Defense def;
    int k;
    double lo;
    double hi;
  };
  const std::vector<Row> rows{
      {{4, 4}, Defense::Aont, 1, 0.0, 0.0},    {{8, 8}, Defense::Aont, 1, 0.0, 0.0},
      {{4, 4}, Defense::None, 1, 0.10, 0.12},  {{8, 8}, Defense::None, 1, 0.06, 0.08},
      {{4, 4}, Defense::None, 2, 0.38, 0.45},  {{4, 4}, Defense::Aont, 2, 0.0, 0.06},
      {{8, 8}, Defense::Aont, 2, 0.0, 0.025},
  };
  bool pass = true;
  std::ostringstream os;
  std::string convention;
  for (const Row& r : rows) {
    const auto rep = evaluate(r.dims, r.def, r.k);
    const bool ok = rep.probability >= r.lo && rep.probability <= r.hi;
    pass = pass && ok;
    os << r.dims.width << 'x' << r.dims.height << '/' << to_string(r.def) << '/' << r.k << '=' << pct(rep.probability)
       << (ok ? " ok" : " OUT [" + pct(r.lo) + "," + pct(r.hi) + "]") << "; ";
    convention = rep.convention;
  }
  os << "convention: " << convention;
  return {pass, os.str()};
}

Outcome simulator_ordering() {
  const SimConfig config = load_config(std::string(NOCSEC_CONFIG_DIR) + "/uniform8x8.cfg");
  const auto rows = compare_modes(config);
  const auto again = compare_modes(config);
  const double none = rows[0].stats.avg_delay_cycles;
  const double aont = rows[1].stats.avg_delay_cycles;
  const double aes = rows[2].stats.avg_delay_cycles;
  bool deterministic = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    deterministic = deterministic && rows[i].stats == again[i].stats;
  }
  const bool ordered = none < aont && aont < aes;
  const bool aont_band = rows[1].ratio_vs_none >= 2.0 && rows[1].ratio_vs_none <= 4.0;
  const bool aes_band = rows[2].ratio_vs_none > 15.0;
  bool clean = true;
  for (const auto& r : rows) clean = clean && r.stats.undelivered == 0 && r.stats.payload_mismatches == 0;
  char buf[256];
  std::snprintf(buf, sizeof buf, "avg none=%.2f aont=%.2f aes=%.2f; aont/none=%.3f aes/none=%.3f; rerun %s", none,
                aont, aes, rows[1].ratio_vs_none, rows[2].ratio_vs_none,
                deterministic ? "hash-identical" : "DIFFERS");
  return {ordered && aont_band && aes_band && deterministic && clean, buf};
}

Outcome zero_load() {
  Rng rng(7);
  SimConfig c;
  const int per_hop = c.router_pipeline_cycles + c.link_cycles;
  for (int t = 0; t < 20; ++t) {
    Simulator sim(c);
    const Coord a = c.dims.coord(static_cast<int>(rng.below(64)));
    Coord b = a;
    while (b == a) b = c.dims.coord(static_cast<int>(rng.below(64)));
    const auto bytes = static_cast<std::uint32_t>(1 + rng.below(256));
    sim.inject(0, a, b, bytes);
    while (!sim.drained()) sim.step();
    const int hops = std::abs(a.x - b.x) + std::abs(a.y - b.y);
    const int flits = sim.flits_for_bits(std::size_t{bytes} * 8);
    const std::uint64_t expect = static_cast<std::uint64_t>(hops * per_hop + flits - 1);
    if (sim.completed().at(0).delay() != expect) {
      return {false, to_string(a) + "->" + to_string(b) + " " + std::to_string(bytes) + "B: got " +
                         std::to_string(sim.completed()[0].delay()) + " expected " + std::to_string(expect)};
    }
  }
  return {true, "20 random (src,dst,size) triples exact"};
}

Outcome conservation() {
  SimConfig c;
  c.security_mode = SecurityMode::Aont;
  c.traffic.injection_rate = 0.05;
  c.warmup_cycles = 0;
  c.measure_cycles = 100000;
  c.verify_payloads = false;
  c.drain_limit_cycles = 10000000;
  const auto st = run(c);
  const bool ok = st.messages_injected == st.messages_delivered && st.flits_injected == st.flits_delivered &&
                  st.undelivered == 0 && st.path_mismatches == 0;
  return {ok, std::to_string(st.messages_injected) + " messages / " + std::to_string(st.flits_injected) +
                  " flits injected, " + std::to_string(st.messages_delivered) + " / " +
                  std::to_string(st.flits_delivered) + " delivered, drained at cycle " + std::to_string(st.cycles) +
                  ", no deadlock"};
}

}  // namespace

int main() {
  criterion(1, "quasigroup tables and duals", 10, quasigroup_correctness);
  criterion(2, "transform round trip", 5, aont_roundtrip);
  criterion(3, "all-or-nothing enumeration at p=5, s=2", 1, all_or_nothing);
  criterion(4, "path disjointness", 300, disjointness);
  criterion(5, "eavesdropping probabilities", 600, eavesdropping);
  criterion(6, "simulator mode ordering", 120, simulator_ordering);
  criterion(7, "zero-load latency formula", 60, zero_load);
  criterion(8, "conservation and deadlock freedom under saturation", 600, conservation);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
