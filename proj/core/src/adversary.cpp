#include "nocsec/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <thread>

#include "nocsec/error.hpp"

namespace nocsec {
namespace {

constexpr std::uint64_t kExhaustiveLimit = 1u << 16;

std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

bool contains(const std::vector<Coord>& set, Coord c) {
  return std::find(set.begin(), set.end(), c) != set.end();
}

/// Placements of `k` attackers among `m` candidates that touch both sets.
/// `both` is |A ∩ B|, `only_a`/`only_b` the exclusive parts.
std::uint64_t covering_placements(std::uint64_t m, int k, std::uint64_t both, std::uint64_t only_a,
                                  std::uint64_t only_b) {
  if (k == 1) return both;
  return choose(m, 2) - choose(m - both, 2) + only_a * only_b;
}

/// Expected covering placements for one (src,dst) pair, averaged over pivots.
double pair_interceptions(MeshDims dims, Coord src, Coord dst, Defense defense, int k) {
  const auto m = static_cast<std::uint64_t>(dims.size() - 2);
  if (defense == Defense::None) {
    const auto hops = intermediates(route_xy(src, dst), src, dst).size();
    return static_cast<double>(covering_placements(m, k, hops, 0, 0));
  }
  const RegionAssignment reg = regions(src, dst, dims);
  if (reg.blue.empty() || reg.red.empty()) {
    // Degraded plan: both parts share the XY path.
    const auto hops = intermediates(route_xy(src, dst), src, dst).size();
    return static_cast<double>(covering_placements(m, k, hops, 0, 0));
  }
  std::uint64_t total = 0;
  for (const Coord& pb : reg.blue) {
    for (const Coord& pr : reg.red) {
      const RoutePlan plan = plan_routes_with_pivots(src, dst, dims, pb, pr);
      const auto blue = intermediates(plan.path_blue, src, dst);
      const auto red = intermediates(plan.path_red, src, dst);
      std::uint64_t both = 0;
      for (const Coord& c : blue) both += contains(red, c);
      total += covering_placements(m, k, both, blue.size() - both, red.size() - both);
    }
  }
  return static_cast<double>(total) / static_cast<double>(reg.blue.size() * reg.red.size());
}

}  // namespace

const char* to_string(Defense d) noexcept { return d == Defense::None ? "none" : "aont"; }

Defense parse_defense(const std::string& text) {
  if (text == "none") return Defense::None;
  if (text == "aont") return Defense::Aont;
  throw ParameterError("defense must be 'none' or 'aont', got '" + text + "'");
}

double interception_probability(const EavesdropScenario& sc) {
  if (!sc.dims.contains(sc.src) || !sc.dims.contains(sc.dst) || sc.src == sc.dst) {
    throw ParameterError("invalid source/destination");
  }
  if (sc.attackers.empty() || sc.attackers.size() > 2) throw ParameterError("need 1 or 2 attackers");
  for (std::size_t i = 0; i < sc.attackers.size(); ++i) {
    const Coord a = sc.attackers[i];
    if (!sc.dims.contains(a) || a == sc.src || a == sc.dst) {
      throw ParameterError("attacker " + to_string(a) + " is not a valid in-transit router");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (sc.attackers[j] == a) throw ParameterError("duplicate attacker placement");
    }
  }
  auto touches = [&](const std::vector<Coord>& inter) {
    return std::any_of(sc.attackers.begin(), sc.attackers.end(), [&](Coord a) { return contains(inter, a); });
  };

  if (sc.defense == Defense::None) {
    return touches(intermediates(route_xy(sc.src, sc.dst), sc.src, sc.dst)) ? 1.0 : 0.0;
  }
  const RegionAssignment reg = regions(sc.src, sc.dst, sc.dims);
  if (reg.blue.empty() || reg.red.empty()) {
    return touches(intermediates(route_xy(sc.src, sc.dst), sc.src, sc.dst)) ? 1.0 : 0.0;
  }
  std::uint64_t hits = 0;
  for (const Coord& pb : reg.blue) {
    for (const Coord& pr : reg.red) {
      const RoutePlan plan = plan_routes_with_pivots(sc.src, sc.dst, sc.dims, pb, pr);
      if (touches(intermediates(plan.path_blue, sc.src, sc.dst)) &&
          touches(intermediates(plan.path_red, sc.src, sc.dst))) {
        ++hits;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(reg.blue.size() * reg.red.size());
}

EavesdropReport evaluate(MeshDims dims, Defense defense, int attacker_count, unsigned threads) {
  if (attacker_count != 1 && attacker_count != 2) throw ParameterError("attacker count must be 1 or 2");
  dims = MeshDims::make(dims.width, dims.height);
  const int nodes = dims.size();

  // One slot per source node so the final sum has a fixed order.
  std::vector<double> per_source(nodes, 0.0);
  auto work = [&](int first, int stride) {
    for (int s = first; s < nodes; s += stride) {
      double acc = 0.0;
      for (int d = 0; d < nodes; ++d) {
        if (d == s) continue;
        acc += pair_interceptions(dims, dims.coord(s), dims.coord(d), defense, attacker_count);
      }
      per_source[s] = acc;
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(nodes));
  if (threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, static_cast<int>(t), static_cast<int>(threads));
  }

  EavesdropReport report;
  report.dims = dims;
  report.defense = defense;
  report.attackers = attacker_count;
  const auto pairs = static_cast<std::uint64_t>(nodes) * (nodes - 1);
  report.total_scenarios = pairs * choose(nodes - 2, attacker_count);
  report.intercepted = std::accumulate(per_source.begin(), per_source.end(), 0.0);
  report.probability = report.intercepted / static_cast<double>(report.total_scenarios);
  report.convention =
      "attackers placed on the N-2 routers other than src and dst; a router intercepts iff it lies strictly "
      "between src and dst on a realized path; aont requires the attacker set to cover both paths, averaged "
      "uniformly over all admissible pivot pairs";
  return report;
}

CapturedBlocks capture(const AontCiphertext& ct, const std::vector<std::size_t>& withheld) {
  CapturedBlocks out;
  out.params = ct.params;
  out.s = ct.s;
  out.orig_len_bytes = ct.orig_len_bytes;
  out.blocks.assign(ct.blocks.begin(), ct.blocks.end());
  for (std::size_t idx : withheld) {
    if (idx >= out.blocks.size()) throw ParameterError("withheld block index out of range");
    out.blocks[idx].reset();
  }
  return out;
}

std::uint64_t block_space_size(const AontParams& params) {
  const std::uint64_t space = max_block_count(params);
  if (space > (1ull << 32)) throw ParameterError("block space too large to enumerate");
  return space;
}

std::vector<std::vector<std::uint8_t>> enumerate_consistent_plaintexts(const CapturedBlocks& captured) {
  const AontParams& params = captured.params;
  if (captured.blocks.size() != captured.s + 1) throw ParameterError("capture has wrong block count");
  std::size_t missing_index = captured.blocks.size();
  for (std::size_t i = 0; i < captured.blocks.size(); ++i) {
    if (!captured.blocks[i]) {
      if (missing_index != captured.blocks.size()) throw ParameterError("enumeration needs exactly one missing block");
      missing_index = i;
    }
  }
  if (missing_index == captured.blocks.size()) throw ParameterError("no block is missing");
  const std::uint64_t space = block_space_size(params);

  std::vector<Block> blocks(captured.blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (captured.blocks[i]) blocks[i] = *captured.blocks[i];
  }
  std::set<std::vector<std::uint8_t>> distinct;
  for (std::uint64_t value = 0; value < space; ++value) {
    Block candidate(params.n);
    std::uint64_t v = value;
    for (std::size_t j = params.n; j-- > 0;) {
      const auto d = static_cast<Symbol>(v % params.n);
      candidate[j] = d == 0 ? params.n : d;
      v /= params.n;
    }
    blocks[missing_index] = std::move(candidate);
    try {
      const auto plain = recover_message_blocks(blocks, params);
      distinct.insert(blocks_to_bytes(plain, params, captured.orig_len_bytes));
    } catch (const CorruptionError&) {
      // inconsistent candidate
    }
  }
  return {distinct.begin(), distinct.end()};
}

ReconstructionOutcome reconstruction_attempt(const CapturedBlocks& captured) {
  const AontParams& params = captured.params;
  if (captured.blocks.size() != captured.s + 1) throw ParameterError("capture has wrong block count");
  ReconstructionOutcome out;
  out.missing_blocks = static_cast<std::size_t>(
      std::count_if(captured.blocks.begin(), captured.blocks.end(), [](const auto& b) { return !b.has_value(); }));
  if (out.missing_blocks == 0) {
    throw ParameterError("all blocks captured; this is a decode, not an attack");
  }
  if (out.missing_blocks == 1 && max_block_count(params) <= kExhaustiveLimit) {
    out.exhaustive = true;
    out.candidates = enumerate_consistent_plaintexts(captured).size();
    out.log2_candidates = std::log2(static_cast<double>(out.candidates));
    return out;
  }
  // Each admissible key fixes the last missing block; the others stay free.
  double log2_key_space = 0.0;
  for (std::uint32_t i = 2; i <= params.n; ++i) log2_key_space += std::log2(static_cast<double>(i));
  const double log2_block_space = static_cast<double>(params.n) * std::log2(static_cast<double>(params.n));
  out.log2_candidates = log2_key_space + static_cast<double>(out.missing_blocks - 1) * log2_block_space;
  out.candidates = out.log2_candidates < 63.0 ? static_cast<std::uint64_t>(std::llround(std::exp2(out.log2_candidates)))
                                              : std::numeric_limits<std::uint64_t>::max();
  return out;
}

}  // namespace nocsec
