#include "nocsec/simulator.hpp"

#include <algorithm>
#include <future>
#include <sstream>

#include "nocsec/codec.hpp"
#include "nocsec/error.hpp"
#include "nocsec/rng.hpp"

namespace nocsec {
namespace {

constexpr int kLocal = static_cast<int>(Port::Local);
constexpr int kNorth = static_cast<int>(Port::North);
constexpr int kEast = static_cast<int>(Port::East);
constexpr int kSouth = static_cast<int>(Port::South);
constexpr int kWest = static_cast<int>(Port::West);

constexpr int opposite(int port) noexcept {
  switch (port) {
    case kNorth: return kSouth;
    case kSouth: return kNorth;
    case kEast: return kWest;
    case kWest: return kEast;
    default: return kLocal;
  }
}

int next_port(Coord at, Coord dst, RoutingPolicy policy) noexcept {
  const bool x_first = policy == RoutingPolicy::XY;
  if (x_first ? at.x != dst.x : at.y == dst.y) return at.x < dst.x ? kEast : kWest;
  if (at.y != dst.y) return at.y < dst.y ? kSouth : kNorth;
  return kLocal;
}

void fnv_mix(std::uint64_t& h, std::uint64_t v) noexcept {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffU;
    h *= 0x100000001b3ULL;
  }
}

}  // namespace

Simulator::Simulator(SimConfig config) : config_(std::move(config)) {
  config_.validate();
  const int n = config_.dims.size();
  const int v = config_.vcs_per_port;
  routers_.resize(static_cast<std::size_t>(n));
  for (auto& r : routers_) {
    for (int p = 0; p < kPortCount; ++p) {
      r.in[p].resize(static_cast<std::size_t>(v));
      r.out[p].assign(static_cast<std::size_t>(v), OutputVc{config_.buffer_depth_flits, false, false});
    }
  }
  nis_.resize(static_cast<std::size_t>(n));
}

int Simulator::flits_for_bits(std::size_t payload_bits) const noexcept {
  const auto w = static_cast<std::size_t>(config_.link_width_bits);
  return 1 + static_cast<int>((payload_bits + w - 1) / w);
}

int Simulator::neighbor(int router, int port) const noexcept {
  const int w = config_.dims.width;
  switch (port) {
    case kNorth: return router - w;
    case kSouth: return router + w;
    case kEast: return router + 1;
    case kWest: return router - 1;
    default: return router;
  }
}

bool Simulator::vc_allowed(const Packet& p, int vc) const noexcept {
  const int half = config_.vcs_per_port / 2;
  const int base = p.header.policy == RoutingPolicy::XY ? 0 : half;
  if (!p.two_segment) return vc >= base && vc < base + half;
  const int split = base + half / 2;
  return p.header.at_final_segment() ? vc >= split && vc < base + half : vc >= base && vc < split;
}

std::uint32_t Simulator::alloc_packet() {
  if (!free_packets_.empty()) {
    const auto id = free_packets_.back();
    free_packets_.pop_back();
    return id;
  }
  packets_.emplace_back();
  return static_cast<std::uint32_t>(packets_.size() - 1);
}

std::uint32_t Simulator::alloc_message() {
  if (!free_messages_.empty()) {
    const auto id = free_messages_.back();
    free_messages_.pop_back();
    return id;
  }
  messages_.emplace_back();
  return static_cast<std::uint32_t>(messages_.size() - 1);
}

void Simulator::add_packet(std::uint32_t msg, PacketHeader header, bool two_segment, std::uint64_t ready,
                           std::optional<PacketPayload> payload, std::vector<Coord> planned) {
  const std::uint32_t id = alloc_packet();
  Packet& p = packets_[id];
  p = Packet{};
  p.live = true;
  p.message = msg;
  p.header = header;
  p.two_segment = two_segment;
  p.ready = ready;
  p.payload = std::move(payload);
  p.planned = std::move(planned);
  messages_[msg].flits += header.length_flits;
  const int src = config_.dims.node_id(header.src);
  nis_[static_cast<std::size_t>(src)].queue.emplace(std::make_pair(ready, ni_seq_++), id);
}

std::uint64_t Simulator::inject(std::uint64_t cycle, Coord src, Coord dst, std::uint32_t payload_bytes) {
  if (cycle < now_) throw ParameterError("inject cycle " + std::to_string(cycle) + " is in the past");
  if (!config_.dims.contains(src)) throw ParameterError("unknown source node " + to_string(src));
  if (!config_.dims.contains(dst)) throw ParameterError("unknown destination node " + to_string(dst));
  if (src == dst) throw ParameterError("source equals destination " + to_string(src));
  if (payload_bytes == 0) throw ParameterError("payload must be at least one byte");

  const std::uint32_t slot = alloc_message();
  Message& m = messages_[slot];
  m = Message{};
  m.live = true;
  m.id = next_message_id_++;
  m.src = src;
  m.dst = dst;
  m.bytes = payload_bytes;
  m.inject_cycle = cycle;
  ++active_messages_;
  ++messages_injected_;
  if (cycle >= config_.warmup_cycles && cycle - config_.warmup_cycles < config_.measure_cycles) ++measured_injected_;

  const std::uint64_t seed = mix_seed(config_.seed, m.id);
  PacketHeader h;
  h.pkt_id = m.id;
  h.src = src;
  h.fin_id = dst;

  switch (config_.security_mode) {
    case SecurityMode::None:
    case SecurityMode::Aes: {
      const bool aes = config_.security_mode == SecurityMode::Aes;
      h.current_dst = dst;
      h.policy = RoutingPolicy::XY;
      h.length_flits = flits_for_bits(std::size_t{payload_bytes} * 8);
      m.parts_total = 1;
      m.decode_cycles = aes ? static_cast<std::uint64_t>(config_.aes_decrypt_cycles) : 0;
      const std::uint64_t ready = cycle + (aes ? static_cast<std::uint64_t>(config_.aes_encrypt_cycles) : 0);
      add_packet(slot, h, false, ready, std::nullopt, route_xy(src, dst));
      break;
    }
    case SecurityMode::Aont: {
      const AontParams& params = config_.aont_params;
      const std::size_t s = block_count_for(payload_bytes, params);
      const auto enc = static_cast<std::uint64_t>(config_.aont_encode_cycles.value_or(static_cast<int>(s)));
      m.decode_cycles = static_cast<std::uint64_t>(config_.aont_decode_cycles.value_or(static_cast<int>(s)));
      m.parts_total = 2;

      const RoutePlan plan = plan_routes(src, dst, config_.dims, mix_seed(seed, 1));
      if (!plan.protected_paths) {
        m.unprotected = true;
        ++unprotected_;
      }
      std::optional<PacketPayload> part1;
      std::optional<PacketPayload> part2;
      if (config_.verify_payloads) {
        Rng bytes_rng(mix_seed(seed, 2));
        m.original.resize(payload_bytes);
        for (auto& b : m.original) b = static_cast<std::uint8_t>(bytes_rng.next());
        auto parts = packetize(transform(m.original, params, mix_seed(seed, 3)), m.id);
        part1 = std::move(parts.first);
        part2 = std::move(parts.second);
      }

      PacketHeader h1 = h;
      h1.part = 1;
      h1.current_dst = plan.pivot_blue.value_or(dst);
      h1.flip_route = plan.flip_route;
      h1.policy = plan.blue_policy;
      h1.length_flits = flits_for_bits(codec::payload_bits(params, 1, s));
      PacketHeader h2 = h;
      h2.part = 2;
      h2.current_dst = plan.pivot_red.value_or(dst);
      h2.policy = plan.red_policy;
      h2.length_flits = flits_for_bits(codec::payload_bits(params, 2, s));

      add_packet(slot, h1, plan.pivot_blue.has_value(), cycle + enc, std::move(part1), plan.path_blue);
      add_packet(slot, h2, plan.pivot_red.has_value(), cycle + enc, std::move(part2), plan.path_red);
      break;
    }
  }
  return m.id;
}

void Simulator::step() {
  const std::uint64_t c = now_;
  bool progress = false;

  while (!credits_.empty() && credits_.front().cycle <= c) {
    const Credit cr = credits_.front();
    credits_.pop_front();
    OutputVc& o = routers_[static_cast<std::size_t>(cr.router)].out[cr.port][static_cast<std::size_t>(cr.vc)];
    ++o.credits;
    if (o.tail_sent && o.credits == config_.buffer_depth_flits) {
      o.allocated = false;
      o.tail_sent = false;
    }
  }

  while (!arrivals_.empty() && arrivals_.front().cycle <= c) {
    Arrival a = arrivals_.front();
    arrivals_.pop_front();
    progress = true;
    Packet& p = packets_[a.flit.packet];
    const Coord here = config_.dims.coord(a.router);
    if (a.flit.head) p.hops.push_back(here);
    if (a.flit.final_segment && here == p.header.fin_id) {
      credits_.push_back({c + 1, neighbor(a.router, a.port), opposite(a.port), a.vc});
      deliver_flit(a.flit, a.router);
    } else {
      a.flit.ready = c + static_cast<std::uint64_t>(config_.router_pipeline_cycles);
      auto& buf = routers_[static_cast<std::size_t>(a.router)].in[a.port][static_cast<std::size_t>(a.vc)].buf;
      if (static_cast<int>(buf.size()) >= config_.buffer_depth_flits) throw Error("internal: input buffer overflow");
      buf.push_back(a.flit);
    }
  }

  for (int r = 0; r < router_count(); ++r) {
    const std::uint64_t before = flits_injected_;
    inject_from_ni(r);
    if (flits_injected_ != before) progress = true;
  }
  for (int r = 0; r < router_count(); ++r) route_and_allocate(r);
  const std::uint64_t moved_before = flits_moved_;
  for (int r = 0; r < router_count(); ++r) switch_traverse(r);
  if (flits_moved_ != moved_before) progress = true;

  if (progress || flits_in_network_ == 0) {
    last_progress_ = c;
  } else if (c - last_progress_ >= config_.deadlock_threshold_cycles) {
    report_deadlock();
  }
  ++now_;
}

void Simulator::inject_from_ni(int router) {
  NiState& ni = nis_[static_cast<std::size_t>(router)];
  auto& local = routers_[static_cast<std::size_t>(router)].in[kLocal];
  if (!ni.current) {
    if (ni.queue.empty() || ni.queue.begin()->first.first > now_) return;
    const std::uint32_t pkt = ni.queue.begin()->second;
    for (int v = 0; v < config_.vcs_per_port; ++v) {
      InputVc& vc = local[static_cast<std::size_t>(v)];
      if (!vc.ni_owned && vc.buf.empty() && !vc.routed && vc_allowed(packets_[pkt], v)) {
        vc.ni_owned = true;
        ni.current = pkt;
        ni.current_vc = v;
        ni.queue.erase(ni.queue.begin());
        break;
      }
    }
    if (!ni.current) return;
  }
  InputVc& vc = local[static_cast<std::size_t>(ni.current_vc)];
  if (static_cast<int>(vc.buf.size()) >= config_.buffer_depth_flits) return;
  Packet& p = packets_[*ni.current];
  Flit f;
  f.packet = *ni.current;
  f.head = p.flits_sent == 0;
  f.tail = p.flits_sent == p.header.length_flits - 1;
  f.final_segment = p.header.at_final_segment();
  f.ready = now_ + static_cast<std::uint64_t>(config_.router_pipeline_cycles);
  if (f.head) {
    p.head_injected = now_;
    p.hops.push_back(p.header.src);
  }
  vc.buf.push_back(f);
  ++p.flits_sent;
  ++flits_injected_;
  ++flits_in_network_;
  if (f.tail) {
    ni.current.reset();
    ni.current_vc = -1;
  }
}

void Simulator::route_and_allocate(int router) {
  Router& r = routers_[static_cast<std::size_t>(router)];
  const Coord here = config_.dims.coord(router);
  const int vcs = config_.vcs_per_port;
  const int total = kPortCount * vcs;
  for (int k = 0; k < total; ++k) {
    const int idx = (r.va_rr + k) % total;
    const int port = idx / vcs;
    const int v = idx % vcs;
    InputVc& in = r.in[port][static_cast<std::size_t>(v)];
    if (in.buf.empty() || !in.buf.front().head) continue;
    Packet& p = packets_[in.buf.front().packet];
    if (!in.routed) {
      if (!p.header.at_final_segment() && here == p.header.current_dst) {
        p.header = pivot_swap(p.header, here);
        in.swapped = true;
      }
      in.out_port = next_port(here, p.header.current_dst, p.header.policy);
      if (in.out_port == kLocal) throw Error("internal: packet routed to local port at " + to_string(here));
      in.routed = true;
    }
    if (in.out_vc >= 0) continue;
    auto& outs = r.out[in.out_port];
    for (int ov = 0; ov < vcs; ++ov) {
      OutputVc& o = outs[static_cast<std::size_t>(ov)];
      if (!o.allocated && vc_allowed(p, ov)) {
        o.allocated = true;
        o.tail_sent = false;
        in.out_vc = ov;
        break;
      }
    }
  }
  r.va_rr = (r.va_rr + 1) % total;
}

void Simulator::switch_traverse(int router) {
  Router& r = routers_[static_cast<std::size_t>(router)];
  const int vcs = config_.vcs_per_port;
  const int total = kPortCount * vcs;
  std::array<bool, kPortCount> input_used{};
  for (int out = 1; out < kPortCount; ++out) {
    for (int k = 0; k < total; ++k) {
      const int idx = (r.sa_rr[out] + k) % total;
      const int port = idx / vcs;
      const int v = idx % vcs;
      if (input_used[port]) continue;
      InputVc& in = r.in[port][static_cast<std::size_t>(v)];
      if (in.out_port != out || in.out_vc < 0 || in.buf.empty() || in.buf.front().ready > now_) continue;
      OutputVc& o = r.out[out][static_cast<std::size_t>(in.out_vc)];
      if (o.credits <= 0) continue;

      Flit f = in.buf.front();
      in.buf.pop_front();
      if (in.swapped) f.final_segment = true;
      --o.credits;
      arrivals_.push_back({now_ + static_cast<std::uint64_t>(config_.link_cycles), neighbor(router, out), opposite(out),
                           in.out_vc, f});
      if (port != kLocal) credits_.push_back({now_ + 1, neighbor(router, port), opposite(port), v});
      if (f.tail) {
        o.tail_sent = true;
        in.out_port = -1;
        in.out_vc = -1;
        in.routed = false;
        in.swapped = false;
        in.ni_owned = false;
      }
      input_used[port] = true;
      ++flits_moved_;
      r.sa_rr[out] = (idx + 1) % total;
      break;
    }
  }
}

void Simulator::deliver_flit(const Flit& f, int /*router*/) {
  ++flits_delivered_;
  --flits_in_network_;
  Packet& p = packets_[f.packet];
  ++p.flits_delivered;
  if (f.tail) finish_packet(f.packet);
}

void Simulator::finish_packet(std::uint32_t pkt) {
  Packet& p = packets_[pkt];
  Message& m = messages_[p.message];
  ++m.parts_done;
  m.last_tail = std::max(m.last_tail, now_);
  if (!p.planned.empty() && p.hops != p.planned) ++path_mismatches_;
  if (record_paths_) {
    traces_.push_back({m.id, p.header, p.planned, p.hops, p.ready, p.head_injected, now_});
  }
  if (p.payload) m.received.push_back(std::move(*p.payload));
  const std::uint32_t msg = p.message;
  p = Packet{};
  free_packets_.push_back(pkt);
  if (m.parts_done == m.parts_total) finish_message(msg);
}

void Simulator::finish_message(std::uint32_t msg) {
  Message& m = messages_[msg];
  if (config_.security_mode == SecurityMode::Aont && config_.verify_payloads) {
    bool ok = m.received.size() == 2;
    if (ok) {
      try {
        ok = inverse(reassemble(m.received[0], m.received[1])) == m.original;
      } catch (const Error&) {
        ok = false;
      }
    }
    if (!ok) ++payload_mismatches_;
  }
  CompletedMessage done;
  done.id = m.id;
  done.src = m.src;
  done.dst = m.dst;
  done.bytes = m.bytes;
  done.inject_cycle = m.inject_cycle;
  done.complete_cycle = m.last_tail + m.decode_cycles;
  done.packets = m.parts_total;
  done.flits = m.flits;
  completed_.push_back(done);
  fnv_mix(hash_, done.id);
  fnv_mix(hash_, done.complete_cycle);
  fnv_mix(hash_, static_cast<std::uint64_t>(done.flits));
  --active_messages_;
  m = Message{};
  free_messages_.push_back(msg);
}

void Simulator::report_deadlock() const {
  std::ostringstream os;
  os << "no flit movement for " << config_.deadlock_threshold_cycles << " cycles at cycle " << now_ << " with "
     << flits_in_network_ << " flits in the network; blocked packets:";
  int listed = 0;
  for (int r = 0; r < router_count() && listed < 16; ++r) {
    for (int port = 0; port < kPortCount; ++port) {
      for (const InputVc& vc : routers_[static_cast<std::size_t>(r)].in[port]) {
        if (vc.buf.empty() || listed >= 16) continue;
        const Packet& p = packets_[vc.buf.front().packet];
        os << "\n  pkt " << p.header.pkt_id << " part " << p.header.part << " at " << to_string(config_.dims.coord(r))
           << " port " << port << " toward " << to_string(p.header.current_dst) << " policy "
           << to_string(p.header.policy) << " out_vc " << vc.out_vc;
        ++listed;
      }
    }
  }
  throw DeadlockError(os.str());
}

SimStats Simulator::stats() const {
  SimStats s;
  s.mode = config_.security_mode;
  s.histogram_bucket_cycles = config_.histogram_bucket_cycles;
  s.per_source.resize(static_cast<std::size_t>(config_.dims.size()));
  s.injected = measured_injected_;
  const auto bucket = static_cast<std::uint64_t>(config_.histogram_bucket_cycles);
  double sum = 0.0;
  std::vector<double> per_sum(s.per_source.size(), 0.0);
  for (const CompletedMessage& m : completed_) {
    if (m.inject_cycle < config_.warmup_cycles || m.inject_cycle - config_.warmup_cycles >= config_.measure_cycles) {
      continue;
    }
    const std::uint64_t d = m.delay();
    ++s.delivered;
    sum += static_cast<double>(d);
    s.max_delay_cycles = std::max(s.max_delay_cycles, d);
    const auto src = static_cast<std::size_t>(config_.dims.node_id(m.src));
    SourceStats& ps = s.per_source[src];
    ++ps.delivered;
    per_sum[src] += static_cast<double>(d);
    ps.max_delay_cycles = std::max(ps.max_delay_cycles, d);
    const auto b = static_cast<std::size_t>(d / bucket);
    if (ps.histogram.size() <= b) ps.histogram.resize(b + 1, 0);
    ++ps.histogram[b];
  }
  if (s.delivered > 0) s.avg_delay_cycles = sum / static_cast<double>(s.delivered);
  for (std::size_t i = 0; i < s.per_source.size(); ++i) {
    if (s.per_source[i].delivered > 0) {
      s.per_source[i].avg_delay_cycles = per_sum[i] / static_cast<double>(s.per_source[i].delivered);
    }
  }
  s.undelivered = s.injected - s.delivered;
  s.messages_injected = messages_injected_;
  s.messages_delivered = completed_.size();
  s.flits_injected = flits_injected_;
  s.flits_delivered = flits_delivered_;
  s.cycles = now_;
  s.payload_mismatches = payload_mismatches_;
  s.path_mismatches = path_mismatches_;
  s.unprotected_messages = unprotected_;
  s.event_hash = hash_;
  return s;
}

SimStats run(const SimConfig& config) {
  Simulator sim(config);
  const MeshDims dims = config.dims;
  Rng traffic(mix_seed(config.seed, 0x74726166666963ULL));
  std::vector<TraceEvent> events;
  std::uint64_t end = config.warmup_cycles + config.measure_cycles;
  if (config.traffic.kind == TrafficSpec::Kind::Trace) {
    events = load_trace(config.traffic.trace_path, dims);
    end = events.empty() ? 0 : events.back().cycle + 1;
  }
  const auto payload = static_cast<std::uint32_t>(config.payload_bytes_default);
  std::size_t next_event = 0;
  for (std::uint64_t c = 0;; ++c) {
    if (c < end) {
      switch (config.traffic.kind) {
        case TrafficSpec::Kind::UniformRandom:
          for (int n = 0; n < dims.size(); ++n) {
            if (traffic.unit() >= config.traffic.injection_rate) continue;
            int d = static_cast<int>(traffic.below(static_cast<std::uint64_t>(dims.size() - 1)));
            if (d >= n) ++d;
            sim.inject(c, dims.coord(n), dims.coord(d), payload);
          }
          break;
        case TrafficSpec::Kind::Transpose:
          for (int n = 0; n < dims.size(); ++n) {
            if (traffic.unit() >= config.traffic.injection_rate) continue;
            const Coord src = dims.coord(n);
            if (src.x == src.y) continue;
            sim.inject(c, src, Coord{src.y, src.x}, payload);
          }
          break;
        case TrafficSpec::Kind::Trace:
          for (; next_event < events.size() && events[next_event].cycle == c; ++next_event) {
            const TraceEvent& e = events[next_event];
            sim.inject(c, dims.coord(e.src), dims.coord(e.dst), e.bytes);
          }
          break;
      }
    }
    sim.step();
    if (c + 1 >= end && sim.drained()) break;
    if (c + 1 >= end + config.drain_limit_cycles) break;
  }
  return sim.stats();
}

std::vector<ModeComparison> compare_modes(const SimConfig& config) {
  const std::array<SecurityMode, 3> modes{SecurityMode::None, SecurityMode::Aont, SecurityMode::Aes};
  std::vector<std::future<SimStats>> futures;
  for (SecurityMode mode : modes) {
    SimConfig c = config;
    c.compare_modes = false;
    c.security_mode = mode;
    futures.push_back(std::async(std::launch::async, [c] { return run(c); }));
  }
  std::vector<ModeComparison> rows;
  for (std::size_t i = 0; i < modes.size(); ++i) rows.push_back({modes[i], futures[i].get(), 1.0});
  const double base = rows.front().stats.avg_delay_cycles;
  for (auto& row : rows) row.ratio_vs_none = base > 0.0 ? row.stats.avg_delay_cycles / base : 0.0;
  return rows;
}

std::string format_stats_csv(const std::vector<ModeComparison>& rows) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(4);
  os << "mode,avg_delay,max_delay,delivered,ratio_vs_none\n";
  for (const auto& row : rows) {
    os << to_string(row.mode) << ',' << row.stats.avg_delay_cycles << ',' << row.stats.max_delay_cycles << ','
       << row.stats.delivered << ',' << row.ratio_vs_none << '\n';
  }
  return os.str();
}

}  // namespace nocsec
