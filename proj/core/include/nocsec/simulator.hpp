#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nocsec/aont.hpp"
#include "nocsec/routing.hpp"
#include "nocsec/sim_config.hpp"

namespace nocsec {

/// Router port numbering. North is y-1.
enum class Port : int { Local = 0, North = 1, East = 2, South = 3, West = 4 };
inline constexpr int kPortCount = 5;

struct SourceStats {
  std::uint64_t delivered = 0;
  double avg_delay_cycles = 0.0;
  std::uint64_t max_delay_cycles = 0;
  /// histogram[i] counts delays in [i*bucket, (i+1)*bucket).
  std::vector<std::uint64_t> histogram;

  bool operator==(const SourceStats&) const = default;
};

struct SimStats {
  SecurityMode mode = SecurityMode::None;
  /// Messages injected inside the measurement window and how many arrived.
  std::uint64_t injected = 0;
  std::uint64_t delivered = 0;
  std::uint64_t undelivered = 0;
  double avg_delay_cycles = 0.0;
  std::uint64_t max_delay_cycles = 0;
  int histogram_bucket_cycles = 10;
  std::vector<SourceStats> per_source;

  /// Whole-run conservation counters (warmup and drain included).
  std::uint64_t messages_injected = 0;
  std::uint64_t messages_delivered = 0;
  std::uint64_t flits_injected = 0;
  std::uint64_t flits_delivered = 0;

  std::uint64_t cycles = 0;
  std::uint64_t payload_mismatches = 0;
  std::uint64_t path_mismatches = 0;
  std::uint64_t unprotected_messages = 0;
  /// FNV-1a over the ordered delivery log.
  std::uint64_t event_hash = 0;

  bool operator==(const SimStats&) const = default;
};

/// Summary kept for every completed message.
struct CompletedMessage {
  std::uint64_t id = 0;
  Coord src;
  Coord dst;
  std::uint32_t bytes = 0;
  std::uint64_t inject_cycle = 0;
  std::uint64_t complete_cycle = 0;
  int packets = 0;
  int flits = 0;

  std::uint64_t delay() const noexcept { return complete_cycle - inject_cycle; }
};

/// Per-packet hop log, kept only when path recording is enabled.
struct PacketTrace {
  std::uint64_t message_id = 0;
  PacketHeader header;
  std::vector<Coord> planned;
  std::vector<Coord> hops;
  std::uint64_t ready_cycle = 0;
  std::uint64_t head_injected_cycle = 0;
  std::uint64_t tail_delivered_cycle = 0;
};

class Simulator {
 public:
  /// Throws ParameterError for an invalid config.
  explicit Simulator(SimConfig config);

  /// Schedules a message. `cycle` must not be in the past. Returns the
  /// message id. Throws ParameterError for src == dst or unknown nodes.
  std::uint64_t inject(std::uint64_t cycle, Coord src, Coord dst, std::uint32_t payload_bytes);

  /// Advances one cycle. Throws DeadlockError when flits sit in the network
  /// without any movement for deadlock_threshold_cycles.
  void step();

  std::uint64_t now() const noexcept { return now_; }
  /// True when every injected message has been fully delivered.
  bool drained() const noexcept { return active_messages_ == 0; }
  std::uint64_t flits_in_network() const noexcept { return flits_in_network_; }

  void set_record_paths(bool on) noexcept { record_paths_ = on; }
  const std::vector<PacketTrace>& packet_traces() const noexcept { return traces_; }
  const std::vector<CompletedMessage>& completed() const noexcept { return completed_; }

  int router_count() const noexcept { return static_cast<int>(routers_.size()); }
  int vcs_per_class() const noexcept { return config_.vcs_per_port / 2; }
  const SimConfig& config() const noexcept { return config_; }

  /// Flit count for a packet carrying `payload_bits`.
  int flits_for_bits(std::size_t payload_bits) const noexcept;

  SimStats stats() const;

 private:
  struct Flit {
    std::uint32_t packet = 0;
    bool head = false;
    bool tail = false;
    bool final_segment = false;
    std::uint64_t ready = 0;
  };
  struct InputVc {
    std::deque<Flit> buf;
    int out_port = -1;
    int out_vc = -1;
    bool routed = false;
    bool swapped = false;
    bool ni_owned = false;
  };
  struct OutputVc {
    int credits = 0;
    bool allocated = false;
    bool tail_sent = false;
  };
  struct Router {
    std::array<std::vector<InputVc>, kPortCount> in;
    std::array<std::vector<OutputVc>, kPortCount> out;
    std::array<int, kPortCount> sa_rr{};
    int va_rr = 0;
  };
  struct Packet {
    bool live = false;
    std::uint32_t message = 0;
    PacketHeader header;
    bool two_segment = false;
    std::uint64_t ready = 0;
    int flits_sent = 0;
    int flits_delivered = 0;
    std::uint64_t head_injected = 0;
    std::optional<PacketPayload> payload;
    std::vector<Coord> planned;
    std::vector<Coord> hops;
  };
  struct Message {
    bool live = false;
    std::uint64_t id = 0;
    Coord src;
    Coord dst;
    std::uint32_t bytes = 0;
    std::uint64_t inject_cycle = 0;
    std::uint64_t decode_cycles = 0;
    int parts_total = 0;
    int parts_done = 0;
    int flits = 0;
    std::uint64_t last_tail = 0;
    bool unprotected = false;
    std::vector<std::uint8_t> original;
    std::vector<PacketPayload> received;
  };
  struct NiState {
    // Ready packets ordered by (ready cycle, sequence).
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint32_t> queue;
    std::optional<std::uint32_t> current;
    int current_vc = -1;
  };
  struct Arrival {
    std::uint64_t cycle;
    int router;
    int port;
    int vc;
    Flit flit;
  };
  struct Credit {
    std::uint64_t cycle;
    int router;
    int port;
    int vc;
  };

  std::uint32_t alloc_packet();
  std::uint32_t alloc_message();
  void add_packet(std::uint32_t msg, PacketHeader header, bool two_segment, std::uint64_t ready,
                  std::optional<PacketPayload> payload, std::vector<Coord> planned);
  void deliver_flit(const Flit& f, int router);
  void finish_packet(std::uint32_t pkt);
  void finish_message(std::uint32_t msg);
  void inject_from_ni(int router);
  void route_and_allocate(int router);
  void switch_traverse(int router);
  bool vc_allowed(const Packet& p, int vc) const noexcept;
  int neighbor(int router, int port) const noexcept;
  [[noreturn]] void report_deadlock() const;

  SimConfig config_;
  std::vector<Router> routers_;
  std::vector<NiState> nis_;
  std::vector<Packet> packets_;
  std::vector<std::uint32_t> free_packets_;
  std::vector<Message> messages_;
  std::vector<std::uint32_t> free_messages_;
  std::deque<Arrival> arrivals_;
  std::deque<Credit> credits_;

  std::uint64_t now_ = 0;
  std::uint64_t next_message_id_ = 0;
  std::uint64_t ni_seq_ = 0;
  std::uint64_t active_messages_ = 0;
  std::uint64_t flits_in_network_ = 0;
  std::uint64_t last_progress_ = 0;
  bool record_paths_ = false;

  std::uint64_t messages_injected_ = 0;
  std::uint64_t flits_injected_ = 0;
  std::uint64_t flits_delivered_ = 0;
  std::uint64_t payload_mismatches_ = 0;
  std::uint64_t path_mismatches_ = 0;
  std::uint64_t unprotected_ = 0;
  std::uint64_t measured_injected_ = 0;
  std::uint64_t flits_moved_ = 0;
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;

  std::vector<CompletedMessage> completed_;
  std::vector<PacketTrace> traces_;
};

/// Builds a simulator, feeds it the configured traffic, drains, and returns
/// the aggregated stats. Synthetic traffic is injected during
/// warmup + measure cycles; trace traffic is injected in full.
SimStats run(const SimConfig& config);

struct ModeComparison {
  SecurityMode mode = SecurityMode::None;
  SimStats stats;
  double ratio_vs_none = 1.0;
};

/// Runs none, aont and aes on identical traffic in parallel. Rows are in that
/// order regardless of completion order.
std::vector<ModeComparison> compare_modes(const SimConfig& config);

/// Stats as CSV with columns mode,avg_delay,max_delay,delivered,ratio_vs_none.
std::string format_stats_csv(const std::vector<ModeComparison>& rows);

}  // namespace nocsec
