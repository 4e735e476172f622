#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nocsec/quasigroup.hpp"
#include "nocsec/routing.hpp"

namespace nocsec {

enum class SecurityMode { None, Aont, Aes };

const char* to_string(SecurityMode mode) noexcept;
SecurityMode parse_security_mode(const std::string& text);

struct TrafficSpec {
  enum class Kind { UniformRandom, Transpose, Trace };
  Kind kind = Kind::UniformRandom;
  /// Messages per node per cycle for synthetic patterns.
  double injection_rate = 0.005;
  std::filesystem::path trace_path;
};

/// Everything a simulation run needs. Mirrors the flat config file schema
/// documented in docs/formats.md.
struct SimConfig {
  MeshDims dims{8, 8};
  int link_width_bits = 128;
  int vcs_per_port = 4;
  int buffer_depth_flits = 4;
  int router_pipeline_cycles = 2;
  int link_cycles = 1;

  SecurityMode security_mode = SecurityMode::None;
  /// Run none, aont and aes on identical traffic instead of a single mode.
  bool compare_modes = false;

  AontParams aont_params = AontParams::for_prime(17);
  /// Unset means one cycle per block (s cycles).
  std::optional<int> aont_encode_cycles;
  std::optional<int> aont_decode_cycles;
  int aes_encrypt_cycles = 200;
  int aes_decrypt_cycles = 200;

  TrafficSpec traffic;
  int payload_bytes_default = 64;
  std::uint64_t warmup_cycles = 1000;
  std::uint64_t measure_cycles = 10000;
  std::uint64_t seed = 1;

  std::uint64_t deadlock_threshold_cycles = 5000;
  std::uint64_t drain_limit_cycles = 1000000;
  bool verify_payloads = true;
  int histogram_bucket_cycles = 10;

  /// Throws ParameterError naming the offending field.
  void validate() const;
};

/// Parses `key = value` lines; `#` starts a comment. Relative trace paths
/// resolve against `base_dir`. Throws ParseError (with line number) for
/// syntax errors, unknown keys and missing required keys.
SimConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
SimConfig load_config(const std::filesystem::path& path);

/// Canonical config text; parse_config(format_config(c)) reproduces c.
std::string format_config(const SimConfig& config);

/// Keys that must appear in every config file.
const std::vector<std::string>& required_config_keys();

/// One line of a trace file.
struct TraceEvent {
  std::uint64_t cycle = 0;
  int src = 0;
  int dst = 0;
  std::uint32_t bytes = 0;

  bool operator==(const TraceEvent&) const = default;
};

/// CSV `cycle,src,dst,bytes`, optional header line, LF endings. Node ids are
/// row-major (id = y * width + x). Cycles must be non-decreasing. When dims
/// is given, node ids are range-checked.
std::vector<TraceEvent> parse_trace(std::istream& in, std::optional<MeshDims> dims = std::nullopt);
std::vector<TraceEvent> load_trace(const std::filesystem::path& path, std::optional<MeshDims> dims = std::nullopt);
std::string format_trace(const std::vector<TraceEvent>& events);

}  // namespace nocsec
