#include "nocsec/sim_config.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "nocsec/error.hpp"

namespace nocsec {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value, std::size_t line) {
  T out{};
  const char* b = value.data();
  const char* e = b + value.size();
  const auto r = std::from_chars(b, e, out);
  if (r.ec != std::errc{} || r.ptr != e) {
    throw ParseError("invalid value '" + value + "' for key '" + key + "'", line);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value, std::size_t line) {
  try {
    std::size_t used = 0;
    const double d = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return d;
  } catch (const std::exception&) {
    throw ParseError("invalid value '" + value + "' for key '" + key + "'", line);
  }
}

bool parse_bool(const std::string& key, const std::string& value, std::size_t line) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ParseError("invalid boolean '" + value + "' for key '" + key + "'", line);
}

std::optional<int> parse_auto_int(const std::string& key, const std::string& value, std::size_t line) {
  if (value == "auto") return std::nullopt;
  return parse_number<int>(key, value, line);
}

std::string format_double(double d) {
  std::ostringstream os;
  os.precision(17);
  os << d;
  return os.str();
}

const char* traffic_name(TrafficSpec::Kind kind) {
  switch (kind) {
    case TrafficSpec::Kind::UniformRandom: return "uniform";
    case TrafficSpec::Kind::Transpose: return "transpose";
    case TrafficSpec::Kind::Trace: return "trace";
  }
  return "?";
}

}  // namespace

const char* to_string(SecurityMode mode) noexcept {
  switch (mode) {
    case SecurityMode::None: return "none";
    case SecurityMode::Aont: return "aont";
    case SecurityMode::Aes: return "aes";
  }
  return "?";
}

SecurityMode parse_security_mode(const std::string& text) {
  if (text == "none") return SecurityMode::None;
  if (text == "aont") return SecurityMode::Aont;
  if (text == "aes") return SecurityMode::Aes;
  throw ParameterError("unknown security mode '" + text + "'");
}

void SimConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw ParameterError("config field '" + field + "': " + why);
  };
  if (dims.width < 2 || dims.height < 2) fail("mesh", "must be at least 2x2");
  if (link_width_bits < 1) fail("link_width_bits", "must be positive");
  if (vcs_per_port < 2 || vcs_per_port % 2 != 0) fail("vcs_per_port", "must be even and >= 2");
  if ((security_mode == SecurityMode::Aont || compare_modes) && vcs_per_port < 4) {
    fail("vcs_per_port", "aont mode needs >= 4 (two per routing class for the pivot turn)");
  }
  if (buffer_depth_flits < 1) fail("buffer_depth_flits", "must be positive");
  if (router_pipeline_cycles < 1) fail("router_pipeline_cycles", "must be positive");
  if (link_cycles < 1) fail("link_cycles", "must be positive");
  if (aont_encode_cycles && *aont_encode_cycles < 0) fail("aont_encode_cycles", "must be >= 0");
  if (aont_decode_cycles && *aont_decode_cycles < 0) fail("aont_decode_cycles", "must be >= 0");
  if (aes_encrypt_cycles < 0) fail("aes_encrypt_cycles", "must be >= 0");
  if (aes_decrypt_cycles < 0) fail("aes_decrypt_cycles", "must be >= 0");
  if (!(traffic.injection_rate >= 0.0 && traffic.injection_rate <= 1.0)) fail("injection_rate", "must be in [0,1]");
  if (traffic.kind == TrafficSpec::Kind::Transpose && dims.width != dims.height) {
    fail("traffic", "transpose needs a square mesh");
  }
  if (traffic.kind == TrafficSpec::Kind::Trace && traffic.trace_path.empty()) fail("trace_file", "required for trace traffic");
  if (payload_bytes_default < 1) fail("payload_bytes", "must be positive");
  if (deadlock_threshold_cycles < 1) fail("deadlock_threshold_cycles", "must be positive");
  if (histogram_bucket_cycles < 1) fail("histogram_bucket_cycles", "must be positive");
}

const std::vector<std::string>& required_config_keys() {
  static const std::vector<std::string> keys{"mesh", "mode", "traffic", "seed"};
  return keys;
}

SimConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  SimConfig c;
  std::set<std::string> seen;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) throw ParseError("empty value for key '" + key + "'", line_no);
    if (!seen.insert(key).second) throw ParseError("duplicate key '" + key + "'", line_no);

    try {
      if (key == "mesh") {
        c.dims = MeshDims::parse(value);
      } else if (key == "mode") {
        c.compare_modes = value == "compare";
        if (!c.compare_modes) c.security_mode = parse_security_mode(value);
      } else if (key == "link_width_bits") {
        c.link_width_bits = parse_number<int>(key, value, line_no);
      } else if (key == "vcs_per_port") {
        c.vcs_per_port = parse_number<int>(key, value, line_no);
      } else if (key == "buffer_depth_flits") {
        c.buffer_depth_flits = parse_number<int>(key, value, line_no);
      } else if (key == "router_pipeline_cycles") {
        c.router_pipeline_cycles = parse_number<int>(key, value, line_no);
      } else if (key == "link_cycles") {
        c.link_cycles = parse_number<int>(key, value, line_no);
      } else if (key == "aont_prime") {
        c.aont_params = AontParams::for_prime(parse_number<std::uint32_t>(key, value, line_no));
      } else if (key == "aont_encode_cycles") {
        c.aont_encode_cycles = parse_auto_int(key, value, line_no);
      } else if (key == "aont_decode_cycles") {
        c.aont_decode_cycles = parse_auto_int(key, value, line_no);
      } else if (key == "aes_encrypt_cycles") {
        c.aes_encrypt_cycles = parse_number<int>(key, value, line_no);
      } else if (key == "aes_decrypt_cycles") {
        c.aes_decrypt_cycles = parse_number<int>(key, value, line_no);
      } else if (key == "traffic") {
        if (value == "uniform") c.traffic.kind = TrafficSpec::Kind::UniformRandom;
        else if (value == "transpose") c.traffic.kind = TrafficSpec::Kind::Transpose;
        else if (value == "trace") c.traffic.kind = TrafficSpec::Kind::Trace;
        else throw ParseError("unknown traffic '" + value + "'", line_no);
      } else if (key == "injection_rate") {
        c.traffic.injection_rate = parse_double(key, value, line_no);
      } else if (key == "trace_file") {
        std::filesystem::path p(value);
        c.traffic.trace_path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
      } else if (key == "payload_bytes") {
        c.payload_bytes_default = parse_number<int>(key, value, line_no);
      } else if (key == "warmup_cycles") {
        c.warmup_cycles = parse_number<std::uint64_t>(key, value, line_no);
      } else if (key == "measure_cycles") {
        c.measure_cycles = parse_number<std::uint64_t>(key, value, line_no);
      } else if (key == "seed") {
        c.seed = parse_number<std::uint64_t>(key, value, line_no);
      } else if (key == "deadlock_threshold_cycles") {
        c.deadlock_threshold_cycles = parse_number<std::uint64_t>(key, value, line_no);
      } else if (key == "drain_limit_cycles") {
        c.drain_limit_cycles = parse_number<std::uint64_t>(key, value, line_no);
      } else if (key == "verify_payloads") {
        c.verify_payloads = parse_bool(key, value, line_no);
      } else if (key == "histogram_bucket_cycles") {
        c.histogram_bucket_cycles = parse_number<int>(key, value, line_no);
      } else {
        throw ParseError("unknown key '" + key + "'", line_no);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError("key '" + key + "': " + e.what(), line_no);
    }
  }
  for (const auto& key : required_config_keys()) {
    if (!seen.count(key)) throw ParseError("missing required key '" + key + "'");
  }
  try {
    c.validate();
  } catch (const ParameterError& e) {
    throw ParseError(e.what());
  }
  return c;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path.string());
  return parse_config(in, std::filesystem::absolute(path).parent_path());
}

std::string format_config(const SimConfig& c) {
  std::ostringstream os;
  auto opt = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string("auto"); };
  os << "mesh = " << c.dims.width << "x" << c.dims.height << "\n"
     << "mode = " << (c.compare_modes ? "compare" : to_string(c.security_mode)) << "\n"
     << "link_width_bits = " << c.link_width_bits << "\n"
     << "vcs_per_port = " << c.vcs_per_port << "\n"
     << "buffer_depth_flits = " << c.buffer_depth_flits << "\n"
     << "router_pipeline_cycles = " << c.router_pipeline_cycles << "\n"
     << "link_cycles = " << c.link_cycles << "\n"
     << "aont_prime = " << c.aont_params.p << "\n"
     << "aont_encode_cycles = " << opt(c.aont_encode_cycles) << "\n"
     << "aont_decode_cycles = " << opt(c.aont_decode_cycles) << "\n"
     << "aes_encrypt_cycles = " << c.aes_encrypt_cycles << "\n"
     << "aes_decrypt_cycles = " << c.aes_decrypt_cycles << "\n"
     << "traffic = " << traffic_name(c.traffic.kind) << "\n"
     << "injection_rate = " << format_double(c.traffic.injection_rate) << "\n";
  if (!c.traffic.trace_path.empty()) os << "trace_file = " << c.traffic.trace_path.string() << "\n";
  os << "payload_bytes = " << c.payload_bytes_default << "\n"
     << "warmup_cycles = " << c.warmup_cycles << "\n"
     << "measure_cycles = " << c.measure_cycles << "\n"
     << "seed = " << c.seed << "\n"
     << "deadlock_threshold_cycles = " << c.deadlock_threshold_cycles << "\n"
     << "drain_limit_cycles = " << c.drain_limit_cycles << "\n"
     << "verify_payloads = " << (c.verify_payloads ? "true" : "false") << "\n"
     << "histogram_bucket_cycles = " << c.histogram_bucket_cycles << "\n";
  return os.str();
}

std::vector<TraceEvent> parse_trace(std::istream& in, std::optional<MeshDims> dims) {
  std::vector<TraceEvent> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line == "cycle,src,dst,bytes") continue;

    std::array<std::string, 4> fields;
    std::size_t start = 0;
    for (std::size_t f = 0; f < 4; ++f) {
      const auto comma = line.find(',', start);
      if ((comma == std::string::npos) != (f == 3)) throw ParseError("expected 4 comma-separated fields", line_no);
      fields[f] = trim(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      start = comma + 1;
    }
    TraceEvent ev;
    ev.cycle = parse_number<std::uint64_t>("cycle", fields[0], line_no);
    ev.src = parse_number<int>("src", fields[1], line_no);
    ev.dst = parse_number<int>("dst", fields[2], line_no);
    ev.bytes = parse_number<std::uint32_t>("bytes", fields[3], line_no);
    if (ev.bytes == 0) throw ParseError("bytes must be positive", line_no);
    if (ev.src == ev.dst) throw ParseError("source equals destination", line_no);
    if (ev.src < 0 || ev.dst < 0 || (dims && (ev.src >= dims->size() || ev.dst >= dims->size()))) {
      throw ParseError("node id out of range", line_no);
    }
    if (!events.empty() && ev.cycle < events.back().cycle) {
      throw ParseError("cycle " + std::to_string(ev.cycle) + " precedes previous event", line_no);
    }
    events.push_back(ev);
  }
  return events;
}

std::vector<TraceEvent> load_trace(const std::filesystem::path& path, std::optional<MeshDims> dims) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open trace file " + path.string());
  return parse_trace(in, dims);
}

std::string format_trace(const std::vector<TraceEvent>& events) {
  std::ostringstream os;
  os << "cycle,src,dst,bytes\n";
  for (const auto& e : events) os << e.cycle << ',' << e.src << ',' << e.dst << ',' << e.bytes << '\n';
  return os.str();
}

}  // namespace nocsec
