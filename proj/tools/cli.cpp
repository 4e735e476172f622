#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "io.hpp"
#include "nocsec/adversary.hpp"
#include "nocsec/aont.hpp"
#include "nocsec/codec.hpp"
#include "nocsec/error.hpp"
#include "nocsec/quasigroup.hpp"
#include "nocsec/routing.hpp"
#include "nocsec/simulator.hpp"

namespace nocsec::tools {
namespace {

using json = nlohmann::ordered_json;

constexpr const char* kManifestFormat = "nocsec-manifest-1";

Coord parse_coord(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ParameterError("expected coordinate 'x,y', got '" + text + "'");
  try {
    std::size_t a = 0;
    std::size_t b = 0;
    const int x = std::stoi(text.substr(0, comma), &a);
    const int y = std::stoi(text.substr(comma + 1), &b);
    if (a != comma || b != text.size() - comma - 1) throw std::invalid_argument(text);
    return {x, y};
  } catch (const std::logic_error&) {
    throw ParameterError("expected coordinate 'x,y', got '" + text + "'");
  }
}

void print_table(std::ostream& out, const std::vector<std::vector<Symbol>>& t) {
  const int width = static_cast<int>(std::to_string(t.size()).size()) + 1;
  for (const auto& row : t) {
    for (Symbol s : row) out << std::setw(width) << s;
    out << '\n';
  }
}

std::string join_path(const std::vector<Coord>& path) {
  std::string s;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) s += "->";
    s += to_string(path[i]);
  }
  return s;
}

/// S/D endpoints, B/R pivots, b/r path cells, '.' elsewhere.
std::string render_grid(const RoutePlan& plan, MeshDims dims) {
  std::vector<std::string> grid(static_cast<std::size_t>(dims.height), std::string(static_cast<std::size_t>(dims.width), '.'));
  auto at = [&](Coord c) -> char& { return grid[static_cast<std::size_t>(c.y)][static_cast<std::size_t>(c.x)]; };
  for (const Coord& c : plan.path_blue) at(c) = 'b';
  for (const Coord& c : plan.path_red) at(c) = at(c) == 'b' ? '#' : 'r';
  if (plan.pivot_blue) at(*plan.pivot_blue) = 'B';
  if (plan.pivot_red) at(*plan.pivot_red) = 'R';
  at(plan.src) = 'S';
  at(plan.dst) = 'D';
  std::string out;
  for (const auto& row : grid) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ' ';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

std::string format_pct(double p) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << p * 100.0;
  return os.str();
}

void print_eavesdrop(std::ostream& out, const std::vector<EavesdropReport>& reports, const std::string& format) {
  if (format == "csv") {
    out << "mesh,defense,attackers,scenarios,intercepted,probability_pct\n";
    for (const auto& r : reports) {
      out << r.dims.width << 'x' << r.dims.height << ',' << to_string(r.defense) << ',' << r.attackers << ','
          << r.total_scenarios << ',' << std::setprecision(10) << r.intercepted << ',' << format_pct(r.probability)
          << '\n';
    }
    return;
  }
  for (const auto& r : reports) {
    out << r.dims.width << 'x' << r.dims.height << "  defense=" << to_string(r.defense) << "  attackers=" << r.attackers
        << "  P(intercept)=" << format_pct(r.probability) << "%  (" << std::setprecision(10) << r.intercepted << " of "
        << r.total_scenarios << " scenarios)\n";
  }
  if (!reports.empty()) out << "convention: " << reports.front().convention << '\n';
}

json stats_json(const ModeComparison& row) {
  const SimStats& s = row.stats;
  json per_source = json::array();
  for (std::size_t i = 0; i < s.per_source.size(); ++i) {
    const SourceStats& p = s.per_source[i];
    per_source.push_back({{"node", i},
                          {"delivered", p.delivered},
                          {"avg_delay", p.avg_delay_cycles},
                          {"max_delay", p.max_delay_cycles},
                          {"histogram", p.histogram}});
  }
  return {{"mode", to_string(row.mode)},
          {"avg_delay", s.avg_delay_cycles},
          {"max_delay", s.max_delay_cycles},
          {"delivered", s.delivered},
          {"ratio_vs_none", row.ratio_vs_none},
          {"injected", s.injected},
          {"undelivered", s.undelivered},
          {"messages_injected", s.messages_injected},
          {"messages_delivered", s.messages_delivered},
          {"flits_injected", s.flits_injected},
          {"flits_delivered", s.flits_delivered},
          {"cycles", s.cycles},
          {"payload_mismatches", s.payload_mismatches},
          {"path_mismatches", s.path_mismatches},
          {"unprotected_messages", s.unprotected_messages},
          {"event_hash", hex64(s.event_hash)},
          {"histogram_bucket_cycles", s.histogram_bucket_cycles},
          {"per_source", per_source}};
}

/// The compared rows for a config: all three modes for `mode = compare`,
/// otherwise a none baseline plus the configured mode.
std::vector<ModeComparison> simulate(const SimConfig& config) {
  if (config.compare_modes) return compare_modes(config);
  SimConfig base = config;
  base.security_mode = SecurityMode::None;
  std::vector<ModeComparison> rows{{SecurityMode::None, run(base), 1.0}};
  if (config.security_mode != SecurityMode::None) rows.push_back({config.security_mode, run(config), 1.0});
  const double ref = rows.front().stats.avg_delay_cycles;
  for (auto& r : rows) r.ratio_vs_none = ref > 0.0 ? r.stats.avg_delay_cycles / ref : 0.0;
  return rows;
}

struct SimOutputs {
  std::string csv;
  std::string json_text;
};

SimOutputs render_outputs(const SimConfig& config, const std::vector<ModeComparison>& rows) {
  json doc;
  doc["mesh"] = std::to_string(config.dims.width) + "x" + std::to_string(config.dims.height);
  doc["seed"] = config.seed;
  doc["modes"] = json::array();
  for (const auto& r : rows) doc["modes"].push_back(stats_json(r));
  return {format_stats_csv(rows), doc.dump(2) + "\n"};
}

int cmd_qg(std::ostream& out, std::uint32_t prime, std::uint64_t seed, bool tables) {
  const AontParams params = AontParams::for_prime(prime);
  const KeyPermutation key = random_key(seed, params);
  const Quasigroup q = Quasigroup::generate(key, params);
  out << "prime " << params.p << "  order " << params.n << "  element_bits " << params.element_bits << '\n';
  if (params.n <= 256) {
    out << "key";
    for (Symbol s : key.symbols()) out << ' ' << s;
    out << '\n';
  }
  out << "leader " << leader(q, key) << '\n';
  if (tables && params.n <= 256) {
    out << "table\n";
    print_table(out, q.table());
    out << "dual\n";
    print_table(out, q.dual_table());
  }
  return kOk;
}

int cmd_encode(std::ostream& out, const std::string& in, std::uint32_t prime, std::uint64_t seed,
               const std::string& out1, const std::string& out2, std::uint64_t pkt_id) {
  const auto message = read_file(in);
  const AontCiphertext ct = transform(message, AontParams::for_prime(prime), seed);
  const auto [p1, p2] = packetize(ct, pkt_id);
  const auto b1 = codec::encode_part(p1);
  const auto b2 = codec::encode_part(p2);
  write_file_atomic(out1, b1);
  write_file_atomic(out2, b2);
  out << "s=" << ct.s << " blocks  part1=" << b1.size() << " bytes  part2=" << b2.size() << " bytes\n";
  return kOk;
}

int cmd_decode(std::ostream& out, const std::string& in1, const std::string& in2, const std::string& dest) {
  const PacketPayload a = codec::decode_part(read_file(in1));
  const PacketPayload b = codec::decode_part(read_file(in2));
  const auto message = inverse(reassemble(a, b));
  write_file_atomic(dest, message);
  out << "recovered " << message.size() << " bytes\n";
  return kOk;
}

int cmd_route(std::ostream& out, const std::string& mesh, const std::string& src, const std::string& dst,
              std::uint64_t seed) {
  const MeshDims dims = MeshDims::parse(mesh);
  const Coord s = parse_coord(src);
  const Coord d = parse_coord(dst);
  if (!dims.contains(s) || !dims.contains(d)) throw ParameterError("endpoint outside the mesh");
  const RoutePlan plan = plan_routes(s, d, dims, seed);
  out << "case " << to_string(plan.kind) << '\n';
  if (plan.pivot_blue) out << "pivot_blue " << to_string(*plan.pivot_blue) << '\n';
  if (plan.pivot_red) out << "pivot_red " << to_string(*plan.pivot_red) << '\n';
  out << "flip_route " << (plan.flip_route ? "true" : "false") << '\n';
  out << "blue " << to_string(plan.blue_policy);
  if (plan.flip_route) out << "->" << to_string(flipped(plan.blue_policy));
  out << "  " << join_path(plan.path_blue) << '\n';
  out << "red " << to_string(plan.red_policy) << "  " << join_path(plan.path_red) << '\n';
  out << "protected " << (plan.protected_paths ? "yes" : "no") << '\n';
  if (!plan.warning.empty()) out << "warning: " << plan.warning << '\n';
  out << render_grid(plan, dims);
  return kOk;
}

json build_manifest(const SimConfig& config, const std::vector<ModeComparison>& rows, const SimOutputs& files) {
  json m;
  m["format"] = kManifestFormat;
  m["config"] = format_config(config);
  m["runs"] = json::array();
  for (const auto& r : rows) m["runs"].push_back({{"mode", to_string(r.mode)}, {"event_hash", hex64(r.stats.event_hash)}});
  m["files"] = {{"stats.csv", hex64(fnv1a64(files.csv))}, {"stats.json", hex64(fnv1a64(files.json_text))}};
  return m;
}

int cmd_sim(std::ostream& out, const std::string& config_path, const std::string& out_dir) {
  const SimConfig config = load_config(config_path);
  const auto rows = simulate(config);
  const SimOutputs files = render_outputs(config, rows);
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  write_file_atomic(dir / "stats.csv", files.csv);
  write_file_atomic(dir / "stats.json", files.json_text);
  write_file_atomic(dir / "manifest.json", build_manifest(config, rows, files).dump(2) + "\n");
  out << files.csv;
  for (const auto& r : rows) {
    if (r.stats.payload_mismatches || r.stats.path_mismatches) {
      out << "warning: " << to_string(r.mode) << " had " << r.stats.payload_mismatches << " payload and "
          << r.stats.path_mismatches << " path mismatches\n";
    }
  }
  return kOk;
}

int cmd_replay(std::ostream& out, std::ostream& err, const std::string& manifest_path) {
  const auto bytes = read_file(manifest_path);
  json m;
  try {
    m = json::parse(bytes.begin(), bytes.end());
  } catch (const json::exception& e) {
    throw ParseError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!m.is_object() || m.value("format", "") != kManifestFormat || !m.contains("config") || !m.contains("runs")) {
    throw ParseError("not a simulation manifest");
  }
  std::istringstream cfg(m["config"].get<std::string>());
  const SimConfig config = parse_config(cfg, std::filesystem::absolute(manifest_path).parent_path());
  const auto rows = simulate(config);
  const SimOutputs files = render_outputs(config, rows);
  const json fresh = build_manifest(config, rows, files);
  bool same = fresh["runs"] == m["runs"];
  if (m.contains("files")) same = same && fresh["files"] == m["files"];
  if (!same) {
    err << "replay differs from manifest\n  recorded: " << m["runs"].dump() << "\n  replayed: " << fresh["runs"].dump()
        << '\n';
    return kDataError;
  }
  out << "replay identical (" << rows.size() << " runs)\n";
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"NoC confidentiality toolkit: quasigroup transform codec, disjoint route planner, "
               "eavesdropping evaluator and mesh simulator"};
  app.name("nocsec");
  app.require_subcommand(1);

  std::uint32_t prime = 17;
  std::uint64_t seed = 1;

  auto* qg = app.add_subcommand("qg", "Generate a keyed quasigroup and print its tables");
  bool no_tables = false;
  qg->add_option("--prime", prime, "Fermat prime (3, 5, 17, 257, 65537)")->required();
  qg->add_option("--seed", seed, "Key seed")->required();
  qg->add_flag("--no-tables", no_tables, "Print only the key and leader");

  auto* aont = app.add_subcommand("aont", "Encode or decode a message");
  aont->require_subcommand(1);
  auto* enc = aont->add_subcommand("encode", "Transform a file into two part files");
  std::string in;
  std::string out1;
  std::string out2;
  std::uint64_t pkt_id = 0;
  enc->add_option("--in", in, "Input message file")->required();
  enc->add_option("--prime", prime, "Fermat prime")->required();
  enc->add_option("--seed", seed, "Key seed")->required();
  enc->add_option("--out1", out1, "Part 1 output")->required();
  enc->add_option("--out2", out2, "Part 2 output")->required();
  enc->add_option("--pkt-id", pkt_id, "Packet id stored in both parts");
  auto* dec = aont->add_subcommand("decode", "Reassemble two part files into the message");
  std::string in1;
  std::string in2;
  std::string dest;
  dec->add_option("--in1", in1, "First part file")->required();
  dec->add_option("--in2", in2, "Second part file")->required();
  dec->add_option("--out", dest, "Recovered message output")->required();

  auto* route = app.add_subcommand("route", "Route planning");
  route->require_subcommand(1);
  auto* plan = route->add_subcommand("plan", "Plan the two disjoint paths for one pair");
  std::string mesh = "8x8";
  std::string src;
  std::string dst;
  plan->add_option("--mesh", mesh, "Mesh size WxH")->required();
  plan->add_option("--src", src, "Source x,y")->required();
  plan->add_option("--dst", dst, "Destination x,y")->required();
  plan->add_option("--seed", seed, "Pivot seed")->required();

  auto* eval = app.add_subcommand("eval", "Security evaluation");
  eval->require_subcommand(1);
  auto* eaves = eval->add_subcommand("eavesdrop", "Exhaustive interception probability");
  int attackers = 1;
  std::string defense = "none";
  std::string format = "text";
  unsigned threads = 0;
  eaves->add_option("--mesh", mesh, "Mesh size WxH")->required();
  eaves->add_option("--attackers", attackers, "Number of colluding routers (1 or 2)")->required();
  eaves->add_option("--defense", defense, "none or aont")->required();
  eaves->add_option("--format", format, "text or csv")->check(CLI::IsMember({"text", "csv"}));
  eaves->add_option("--threads", threads, "Worker threads (0 = hardware)");
  auto* table = eval->add_subcommand("table", "Every mesh/defense/attacker combination on 4x4 and 8x8");
  table->add_option("--format", format, "text or csv")->check(CLI::IsMember({"text", "csv"}));
  table->add_option("--threads", threads, "Worker threads (0 = hardware)");

  auto* sim = app.add_subcommand("sim", "Run the mesh simulator from a config file");
  std::string config_path;
  std::string out_dir;
  sim->add_option("--config", config_path, "Config file")->required();
  sim->add_option("--out-dir", out_dir, "Directory for stats.csv, stats.json and manifest.json")->required();

  auto* replay = app.add_subcommand("replay", "Re-run a simulation manifest and compare hashes");
  std::string manifest;
  replay->add_option("manifest", manifest, "manifest.json written by sim")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (qg->parsed()) return cmd_qg(out, prime, seed, !no_tables);
    if (enc->parsed()) return cmd_encode(out, in, prime, seed, out1, out2, pkt_id);
    if (dec->parsed()) return cmd_decode(out, in1, in2, dest);
    if (plan->parsed()) return cmd_route(out, mesh, src, dst, seed);
    if (eaves->parsed()) {
      print_eavesdrop(out, {evaluate(MeshDims::parse(mesh), parse_defense(defense), attackers, threads)}, format);
      return kOk;
    }
    if (table->parsed()) {
      std::vector<EavesdropReport> reports;
      for (const char* m : {"4x4", "8x8"}) {
        for (Defense d : {Defense::None, Defense::Aont}) {
          for (int k : {1, 2}) reports.push_back(evaluate(MeshDims::parse(m), d, k, threads));
        }
      }
      print_eavesdrop(out, reports, format);
      return kOk;
    }
    if (sim->parsed()) return cmd_sim(out, config_path, out_dir);
    if (replay->parsed()) return cmd_replay(out, err, manifest);
  } catch (const DeadlockError& e) {
    err << "deadlock: " << e.what() << '\n';
    return kInternalError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  err << app.help();
  return kUsage;
}

}  // namespace nocsec::tools
