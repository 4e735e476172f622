#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "io.hpp"
#include "oracles.hpp"

using namespace nocsec::tools;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "nocsec_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli({}).code, kUsage);
  EXPECT_EQ(cli({"nope"}).code, kUsage);
  EXPECT_EQ(cli({"qg", "--prime", "5"}).code, kUsage);
  EXPECT_EQ(cli({"--help"}).code, kOk);
}

TEST(Cli, QuasigroupPrintingIsDeterministic) {
  const auto a = cli({"qg", "--prime", "5", "--seed", "1"});
  EXPECT_EQ(a.code, kOk);
  EXPECT_NE(a.out.find("table"), std::string::npos);
  EXPECT_NE(a.out.find("dual"), std::string::npos);
  EXPECT_EQ(cli({"qg", "--prime", "5", "--seed", "1"}).out, a.out);
  const auto bad = cli({"qg", "--prime", "7", "--seed", "1"});
  EXPECT_EQ(bad.code, kDataError);
  EXPECT_FALSE(bad.err.empty());
}

TEST(Cli, EncodeDecodeRoundTrip) {
  const auto dir = scratch("aont");
  const auto msg = oracle::Gen(5).bytes(777);
  write_file_atomic(dir / "m.bin", msg);
  const auto enc = cli({"aont", "encode", "--in", (dir / "m.bin").string(), "--prime", "17", "--seed", "4", "--out1",
                        (dir / "p1").string(), "--out2", (dir / "p2").string(), "--pkt-id", "9"});
  ASSERT_EQ(enc.code, kOk) << enc.err;
  const auto dec = cli({"aont", "decode", "--in1", (dir / "p2").string(), "--in2", (dir / "p1").string(), "--out",
                        (dir / "r.bin").string()});
  ASSERT_EQ(dec.code, kOk) << dec.err;
  EXPECT_EQ(read_file(dir / "r.bin"), msg);

  EXPECT_EQ(cli({"aont", "decode", "--in1", (dir / "p1").string(), "--in2", (dir / "p1").string(), "--out",
                 (dir / "x").string()})
                .code,
            kDataError);
  auto truncated = read_file(dir / "p2");
  truncated.pop_back();
  write_file_atomic(dir / "p2t", truncated);
  const auto t = cli({"aont", "decode", "--in1", (dir / "p1").string(), "--in2", (dir / "p2t").string(), "--out",
                      (dir / "x").string()});
  EXPECT_EQ(t.code, kDataError);
  EXPECT_NE(t.err.find("truncated"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir / "x"));
}

TEST(Cli, RoutePlanShowsFlipAndGrid) {
  const auto r = cli({"route", "plan", "--mesh", "4x4", "--src", "0,1", "--dst", "3,1", "--seed", "2"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("flip_route true"), std::string::npos);
  EXPECT_NE(r.out.find('S'), std::string::npos);
  EXPECT_NE(r.out.find('D'), std::string::npos);
  EXPECT_EQ(cli({"route", "plan", "--mesh", "1x4", "--src", "0,0", "--dst", "0,3", "--seed", "2"}).code, kDataError);
  EXPECT_EQ(cli({"route", "plan", "--mesh", "4x4", "--src", "1,1", "--dst", "1,1", "--seed", "2"}).code, kDataError);
  EXPECT_EQ(cli({"route", "plan", "--mesh", "4x4", "--src", "1;1", "--dst", "2,2", "--seed", "2"}).code, kDataError);
}

TEST(Cli, EavesdropCsvAndText) {
  const auto csv = cli({"eval", "eavesdrop", "--mesh", "4x4", "--attackers", "1", "--defense", "aont", "--format", "csv"});
  ASSERT_EQ(csv.code, kOk) << csv.err;
  EXPECT_EQ(csv.out, "mesh,defense,attackers,scenarios,intercepted,probability_pct\n4x4,aont,1,3360,0,0.0000\n");
  const auto text = cli({"eval", "eavesdrop", "--mesh", "4x4", "--attackers", "1", "--defense", "none"});
  EXPECT_NE(text.out.find("11.9048%"), std::string::npos);
  EXPECT_NE(text.out.find("convention:"), std::string::npos);
  EXPECT_EQ(cli({"eval", "eavesdrop", "--mesh", "4by4", "--attackers", "1", "--defense", "none"}).code, kDataError);
  EXPECT_EQ(cli({"eval", "eavesdrop", "--mesh", "4x4", "--attackers", "1", "--defense", "none", "--format", "xml"}).code,
            kUsage);
}

TEST(Cli, SimWritesOutputsAndReplays) {
  const auto dir = scratch("sim");
  std::ofstream(dir / "run.cfg") << "mesh = 4x4\nmode = compare\ntraffic = uniform\nseed = 5\n"
                                    "warmup_cycles = 100\nmeasure_cycles = 800\ninjection_rate = 0.01\n";
  const auto r = cli({"sim", "--config", (dir / "run.cfg").string(), "--out-dir", (dir / "out").string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  for (const char* f : {"stats.csv", "stats.json", "manifest.json"}) EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
  const auto csv = read_file(dir / "out" / "stats.csv");
  EXPECT_EQ(std::string(csv.begin(), csv.end()), r.out);

  const auto replay = cli({"replay", (dir / "out" / "manifest.json").string()});
  EXPECT_EQ(replay.code, kOk) << replay.err;

  // Tamper with a recorded hash.
  auto manifest = read_file(dir / "out" / "manifest.json");
  std::string text(manifest.begin(), manifest.end());
  const auto pos = text.find("\"event_hash\": \"") + 15;
  text[pos] = text[pos] == '0' ? '1' : '0';
  write_file_atomic(dir / "out" / "bad.json", text);
  EXPECT_EQ(cli({"replay", (dir / "out" / "bad.json").string()}).code, kDataError);
  write_file_atomic(dir / "out" / "junk.json", std::string("{not json"));
  EXPECT_EQ(cli({"replay", (dir / "out" / "junk.json").string()}).code, kDataError);
}

TEST(Cli, ShippedTraceConfigDeliversEveryEvent) {
  const auto dir = scratch("trace");
  const auto r = cli({"sim", "--config", std::string(NOCSEC_CONFIG_DIR) + "/trace4x4.cfg", "--out-dir", dir.string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  std::istringstream rows(r.out);
  std::string line;
  std::getline(rows, line);
  int n = 0;
  while (std::getline(rows, line)) {
    ++n;
    EXPECT_NE(line.find(",200,"), std::string::npos) << line;
  }
  EXPECT_EQ(n, 3);
}

TEST(Cli, SimConfigErrorsNameTheKey) {
  const auto dir = scratch("simerr");
  std::ofstream(dir / "bad.cfg") << "mesh = 4x4\nmode = none\ntraffic = uniform\n";
  const auto r = cli({"sim", "--config", (dir / "bad.cfg").string(), "--out-dir", (dir / "out").string()});
  EXPECT_EQ(r.code, kDataError);
  EXPECT_NE(r.err.find("seed"), std::string::npos);
}

TEST(Io, AtomicWriteReplacesWholeFile) {
  const auto dir = scratch("io");
  write_file_atomic(dir / "f", std::string("first version, longer"));
  write_file_atomic(dir / "f", std::string("second"));
  const auto bytes = read_file(dir / "f");
  EXPECT_EQ(std::string(bytes.begin(), bytes.end()), "second");
  EXPECT_FALSE(fs::exists(dir / "f.tmp"));
  EXPECT_EQ(fnv1a64(std::string_view("")), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64(std::string_view("a")), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(hex64(255), "00000000000000ff");
}
