#include <gtest/gtest.h>

#include <algorithm>

#include "nocsec/aont.hpp"
#include "nocsec/error.hpp"
#include "oracles.hpp"

using namespace nocsec;

namespace {

const AontParams kP5 = AontParams::for_prime(5);
const AontParams kP17 = AontParams::for_prime(17);

}  // namespace

TEST(BytesToBlocks, SymbolMapping) {
  // 0x1B = 00 01 10 11 -> symbols 4 1 2 3, then a zero pad block.
  const std::vector<std::uint8_t> msg{0x1B};
  const auto bm = bytes_to_blocks(msg, kP5);
  EXPECT_EQ(bm.orig_len_bytes, 1u);
  ASSERT_EQ(bm.blocks.size(), 2u);
  EXPECT_EQ(bm.blocks[0], (Block{4, 1, 2, 3}));
  EXPECT_EQ(bm.blocks[1], (Block{4, 4, 4, 4}));
}

TEST(BytesToBlocks, BlockCountIsEvenAndAtLeastTwo) {
  for (std::uint32_t p : {3u, 5u, 17u, 257u}) {
    const auto params = AontParams::for_prime(p);
    for (std::size_t len = 1; len <= 200; ++len) {
      const std::size_t bits_per_block = std::size_t{params.n} * params.element_bits;
      std::size_t s = (len * 8 + bits_per_block - 1) / bits_per_block;
      s = std::max<std::size_t>(2, s + (s % 2));
      ASSERT_EQ(block_count_for(len, params), s) << p << " " << len;
    }
  }
}

TEST(BytesToBlocks, RoundTripsAndRejectsBadInput) {
  oracle::Gen g(11);
  for (int t = 0; t < 200; ++t) {
    const auto msg = g.bytes(1 + g.below(100));
    const auto bm = bytes_to_blocks(msg, kP17);
    EXPECT_EQ(blocks_to_bytes(bm.blocks, kP17, bm.orig_len_bytes), msg);
  }
  EXPECT_THROW(bytes_to_blocks(std::vector<std::uint8_t>{}, kP5), ParameterError);
  // p=3 represents at most 2^2 = 4 blocks of 2 bits: one byte fits, two do not.
  EXPECT_NO_THROW(bytes_to_blocks(std::vector<std::uint8_t>(1), AontParams::for_prime(3)));
  EXPECT_THROW(bytes_to_blocks(std::vector<std::uint8_t>(2), AontParams::for_prime(3)), ParameterError);
}

TEST(BlocksToBytes, NonZeroPaddingIsCorruption) {
  const std::vector<std::uint8_t> msg{0xFF};
  auto bm = bytes_to_blocks(msg, kP5);
  bm.blocks[1][0] = 1;
  EXPECT_THROW(blocks_to_bytes(bm.blocks, kP5, 1), CorruptionError);
}

TEST(IndexVector, Examples) {
  EXPECT_EQ(index_vector(1, kP5), (Block{4, 4, 4, 1}));
  EXPECT_EQ(index_vector(4, kP5), (Block{4, 4, 1, 4}));
  EXPECT_EQ(index_vector(5, kP5), (Block{4, 4, 1, 1}));
  EXPECT_EQ(index_vector(256, kP5), (Block{4, 4, 4, 4}));
  EXPECT_THROW(index_vector(0, kP5), ParameterError);
  EXPECT_THROW(index_vector(257, kP5), ParameterError);
}

TEST(IndexVector, MatchesOracleAndIsInjective) {
  std::vector<Block> seen;
  for (std::uint64_t i = 1; i <= 256; ++i) {
    const Block v = index_vector(i, kP5);
    EXPECT_EQ(v, oracle::index_vector(i, 4));
    seen.push_back(v);
  }
  std::sort(seen.begin(), seen.end());
  EXPECT_EQ(std::unique(seen.begin(), seen.end()), seen.end());
  for (std::uint64_t i : {1ull, 17ull, 999ull, 123456ull}) EXPECT_EQ(index_vector(i, kP17), oracle::index_vector(i, 16));
}

TEST(RVector, HandFoldOverIdentityKeyTable) {
  const KeyPermutation key({1, 2, 3, 4}, kP5);
  const auto q = Quasigroup::generate(key, kP5);
  // r4 = 4•1 = 4, r3 = 4•4 = 1, r2 = 1•4 = 4, r1 = 4•4 = 1.
  EXPECT_EQ(r_vector(1, 4, q), (Block{1, 4, 1, 4}));
  EXPECT_EQ(r_vector(1, 4, q), r_vector(1, 4, q));
}

TEST(RVector, MatchesOracleFold) {
  for (std::uint32_t p : {3u, 5u, 17u}) {
    const auto params = AontParams::for_prime(p);
    const auto key = random_key(p, params);
    const auto q = Quasigroup::generate(key, params);
    const auto t = oracle::table(p, {key.symbols().begin(), key.symbols().end()});
    const std::uint64_t limit = p == 3 ? 4 : 40;
    for (std::uint64_t i = 1; i <= limit; ++i) {
      for (Symbol l = 1; l <= params.n; ++l) ASSERT_EQ(r_vector(i, l, q), oracle::r_vector(t, i, l));
    }
  }
}

TEST(Star, ExamplesAndIdentities) {
  EXPECT_EQ(star({2, 3, 4, 1}, {3, 3, 2, 4}, kP5), (Block{1, 4, 3, 4}));
  EXPECT_EQ(star_div({1, 4, 3, 4}, {3, 3, 2, 4}, kP5), (Block{2, 3, 4, 1}));
  EXPECT_EQ(star({2, 3, 4, 1}, {1, 1, 1, 1}, kP5), (Block{2, 3, 4, 1}));
  EXPECT_EQ(star_div({2, 3, 4, 1}, {2, 3, 4, 1}, kP5), (Block{1, 1, 1, 1}));
  oracle::Gen g(5);
  for (int t = 0; t < 300; ++t) {
    Block a(16);
    Block b(16);
    for (auto& x : a) x = static_cast<Symbol>(1 + g.below(16));
    for (auto& x : b) x = static_cast<Symbol>(1 + g.below(16));
    EXPECT_EQ(star_div(star(a, b, kP17), b, kP17), a);
  }
  EXPECT_THROW(star({1, 2}, {1, 2, 3, 4}, kP5), ParameterError);
}

TEST(Transform, ShapeAndDeterminism) {
  const std::vector<std::uint8_t> msg(64, 0xA5);
  const auto ct = transform(msg, kP17, 9);
  EXPECT_EQ(ct.s, 8u);
  EXPECT_EQ(ct.blocks.size(), 9u);
  EXPECT_EQ(ct.orig_len_bytes, 64u);
  EXPECT_EQ(ct, transform(msg, kP17, 9));
  EXPECT_NE(ct, transform(msg, kP17, 10));
  EXPECT_THROW(transform(std::vector<std::uint8_t>{}, kP17, 1), ParameterError);
}

TEST(Transform, LastBlockHidesKeyBehindChain) {
  const KeyPermutation key = random_key(4, kP17);
  const auto ct = transform_with_key(std::vector<std::uint8_t>(40, 7), kP17, key);
  Block chain = ct.blocks[0];
  for (std::size_t i = 1; i < ct.s; ++i) chain = star(chain, ct.blocks[i], kP17);
  EXPECT_EQ(star(chain, Block(key.symbols().begin(), key.symbols().end()), kP17), ct.blocks.back());
  EXPECT_EQ(recover_key_block(ct.blocks, kP17), Block(key.symbols().begin(), key.symbols().end()));
}

TEST(Transform, RoundTripProperty) {
  oracle::Gen g(2024);
  for (std::uint32_t p : {5u, 17u, 257u}) {
    const auto params = AontParams::for_prime(p);
    for (int t = 0; t < 150; ++t) {
      const auto msg = g.bytes(1 + g.below(256));
      const auto ct = transform(msg, params, g.next());
      ASSERT_EQ(inverse(ct), msg) << "p=" << p << " len=" << msg.size();
    }
  }
}

TEST(Transform, LargestPrimeRoundTrip) {
  const auto params = AontParams::for_prime(65537);
  const auto msg = oracle::Gen(8).bytes(300000);
  EXPECT_EQ(inverse(transform(msg, params, 3)), msg);
}

TEST(Inverse, MissingBlocksAreIncomplete) {
  auto ct = transform(std::vector<std::uint8_t>(20, 1), kP17, 1);
  ct.blocks.pop_back();
  EXPECT_THROW(inverse(ct), IncompleteCiphertextError);
}

TEST(Inverse, MutatedBlockNeverYieldsOriginal) {
  oracle::Gen g(77);
  int corrupt = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto msg = g.bytes(1 + g.below(64));
    auto ct = transform(msg, kP17, g.next());
    const std::size_t victim = g.below(ct.blocks.size());
    const Block before = ct.blocks[victim];
    do {
      for (auto& x : ct.blocks[victim]) x = static_cast<Symbol>(1 + g.below(16));
    } while (ct.blocks[victim] == before);
    try {
      EXPECT_NE(inverse(ct), msg);
    } catch (const CorruptionError&) {
      ++corrupt;
    }
  }
  EXPECT_GT(corrupt, 900);
}

TEST(Packetize, SplitsAtHalf) {
  const auto ct = transform(std::vector<std::uint8_t>(4, 3), kP5, 4);
  ASSERT_EQ(ct.s, 4u);
  const auto [a, b] = packetize(ct, 77);
  EXPECT_EQ(a.part, 1);
  EXPECT_EQ(b.part, 2);
  EXPECT_EQ(a.blocks.size(), 2u);
  EXPECT_EQ(b.blocks.size(), 3u);
  EXPECT_EQ(a.pkt_id, 77u);
  EXPECT_EQ(reassemble(b, a), ct);
  EXPECT_EQ(part_block_count(1, 4), 2u);
  EXPECT_EQ(part_block_count(2, 4), 3u);
}

TEST(Reassemble, RejectsMismatchedParts) {
  const auto ct = transform(std::vector<std::uint8_t>(4, 3), kP5, 4);
  auto [a, b] = packetize(ct, 1);
  EXPECT_THROW(reassemble(a, a), ReassemblyError);
  auto other = b;
  other.pkt_id = 2;
  EXPECT_THROW(reassemble(a, other), ReassemblyError);
  auto short_b = b;
  short_b.blocks.pop_back();
  EXPECT_THROW(reassemble(a, short_b), ReassemblyError);
}
