#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nocsec/quasigroup.hpp"

namespace nocsec {

/// n symbols. Used for message blocks, pseudo-blocks, index vectors and chain values.
using Block = std::vector<Symbol>;

/// The s+1 pseudo-blocks produced by the transform. The last block mixes the
/// chained product of the first s with the (discarded) key permutation.
struct AontCiphertext {
  AontParams params;
  std::size_t s = 0;
  std::size_t orig_len_bytes = 0;
  std::vector<Block> blocks;

  bool operator==(const AontCiphertext&) const = default;
};

/// One of the two packet payloads: part 1 carries blocks 1..s/2, part 2
/// carries blocks s/2+1..s+1.
struct PacketPayload {
  int part = 1;
  std::uint64_t pkt_id = 0;
  AontParams params;
  std::size_t s = 0;
  std::size_t orig_len_bytes = 0;
  std::vector<Block> blocks;

  bool operator==(const PacketPayload&) const = default;
};

struct BlockedMessage {
  std::vector<Block> blocks;
  std::size_t orig_len_bytes = 0;
};

/// Splits a message into element_bits-wide chunks (MSB first) and maps each
/// chunk value v to symbol v, or to symbol n when v is zero. Zero-pads to an
/// even block count s >= 2. Throws ParameterError for an empty message or
/// when s would exceed n^n.
BlockedMessage bytes_to_blocks(std::span<const std::uint8_t> message, const AontParams& params);

/// Inverse of bytes_to_blocks. Throws CorruptionError if the bits past
/// orig_len_bytes are not zero.
std::vector<std::uint8_t> blocks_to_bytes(std::span<const Block> blocks, const AontParams& params,
                                          std::size_t orig_len_bytes);

/// Number of blocks bytes_to_blocks produces for a message of `len` bytes.
std::size_t block_count_for(std::size_t len, const AontParams& params);

/// Largest block index the index vectors can represent (n^n, saturated).
std::uint64_t max_block_count(const AontParams& params) noexcept;

/// Base-n digits of i, most significant first, length n; digit 0 is symbol n.
/// i is taken modulo n^n, so i = n^n gives the all-zero vector.
Block index_vector(std::uint64_t i, const AontParams& params);

/// Mask vector for block i: r_n = l • I_n, then r_j = r_(j+1) • I_j right to left.
Block r_vector(std::uint64_t i, Symbol leader, const Quasigroup& q);

/// Elementwise (a_i · b_i) mod p.
Block star(const Block& a, const Block& b, const AontParams& params);
/// Elementwise (a_i · b_i^-1) mod p.
Block star_div(const Block& a, const Block& b, const AontParams& params);

/// Chained product C_1 = B'_1, C_i = C_(i-1) ∗ B'_i over the given blocks.
Block chain_product(std::span<const Block> blocks, const AontParams& params);

/// Transform with a fresh key drawn from `rng_seed`.
AontCiphertext transform(std::span<const std::uint8_t> message, const AontParams& params,
                         std::uint64_t rng_seed);

/// Transform with an explicit key.
AontCiphertext transform_with_key(std::span<const std::uint8_t> message, const AontParams& params,
                                  const KeyPermutation& key);

/// Recovers the original message. Throws IncompleteCiphertextError when
/// blocks are missing and CorruptionError when the recovered key is not a
/// permutation or the padding is inconsistent.
std::vector<std::uint8_t> inverse(const AontCiphertext& ct);

/// Unmasks the first s pseudo-blocks (last block is key material). Throws
/// CorruptionError if the recovered key is not a permutation.
std::vector<Block> recover_message_blocks(std::span<const Block> pseudo_blocks, const AontParams& params);

/// Recovers K' = B'_(s+1) ⊘ C_s without validating it.
Block recover_key_block(std::span<const Block> pseudo_blocks, const AontParams& params);

std::pair<PacketPayload, PacketPayload> packetize(const AontCiphertext& ct, std::uint64_t pkt_id);

/// Orders the parts by part number and rebuilds the ciphertext. Throws
/// ReassemblyError on id mismatch, duplicate part or wrong block counts.
AontCiphertext reassemble(const PacketPayload& a, const PacketPayload& b);

/// Blocks carried by part 1 and part 2 for a given s.
constexpr std::size_t part_block_count(int part, std::size_t s) noexcept {
  return part == 1 ? s / 2 : s / 2 + 1;
}

}  // namespace nocsec
