#include "nocsec/codec.hpp"

#include <array>
#include <string>

#include "nocsec/error.hpp"

namespace nocsec::codec {
namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'A', 'O', 'N', '1'};

void put_be(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
  for (int i = bytes - 1; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_be(std::span<const std::uint8_t> in, std::size_t offset, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v = (v << 8) | in[offset + i];
  return v;
}

}  // namespace

std::size_t payload_bits(const AontParams& params, int part, std::size_t s) {
  return part_block_count(part, s) * params.n * params.element_bits;
}

std::size_t encoded_size(const AontParams& params, int part, std::size_t s) {
  return kHeaderSize + (payload_bits(params, part, s) + 7) / 8;
}

std::vector<std::uint8_t> encode_part(const PacketPayload& payload) {
  if (payload.part != 1 && payload.part != 2) throw ParameterError("part must be 1 or 2");
  if (payload.blocks.size() != part_block_count(payload.part, payload.s)) {
    throw ParameterError("payload block count does not match s");
  }
  const AontParams& params = payload.params;
  std::vector<std::uint8_t> out;
  out.reserve(encoded_size(params, payload.part, payload.s));
  for (const std::uint8_t b : kMagic) out.push_back(b);
  put_be(out, params.p, 4);
  put_be(out, payload.s, 4);
  put_be(out, payload.orig_len_bytes, 8);
  put_be(out, payload.pkt_id, 8);
  out.push_back(static_cast<std::uint8_t>(payload.part));

  std::uint32_t acc = 0;
  int acc_bits = 0;
  for (const auto& block : payload.blocks) {
    if (block.size() != params.n) throw ParameterError("block length does not match n");
    for (Symbol sym : block) {
      const std::uint32_t digit = sym == params.n ? 0 : sym;
      acc = (acc << params.element_bits) | digit;
      acc_bits += static_cast<int>(params.element_bits);
      while (acc_bits >= 8) {
        acc_bits -= 8;
        out.push_back(static_cast<std::uint8_t>(acc >> acc_bits));
      }
      acc &= (1u << acc_bits) - 1;
    }
  }
  if (acc_bits > 0) out.push_back(static_cast<std::uint8_t>(acc << (8 - acc_bits)));
  return out;
}

PacketPayload decode_part(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize) throw CorruptionError("part file shorter than header");
  for (std::size_t i = 0; i < kMagic.size(); ++i) {
    if (bytes[i] != kMagic[i]) throw CorruptionError("bad magic");
  }
  const auto p = static_cast<std::uint32_t>(get_be(bytes, 4, 4));
  if (!is_supported_prime(p)) throw CorruptionError("unsupported prime " + std::to_string(p));

  PacketPayload payload;
  payload.params = AontParams::for_prime(p);
  payload.s = get_be(bytes, 8, 4);
  payload.orig_len_bytes = get_be(bytes, 12, 8);
  payload.pkt_id = get_be(bytes, 20, 8);
  payload.part = bytes[28];
  if (payload.part != 1 && payload.part != 2) throw CorruptionError("invalid part number");
  if (payload.s < 2 || payload.s % 2 != 0) throw CorruptionError("invalid block count s");
  if (payload.s > max_block_count(payload.params)) throw CorruptionError("block count exceeds n^n");

  const std::size_t expected = encoded_size(payload.params, payload.part, payload.s);
  if (bytes.size() < expected) throw CorruptionError("part file truncated");
  if (bytes.size() > expected) throw CorruptionError("trailing bytes after part data");

  const AontParams& params = payload.params;
  const std::size_t count = part_block_count(payload.part, payload.s);
  payload.blocks.assign(count, Block(params.n));
  std::size_t bit = kHeaderSize * 8;
  for (auto& block : payload.blocks) {
    for (auto& sym : block) {
      std::uint32_t v = 0;
      for (std::uint32_t k = 0; k < params.element_bits; ++k, ++bit) {
        v = (v << 1) | ((bytes[bit / 8] >> (7 - bit % 8)) & 1u);
      }
      sym = v == 0 ? params.n : v;
    }
  }
  const std::size_t used_bits = bit - kHeaderSize * 8;
  if (used_bits % 8 != 0) {
    const std::uint8_t tail_mask = static_cast<std::uint8_t>(0xFFu >> (used_bits % 8));
    if (bytes.back() & tail_mask) throw CorruptionError("nonzero bits in final padding");
  }
  return payload;
}

}  // namespace nocsec::codec
