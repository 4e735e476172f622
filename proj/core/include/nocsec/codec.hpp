#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nocsec/aont.hpp"

namespace nocsec::codec {

// Part file layout (all integers big-endian):
//
//   offset  size  field
//   0       4     magic "AON1"
//   4       4     p
//   8       4     s
//   12      8     orig_len_bytes
//   20      8     pkt_id
//   28      1     part (1 or 2)
//   29      ...   symbols, element_bits each, MSB first; symbol n is stored
//                 as digit 0; the last byte is zero-padded
//
// The symbol count is part_block_count(part, s) * n, so the file length is
// fully determined by the header.

inline constexpr std::size_t kHeaderSize = 29;

std::vector<std::uint8_t> encode_part(const PacketPayload& payload);

/// Throws CorruptionError on bad magic, unsupported prime, invalid part,
/// truncated or oversized data.
PacketPayload decode_part(std::span<const std::uint8_t> bytes);

/// Exact encoded size of a part with the given header values.
std::size_t encoded_size(const AontParams& params, int part, std::size_t s);

/// Number of payload bits a part carries on the wire (symbols only).
std::size_t payload_bits(const AontParams& params, int part, std::size_t s);

}  // namespace nocsec::codec
