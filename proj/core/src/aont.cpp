#include "nocsec/aont.hpp"

#include <limits>
#include <string>

#include "nocsec/error.hpp"

namespace nocsec {
namespace {

std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p) {
  std::uint64_t result = 1, base = a, exp = p - 2;
  while (exp) {
    if (exp & 1) result = result * base % p;
    base = base * base % p;
    exp >>= 1;
  }
  return static_cast<std::uint32_t>(result);
}

void check_block(const Block& block, const AontParams& params) {
  if (block.size() != params.n) {
    throw CorruptionError("block has " + std::to_string(block.size()) + " symbols, expected " +
                          std::to_string(params.n));
  }
  for (Symbol s : block) {
    if (s < 1 || s > params.n) throw CorruptionError("symbol out of range in block");
  }
}

}  // namespace

std::uint64_t max_block_count(const AontParams& params) noexcept {
  std::uint64_t result = 1;
  for (std::uint32_t i = 0; i < params.n; ++i) {
    if (result > std::numeric_limits<std::uint64_t>::max() / params.n) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    result *= params.n;
  }
  return result;
}

std::size_t block_count_for(std::size_t len, const AontParams& params) {
  const std::size_t bits_per_block = static_cast<std::size_t>(params.n) * params.element_bits;
  std::size_t s = (len * 8 + bits_per_block - 1) / bits_per_block;
  if (s < 2) s = 2;
  if (s % 2) ++s;
  return s;
}

BlockedMessage bytes_to_blocks(std::span<const std::uint8_t> message, const AontParams& params) {
  if (message.empty()) throw ParameterError("message is empty");
  const std::size_t s = block_count_for(message.size(), params);
  if (s > max_block_count(params)) {
    throw ParameterError("message needs " + std::to_string(s) + " blocks, more than n^n = " +
                         std::to_string(max_block_count(params)) + " for p=" + std::to_string(params.p));
  }

  const std::size_t total_bits = message.size() * 8;
  const std::uint32_t bits = params.element_bits;
  BlockedMessage out;
  out.orig_len_bytes = message.size();
  out.blocks.assign(s, Block(params.n));
  std::size_t bit = 0;
  for (auto& block : out.blocks) {
    for (auto& sym : block) {
      std::uint32_t v = 0;
      for (std::uint32_t k = 0; k < bits; ++k, ++bit) {
        v <<= 1;
        if (bit < total_bits) v |= (message[bit / 8] >> (7 - bit % 8)) & 1u;
      }
      sym = v == 0 ? params.n : v;
    }
  }
  return out;
}

std::vector<std::uint8_t> blocks_to_bytes(std::span<const Block> blocks, const AontParams& params,
                                          std::size_t orig_len_bytes) {
  const std::size_t capacity_bits = blocks.size() * params.n * params.element_bits;
  if (orig_len_bytes * 8 > capacity_bits) {
    throw CorruptionError("original length exceeds block capacity");
  }
  std::vector<std::uint8_t> out(orig_len_bytes, 0);
  const std::size_t payload_bits = orig_len_bytes * 8;
  std::size_t bit = 0;
  for (const auto& block : blocks) {
    for (Symbol sym : block) {
      const std::uint32_t v = sym == params.n ? 0 : sym;
      for (std::uint32_t k = params.element_bits; k-- > 0; ++bit) {
        const std::uint32_t b = (v >> k) & 1u;
        if (bit < payload_bits) {
          out[bit / 8] |= static_cast<std::uint8_t>(b << (7 - bit % 8));
        } else if (b) {
          throw CorruptionError("nonzero padding after decoding");
        }
      }
    }
  }
  return out;
}

Block index_vector(std::uint64_t i, const AontParams& params) {
  if (i == 0 || i > max_block_count(params)) {
    throw ParameterError("block index " + std::to_string(i) + " out of range");
  }
  Block digits(params.n, params.n);
  for (std::size_t pos = params.n; pos-- > 0 && i != 0;) {
    const auto d = static_cast<Symbol>(i % params.n);
    digits[pos] = d == 0 ? params.n : d;
    i /= params.n;
  }
  return digits;
}

Block r_vector(std::uint64_t i, Symbol leader, const Quasigroup& q) {
  const Block index = index_vector(i, q.params());
  const std::size_t n = index.size();
  Block r(n);
  r[n - 1] = q.mul(leader, index[n - 1]);
  for (std::size_t j = n - 1; j-- > 0;) r[j] = q.mul_unchecked(r[j + 1], index[j]);
  return r;
}

Block star(const Block& a, const Block& b, const AontParams& params) {
  if (a.size() != b.size()) throw ParameterError("block length mismatch");
  Block c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    c[i] = static_cast<Symbol>(static_cast<std::uint64_t>(a[i]) * b[i] % params.p);
  }
  return c;
}

Block star_div(const Block& a, const Block& b, const AontParams& params) {
  if (a.size() != b.size()) throw ParameterError("block length mismatch");
  Block c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (b[i] % params.p == 0) throw ParameterError("division by zero symbol");
    c[i] = static_cast<Symbol>(static_cast<std::uint64_t>(a[i]) * inverse_mod(b[i], params.p) % params.p);
  }
  return c;
}

Block chain_product(std::span<const Block> blocks, const AontParams& params) {
  if (blocks.empty()) throw ParameterError("empty chain");
  Block c = blocks.front();
  for (std::size_t i = 1; i < blocks.size(); ++i) c = star(c, blocks[i], params);
  return c;
}

AontCiphertext transform_with_key(std::span<const std::uint8_t> message, const AontParams& params,
                                  const KeyPermutation& key) {
  BlockedMessage blocked = bytes_to_blocks(message, params);
  const Quasigroup q = Quasigroup::generate(key, params);
  const Symbol l = leader(q, key);

  AontCiphertext ct;
  ct.params = params;
  ct.s = blocked.blocks.size();
  ct.orig_len_bytes = blocked.orig_len_bytes;
  ct.blocks.reserve(ct.s + 1);
  for (std::size_t i = 0; i < ct.s; ++i) {
    const Block r = r_vector(i + 1, l, q);
    const Block& h = blocked.blocks[i];
    Block masked(params.n);
    for (std::size_t j = 0; j < params.n; ++j) masked[j] = q.mul_unchecked(r[j], h[j]);
    ct.blocks.push_back(std::move(masked));
  }
  // The chain runs over pseudo-blocks so the receiver can rebuild it before
  // it knows the key.
  const Block chain = chain_product(ct.blocks, params);
  const Block key_block(key.symbols().begin(), key.symbols().end());
  ct.blocks.push_back(star(chain, key_block, params));
  return ct;
}

AontCiphertext transform(std::span<const std::uint8_t> message, const AontParams& params,
                         std::uint64_t rng_seed) {
  return transform_with_key(message, params, random_key(rng_seed, params));
}

Block recover_key_block(std::span<const Block> pseudo_blocks, const AontParams& params) {
  if (pseudo_blocks.size() < 2) throw IncompleteCiphertextError("need at least two blocks");
  const Block chain = chain_product(pseudo_blocks.first(pseudo_blocks.size() - 1), params);
  return star_div(pseudo_blocks.back(), chain, params);
}

std::vector<Block> recover_message_blocks(std::span<const Block> pseudo_blocks, const AontParams& params) {
  Block key_block = recover_key_block(pseudo_blocks, params);
  if (!KeyPermutation::is_permutation(key_block, params.n)) {
    throw CorruptionError("recovered key is not a permutation");
  }
  const KeyPermutation key(std::move(key_block), params);
  const Quasigroup q = Quasigroup::generate(key, params);
  const Symbol l = leader(q, key);

  const std::size_t s = pseudo_blocks.size() - 1;
  std::vector<Block> plain;
  plain.reserve(s);
  for (std::size_t i = 0; i < s; ++i) {
    const Block r = r_vector(i + 1, l, q);
    const Block& masked = pseudo_blocks[i];
    Block h(params.n);
    for (std::size_t j = 0; j < params.n; ++j) h[j] = q.dual_mul_unchecked(r[j], masked[j]);
    plain.push_back(std::move(h));
  }
  return plain;
}

std::vector<std::uint8_t> inverse(const AontCiphertext& ct) {
  if (!is_supported_prime(ct.params.p) || ct.params != AontParams::for_prime(ct.params.p)) {
    throw CorruptionError("invalid ciphertext parameters");
  }
  if (ct.s < 2 || ct.s % 2 != 0) throw CorruptionError("block count s must be even and >= 2");
  if (ct.blocks.size() < ct.s + 1) {
    throw IncompleteCiphertextError("ciphertext has " + std::to_string(ct.blocks.size()) + " of " +
                                    std::to_string(ct.s + 1) + " blocks");
  }
  if (ct.blocks.size() > ct.s + 1) throw CorruptionError("ciphertext has extra blocks");
  for (const auto& block : ct.blocks) check_block(block, ct.params);

  const std::vector<Block> plain = recover_message_blocks(ct.blocks, ct.params);
  return blocks_to_bytes(plain, ct.params, ct.orig_len_bytes);
}

std::pair<PacketPayload, PacketPayload> packetize(const AontCiphertext& ct, std::uint64_t pkt_id) {
  if (ct.blocks.size() != ct.s + 1) throw IncompleteCiphertextError("ciphertext is incomplete");
  const auto half = static_cast<std::ptrdiff_t>(ct.s / 2);
  PacketPayload first{1, pkt_id, ct.params, ct.s, ct.orig_len_bytes,
                      std::vector<Block>(ct.blocks.begin(), ct.blocks.begin() + half)};
  PacketPayload second{2, pkt_id, ct.params, ct.s, ct.orig_len_bytes,
                       std::vector<Block>(ct.blocks.begin() + half, ct.blocks.end())};
  return {std::move(first), std::move(second)};
}

AontCiphertext reassemble(const PacketPayload& a, const PacketPayload& b) {
  if (a.pkt_id != b.pkt_id) {
    throw ReassemblyError("packet id mismatch: " + std::to_string(a.pkt_id) + " vs " +
                          std::to_string(b.pkt_id));
  }
  if (a.part == b.part) throw ReassemblyError("duplicate part " + std::to_string(a.part));
  const PacketPayload& first = a.part == 1 ? a : b;
  const PacketPayload& second = a.part == 1 ? b : a;
  if (first.part != 1 || second.part != 2) throw ReassemblyError("part numbers must be 1 and 2");
  if (first.params != second.params || first.s != second.s ||
      first.orig_len_bytes != second.orig_len_bytes) {
    throw ReassemblyError("part headers disagree");
  }
  if (first.blocks.size() != part_block_count(1, first.s) ||
      second.blocks.size() != part_block_count(2, second.s)) {
    throw ReassemblyError("wrong block count in part");
  }
  AontCiphertext ct;
  ct.params = first.params;
  ct.s = first.s;
  ct.orig_len_bytes = first.orig_len_bytes;
  ct.blocks = first.blocks;
  ct.blocks.insert(ct.blocks.end(), second.blocks.begin(), second.blocks.end());
  return ct;
}

}  // namespace nocsec
