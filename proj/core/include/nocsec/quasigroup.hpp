#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace nocsec {

/// Symbols are the integers 1..n. The symbol n stands for the base-n digit 0;
/// that mapping is applied only when converting bytes to blocks.
using Symbol = std::uint32_t;

/// Field parameters for a quasigroup of order n = p - 1 over a Fermat prime p.
struct AontParams {
  std::uint32_t p = 17;
  std::uint32_t n = 16;
  std::uint32_t element_bits = 4;

  /// Throws ParameterError unless p is one of 3, 5, 17, 257, 65537.
  static AontParams for_prime(std::uint32_t p);

  bool operator==(const AontParams&) const = default;
};

bool is_supported_prime(std::uint32_t p) noexcept;

/// A permutation of {1..n}; the first row of the quasigroup table.
class KeyPermutation {
 public:
  /// Throws ParameterError on a wrong length, duplicate or out-of-range symbol.
  KeyPermutation(std::vector<Symbol> symbols, const AontParams& params);

  std::span<const Symbol> symbols() const noexcept { return symbols_; }
  std::size_t size() const noexcept { return symbols_.size(); }
  Symbol operator[](std::size_t i) const { return symbols_[i]; }

  bool operator==(const KeyPermutation&) const = default;

  /// True when `symbols` is a permutation of {1..n}.
  static bool is_permutation(std::span<const Symbol> symbols, std::uint32_t n);

 private:
  std::vector<Symbol> symbols_;
};

/// Quasigroup <Q,•> with its dual <Q,∘>, built from a key permutation.
///
/// Row i of the multiplication table is row 1 (the key) scaled by i mod p,
/// and the dual is the row-wise inverse permutation, so that
/// a ∘ (a • b) = b and a • (a ∘ b) = b. Tables are materialized for
/// orders up to 256; order 65536 evaluates both operations arithmetically.
class Quasigroup {
 public:
  static Quasigroup generate(const KeyPermutation& key, const AontParams& params);

  const AontParams& params() const noexcept { return params_; }
  std::uint32_t order() const noexcept { return params_.n; }

  /// a • b. Throws ParameterError for symbols outside [1, n].
  Symbol mul(Symbol a, Symbol b) const;
  /// a ∘ b. Throws ParameterError for symbols outside [1, n].
  Symbol dual_mul(Symbol a, Symbol b) const;

  // Unchecked variants for inner loops; callers guarantee the range.
  Symbol mul_unchecked(Symbol a, Symbol b) const noexcept {
    if (!table_.empty()) return table_[(a - 1) * params_.n + (b - 1)];
    return static_cast<Symbol>(static_cast<std::uint64_t>(a) * key_[b - 1] % params_.p);
  }
  Symbol dual_mul_unchecked(Symbol a, Symbol b) const noexcept {
    if (!dual_.empty()) return dual_[(a - 1) * params_.n + (b - 1)];
    const auto scaled = static_cast<Symbol>(static_cast<std::uint64_t>(b) * inverse_[a] % params_.p);
    return position_[scaled];
  }

  /// Row-major n×n copies of the tables, row/column 0 corresponding to symbol 1.
  /// Throws ParameterError for order 65536.
  std::vector<std::vector<Symbol>> table() const;
  std::vector<std::vector<Symbol>> dual_table() const;

 private:
  Quasigroup() = default;

  AontParams params_;
  std::vector<Symbol> key_;       // key_[j-1] = q_1j
  std::vector<Symbol> position_;  // position_[v] = j with key_[j-1] == v
  std::vector<Symbol> inverse_;   // inverse_[a] = a^-1 mod p
  std::vector<Symbol> table_;
  std::vector<Symbol> dual_;
};

/// Folds the key through •: l1 = k1, li = ki • l(i-1); returns ln.
Symbol leader(const Quasigroup& q, const KeyPermutation& key);

/// Uniform permutation of {1..n} drawn from a generator seeded with `seed`.
KeyPermutation random_key(std::uint64_t seed, const AontParams& params);

}  // namespace nocsec
