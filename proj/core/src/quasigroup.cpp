#include "nocsec/quasigroup.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>

#include "nocsec/error.hpp"
#include "nocsec/rng.hpp"

namespace nocsec {
namespace {

constexpr std::uint32_t kMaterializedOrder = 256;

std::uint32_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint32_t p) {
  std::uint64_t result = 1;
  base %= p;
  while (exp) {
    if (exp & 1) result = result * base % p;
    base = base * base % p;
    exp >>= 1;
  }
  return static_cast<std::uint32_t>(result);
}

void check_symbol(Symbol s, std::uint32_t n) {
  if (s < 1 || s > n) {
    throw ParameterError("symbol " + std::to_string(s) + " outside [1, " + std::to_string(n) + "]");
  }
}

}  // namespace

bool is_supported_prime(std::uint32_t p) noexcept {
  return p == 3 || p == 5 || p == 17 || p == 257 || p == 65537;
}

AontParams AontParams::for_prime(std::uint32_t p) {
  if (!is_supported_prime(p)) {
    throw ParameterError("unsupported prime " + std::to_string(p) +
                         " (expected a Fermat prime: 3, 5, 17, 257, 65537)");
  }
  AontParams params;
  params.p = p;
  params.n = p - 1;
  params.element_bits = static_cast<std::uint32_t>(std::countr_zero(params.n));
  return params;
}

bool KeyPermutation::is_permutation(std::span<const Symbol> symbols, std::uint32_t n) {
  if (symbols.size() != n) return false;
  std::vector<bool> seen(n + 1, false);
  for (Symbol s : symbols) {
    if (s < 1 || s > n || seen[s]) return false;
    seen[s] = true;
  }
  return true;
}

KeyPermutation::KeyPermutation(std::vector<Symbol> symbols, const AontParams& params)
    : symbols_(std::move(symbols)) {
  if (!is_permutation(symbols_, params.n)) {
    throw ParameterError("key is not a permutation of {1.." + std::to_string(params.n) + "}");
  }
}

Quasigroup Quasigroup::generate(const KeyPermutation& key, const AontParams& params) {
  if (!is_supported_prime(params.p) || params.n != params.p - 1) {
    throw ParameterError("invalid quasigroup parameters");
  }
  if (!KeyPermutation::is_permutation(key.symbols(), params.n)) {
    throw ParameterError("key does not match quasigroup order");
  }
  const std::uint32_t n = params.n;
  const std::uint32_t p = params.p;

  Quasigroup q;
  q.params_ = params;
  q.key_.assign(key.symbols().begin(), key.symbols().end());
  q.position_.assign(n + 1, 0);
  for (std::uint32_t j = 1; j <= n; ++j) q.position_[q.key_[j - 1]] = j;
  q.inverse_.assign(n + 1, 0);
  for (std::uint32_t a = 1; a <= n; ++a) q.inverse_[a] = pow_mod(a, p - 2, p);

  if (n <= kMaterializedOrder) {
    q.table_.resize(static_cast<std::size_t>(n) * n);
    q.dual_.resize(static_cast<std::size_t>(n) * n);
    for (std::uint32_t i = 1; i <= n; ++i) {
      for (std::uint32_t j = 1; j <= n; ++j) {
        const Symbol x = static_cast<Symbol>(static_cast<std::uint64_t>(i) * q.key_[j - 1] % p);
        q.table_[(i - 1) * n + (j - 1)] = x;
        q.dual_[(i - 1) * n + (x - 1)] = j;
      }
    }
  }
  return q;
}

Symbol Quasigroup::mul(Symbol a, Symbol b) const {
  check_symbol(a, params_.n);
  check_symbol(b, params_.n);
  return mul_unchecked(a, b);
}

Symbol Quasigroup::dual_mul(Symbol a, Symbol b) const {
  check_symbol(a, params_.n);
  check_symbol(b, params_.n);
  return dual_mul_unchecked(a, b);
}

std::vector<std::vector<Symbol>> Quasigroup::table() const {
  if (table_.empty()) throw ParameterError("table of order 65536 is not materialized");
  std::vector<std::vector<Symbol>> rows(params_.n);
  for (std::uint32_t i = 0; i < params_.n; ++i) {
    rows[i].assign(table_.begin() + i * params_.n, table_.begin() + (i + 1) * params_.n);
  }
  return rows;
}

std::vector<std::vector<Symbol>> Quasigroup::dual_table() const {
  if (dual_.empty()) throw ParameterError("dual of order 65536 is not materialized");
  std::vector<std::vector<Symbol>> rows(params_.n);
  for (std::uint32_t i = 0; i < params_.n; ++i) {
    rows[i].assign(dual_.begin() + i * params_.n, dual_.begin() + (i + 1) * params_.n);
  }
  return rows;
}

Symbol leader(const Quasigroup& q, const KeyPermutation& key) {
  if (key.size() != q.order()) throw ParameterError("key does not match quasigroup order");
  Symbol l = key[0];
  for (std::size_t i = 1; i < key.size(); ++i) l = q.mul_unchecked(key[i], l);
  return l;
}

KeyPermutation random_key(std::uint64_t seed, const AontParams& params) {
  std::vector<Symbol> symbols(params.n);
  std::iota(symbols.begin(), symbols.end(), Symbol{1});
  Rng rng(seed);
  // Fisher-Yates
  for (std::size_t i = symbols.size(); i > 1; --i) {
    std::swap(symbols[i - 1], symbols[rng.below(i)]);
  }
  return KeyPermutation(std::move(symbols), params);
}

}  // namespace nocsec
