#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nocsec/aont.hpp"
#include "nocsec/routing.hpp"

namespace nocsec {

enum class Defense { None, Aont };

const char* to_string(Defense d) noexcept;
Defense parse_defense(const std::string& text);

struct EavesdropScenario {
  MeshDims dims;
  Defense defense = Defense::None;
  std::vector<Coord> attackers;  // 1 or 2 routers, never src or dst
  Coord src;
  Coord dst;
};

/// Interception probability for one scenario.
///
/// Without defense the packet follows the XY path and the result is 0 or 1:
/// intercepted iff some attacker is an intermediate router. With the
/// transform the attackers must, as a coalition, sit on both paths; the
/// result averages over every admissible pivot pair. Throws ParameterError
/// for an invalid placement.
double interception_probability(const EavesdropScenario& scenario);

struct EavesdropReport {
  MeshDims dims;
  Defense defense = Defense::None;
  int attackers = 1;
  /// Ordered (src,dst) pairs times attacker placements drawn from the other N-2 routers.
  std::uint64_t total_scenarios = 0;
  /// Expected number of intercepted scenarios (integral without defense).
  double intercepted = 0.0;
  double probability = 0.0;
  std::string convention;
};

/// Exhausts every ordered (src,dst) pair and every attacker placement.
/// Deterministic for any thread count.
EavesdropReport evaluate(MeshDims dims, Defense defense, int attacker_count, unsigned threads = 0);

/// Blocks seen by an eavesdropper; missing positions are empty.
struct CapturedBlocks {
  AontParams params;
  std::size_t s = 0;
  std::size_t orig_len_bytes = 0;
  std::vector<std::optional<Block>> blocks;  // size s + 1
};

CapturedBlocks capture(const AontCiphertext& ct, const std::vector<std::size_t>& withheld);

struct ReconstructionOutcome {
  /// Always true: a strict subset of blocks never pins down one plaintext.
  bool ambiguous = true;
  bool exhaustive = false;
  std::size_t missing_blocks = 0;
  /// Exact count when exhaustive.
  std::uint64_t candidates = 0;
  /// log2 of the consistent-plaintext count (exact or estimated).
  double log2_candidates = 0.0;
};

/// Counts plaintexts consistent with the captured blocks. With one missing
/// block and a missing-block space of at most 2^16 values the count is
/// enumerated; otherwise it is estimated as n! * (n^n)^(missing-1).
/// Throws ParameterError when every block was captured.
ReconstructionOutcome reconstruction_attempt(const CapturedBlocks& captured);

/// Every distinct plaintext obtained by filling the single missing block with
/// each possible value and decoding. Candidates whose recovered key is not a
/// permutation (or whose padding is nonzero) are inconsistent and skipped.
std::vector<std::vector<std::uint8_t>> enumerate_consistent_plaintexts(const CapturedBlocks& captured);

/// Number of candidate values for one block (n^n). Throws when it exceeds 2^32.
std::uint64_t block_space_size(const AontParams& params);

}  // namespace nocsec
