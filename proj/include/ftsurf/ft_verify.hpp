#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ftsurf/circuit.hpp"
#include "ftsurf/layout.hpp"

namespace ftsurf {

struct FtVerifyOptions {
  /// Upper bound on hash-table memory; enumeration stops (partial report) beyond it.
  std::size_t memory_budget_bytes = std::size_t{3} << 30;
  /// Include idle faults (SI placement) in the fault set.
  bool include_idles = false;
  int threads = 1;
};

struct FaultPathWitness {
  std::vector<ElementaryFault> first;
  std::vector<ElementaryFault> second;
};

struct DistinguishabilityReport {
  /// Largest w <= t for which F^(w) is distinguishable; 0 if F^(1) already fails.
  int largest_distinguishable_order = 0;
  /// False when the memory guard stopped the search; `largest` is then a lower bound.
  bool complete = true;
  std::optional<FaultPathWitness> witness;
  std::size_t elementary_faults = 0;
  std::size_t unique_signatures = 0;
  std::size_t table_entries = 0;
};

/// Exhaustive distinguishability of fault sets up to order t. Two paths of order
/// <= w are indistinguishable exactly when their union has no detector flips, no
/// syndrome and a nontrivial logical action, so the search looks for such unions
/// of at most 2w unique fault signatures via hashed level sets.
DistinguishabilityReport check_distinguishability(const Circuit& circuit, const Layout& layout, int t,
                                                  const FtVerifyOptions& options = {});

struct WitnessCheck {
  bool same_detectors = false;
  bool same_syndrome = false;
  bool inequivalent = false;
  bool ok() const { return same_detectors && same_syndrome && inequivalent; }
};

/// Replays both paths through the circuit.
WitnessCheck verify_witness(const Circuit& circuit, const Layout& layout, const FaultPathWitness& w);

struct FaultDistanceReport {
  /// Minimum order of an undetected logical fault path, or w_max + 1 if none
  /// was found up to w_max (then `found` is false).
  int distance = 0;
  bool found = false;
  bool complete = true;
  std::vector<std::uint32_t> channels;  // DEM channel ids of one minimal path
};

/// Meet-in-the-middle search over DEM channel signatures of a memory circuit.
FaultDistanceReport fault_distance(const Circuit& circuit, int w_max, const FtVerifyOptions& options = {});

}  // namespace ftsurf
