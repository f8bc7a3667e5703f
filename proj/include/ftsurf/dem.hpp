#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ftsurf/circuit.hpp"
#include "ftsurf/frame.hpp"

namespace ftsurf {

struct DemComponent {
  std::vector<std::uint32_t> detectors;  // sorted
  std::uint64_t observables = 0;
  friend bool operator==(const DemComponent&, const DemComponent&) = default;
};

struct DemChannel {
  double p = 0.0;
  std::vector<std::uint32_t> detectors;  // sorted
  std::uint64_t observables = 0;
  std::vector<std::uint32_t> sources;    // contributing fault ids
  /// Split suggested by the channel's own single-qubit X/Z parts (first source);
  /// empty when there is none.
  std::vector<DemComponent> hint;
};

struct DetectorErrorModel {
  std::size_t num_detectors = 0;
  std::size_t num_observables = 0;
  std::vector<DemChannel> channels;
  /// Check type per detector ('X' or 'Z'); empty when unknown.
  std::string detector_types;
};

/// XOR-combination of two independent flip probabilities.
inline double xor_prob(double p, double q) { return p * (1 - q) + q * (1 - p); }

/// Merges faults with identical (detector, observable) signatures. Each fault
/// contributes its independent-realization probability. Channel order follows the
/// lowest contributing fault id.
///
/// Hints (one- and two-qubit channels): every realization is a product of
/// single-qubit X and Z parts. Realizations flipping one detector, and those
/// flipping two detectors not all reachable by one-detector realizations, are
/// kept whole; any other realization is split into up to two of the latter plus
/// one-detector realizations, ignoring observables. Realizations with no such split
/// get no hint.
DetectorErrorModel build_dem(const Circuit& circuit, const std::vector<ElementaryFault>& faults,
                             int threads = 1);
DetectorErrorModel build_dem(const Circuit& circuit, const NoiseModel& noise, int threads = 1);

struct DecomposedDEM {
  std::size_t num_detectors = 0;
  std::size_t num_observables = 0;
  std::vector<DemChannel> edges;                  // at most two detectors each
  std::vector<std::vector<std::uint32_t>> map;    // original channel -> edge ids
  std::vector<std::uint32_t> residue;             // channels left undecomposed
  std::vector<std::uint32_t> observable_mismatches;  // components disagree on observables
};

/// Rewrites every channel with more than two detectors as a combination of edge
/// channels. Hinted channels use their hint; the rest try an exact partition into
/// existing edges with matching observables (pairs before singles, anchored at the
/// lowest detector), then greedy peeling (largest overlap first, lowest edge id on
/// ties). A leftover of one or two detectors becomes an edge carrying the residual
/// observables; larger leftovers are reported as residue.
struct DecomposeOptions {
  /// Use channel hints where present.
  bool use_hints = true;
  /// Search exact partitions with matching observables before peeling.
  bool exact_search = true;
  /// Decompose channels that touch both X and Z checks (needs detector types).
  bool split_mixed = false;
};
DecomposedDEM decompose_dem(const DetectorErrorModel& dem, const DecomposeOptions& options = {});

/// Bit-packed shot-major batch: shot s occupies words [s*stride, (s+1)*stride).
struct ShotBatch {
  std::size_t shots = 0;
  std::size_t num_detectors = 0;
  std::size_t num_observables = 0;
  std::size_t det_stride = 0;
  std::vector<std::uint64_t> detectors;
  std::vector<std::uint64_t> observables;  // one word per shot

  bool detector(std::size_t shot, std::size_t d) const {
    return (detectors[shot * det_stride + (d >> 6)] >> (d & 63)) & 1U;
  }
  std::vector<std::uint32_t> flagged(std::size_t shot) const;
};

/// Shots per independently seeded block; results never depend on the thread count.
inline constexpr std::size_t kShotBlock = 1024;

/// Every channel fires independently with its probability in every shot.
ShotBatch sample(const DetectorErrorModel& dem, std::size_t shots, std::uint64_t seed,
                 int threads = 1);

/// 64-bit seed for block `block` of a run.
std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block);

std::string to_text(const DetectorErrorModel& dem);
/// Decomposed form: components of each original channel joined by " ^ ".
std::string to_text(const DetectorErrorModel& dem, const DecomposedDEM& ddem);
/// Accepts both forms; decomposed lines are folded back by XOR.
DetectorErrorModel parse_dem_text(const std::string& text);

/// Raw rows, ceil(width/8) bytes each, bit i of a row at byte i/8, bit i%8.
void write_batch(const ShotBatch& batch, const std::string& det_path, const std::string& obs_path);
/// An empty obs_path leaves every observable bit zero.
ShotBatch read_batch(const std::string& det_path, const std::string& obs_path, std::size_t shots,
                     std::size_t num_detectors, std::size_t num_observables);

}  // namespace ftsurf
