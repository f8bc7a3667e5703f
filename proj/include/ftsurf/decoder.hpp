#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "ftsurf/dem.hpp"

namespace ftsurf {

struct MatchingEdge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;  // == boundary() for boundary edges
  double p = 0.0;
  double weight = 0.0;  // ln((1-p)/p), negative when p > 1/2
  std::uint64_t observables = 0;
  std::uint32_t source = 0;  // first decomposed-DEM edge merged into this one
  /// Integer length seen by the matchers: |weight| at kWeightScale resolution,
  /// times kTieSpan plus a fixed per-edge offset below kTieSpan, doubled.
  std::int64_t length = 0;
};

/// All-pairs shortest paths over |weight|, boundary included.
struct PathTable {
  std::size_t nodes = 0;
  std::vector<std::int64_t> dist;   // nodes x nodes, sums of edge lengths
  std::vector<std::uint64_t> obs;   // observable mask along the chosen path
  std::vector<std::int32_t> pred;   // predecessor edge towards the source
};

struct MatchingGraph {
  std::size_t num_detectors = 0;
  std::size_t num_observables = 0;
  std::vector<MatchingEdge> edges;
  std::shared_ptr<const std::vector<std::vector<std::uint32_t>>> adjacency;  // node -> incident edge ids
  std::vector<std::uint32_t> edge_of_source;  // decomposed edge -> merged edge
  std::shared_ptr<const PathTable> paths;     // optional cache, valid for the current weights only

  std::uint32_t boundary() const { return static_cast<std::uint32_t>(num_detectors); }
  const std::vector<std::uint32_t>& incident(std::uint32_t node) const { return (*adjacency)[node]; }
};

struct Prediction {
  std::uint64_t observables = 0;
  std::vector<std::uint32_t> edges;  // matched graph edges, sorted
  double weight = 0.0;
  bool ok = true;  // false when some flagged detector cannot be paired
};

/// Integer resolution of edge weights used by the matchers.
inline constexpr double kWeightScale = 1 << 18;
/// Tie-break resolution below one weight unit.
inline constexpr std::int64_t kTieSpan = 1 << 14;

MatchingGraph build_matching_graph(const DecomposedDEM& ddem);
/// Same structure, with probabilities overridden per decomposed edge.
MatchingGraph build_matching_graph(const DecomposedDEM& ddem, const std::vector<double>& edge_p);

/// New edge probabilities per decomposed edge on an existing structure;
/// parallel edges merge as in build_matching_graph. Drops graph.paths.
void reweight_matching_graph(MatchingGraph& graph, const DecomposedDEM& ddem, const std::vector<double>& edge_p);

/// Fills graph.paths; decoding then skips the per-shot shortest-path searches.
void precompute_paths(MatchingGraph& graph);

/// Exact minimum-weight perfect matching of the flagged detectors (sorted ids).
Prediction mwpm_decode(const MatchingGraph& graph, const std::vector<std::uint32_t>& flagged);

/// Same optimum as mwpm_decode via dense Edmonds on the distance-completed
/// graph; slower, kept as an independent reference.
Prediction dense_mwpm_decode(const MatchingGraph& graph, const std::vector<std::uint32_t>& flagged);

/// Exhaustive pairing search; at most 12 flagged detectors.
Prediction brute_force_mwpm(const MatchingGraph& graph, const std::vector<std::uint32_t>& flagged);

/// Sum-product posteriors for every DEM channel given the flagged detectors.
std::vector<double> bp_posteriors(const DetectorErrorModel& dem, const std::vector<std::uint32_t>& flagged,
                                  int iterations);

/// Posterior probability of every decomposed edge: XOR-combination over the
/// channels that map onto it.
std::vector<double> push_posteriors(const DecomposedDEM& ddem, const std::vector<double>& channel_p);

/// Check/variable incidence of a DEM, reusable across shots.
struct TannerGraph {
  std::size_t num_checks = 0;
  std::vector<std::uint32_t> check_offset;  // num_checks + 1
  std::vector<std::uint32_t> check_edges;   // Tanner edge ids grouped by check
  std::vector<std::uint32_t> var_offset;    // channels + 1; a channel's edges are contiguous
  std::vector<double> prior;                // channel probabilities
};

TannerGraph build_tanner_graph(const DetectorErrorModel& dem);
std::vector<double> bp_posteriors(const TannerGraph& tanner, const std::vector<std::uint32_t>& flagged,
                                  int iterations);

/// Reusable belief-matching decoder; immutable after construction.
class BeliefMatcher {
 public:
  BeliefMatcher(const DetectorErrorModel& dem, const DecomposedDEM& ddem, int iterations);
  Prediction decode(const std::vector<std::uint32_t>& flagged) const;
  int iterations() const { return iterations_; }

 private:
  const DecomposedDEM* ddem_;
  int iterations_;
  TannerGraph tanner_;
  MatchingGraph base_;
};

Prediction belief_match_decode(const DetectorErrorModel& dem, const DecomposedDEM& ddem,
                               const std::vector<std::uint32_t>& flagged, int iterations);

}  // namespace ftsurf
