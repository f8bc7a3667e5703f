#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ftsurf/decoder.hpp"

namespace ftsurf {

/// Second element of a boundary pair.
inline constexpr std::uint32_t kBoundaryEvent = 0xFFFFFFFFu;

/// Minimum-length pairing of detection events on the detector graph itself,
/// using integer edge lengths (MatchingEdge::length, all even and nonnegative).
/// Regions grow from every event at unit speed and the alternating-tree and
/// blossom bookkeeping runs on regions instead of a distance-completed graph.
/// Returns false when no perfect pairing exists.
class SparseBlossom {
 public:
  explicit SparseBlossom(const MatchingGraph& graph);
  ~SparseBlossom();
  SparseBlossom(const SparseBlossom&) = delete;
  SparseBlossom& operator=(const SparseBlossom&) = delete;

  bool match(const std::vector<std::uint32_t>& events, std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs);

 private:
  struct Impl;
  Impl* impl_;
};

}  // namespace ftsurf
