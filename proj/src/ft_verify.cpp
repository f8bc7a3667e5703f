#include "ftsurf/ft_verify.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>

#include "ftsurf/dem.hpp"
#include "ftsurf/frame.hpp"

namespace ftsurf {

namespace {

struct UniqueSig {
  std::vector<std::uint32_t> detectors;
  std::vector<std::uint32_t> syndrome;  // flagged stabilizer ids
  std::uint8_t logical = 0;             // bit 0: anticommutes with logical X, bit 1: with logical Z
  std::uint32_t fault = 0;              // representative fault id
  bool operator<(const UniqueSig& o) const {
    return std::tie(detectors, syndrome, logical) < std::tie(o.detectors, o.syndrome, o.logical);
  }
};

std::vector<std::uint64_t> zobrist_keys(std::size_t n, std::uint64_t salt) {
  std::mt19937_64 rng(0x5eed0f7a11ULL ^ salt);
  std::vector<std::uint64_t> keys(n);
  for (auto& k : keys) k = rng();
  return keys;
}

// Visits every subset of exactly k elements out of n as (hash, bits, indices).
template <class Fn>
void for_each_subset(const std::vector<std::uint64_t>& hash, const std::vector<std::uint8_t>& bits, int k,
                     Fn&& fn) {
  const std::size_t n = hash.size();
  std::vector<std::uint32_t> idx;
  auto rec = [&](auto&& self, std::size_t start, std::uint64_t h, std::uint8_t b) -> void {
    if (static_cast<int>(idx.size()) == k) {
      fn(h, b, idx);
      return;
    }
    const std::size_t remaining = static_cast<std::size_t>(k) - idx.size();
    for (std::size_t i = start; i + remaining <= n; ++i) {
      idx.push_back(static_cast<std::uint32_t>(i));
      self(self, i + 1, h ^ hash[i], static_cast<std::uint8_t>(b ^ bits[i]));
      idx.pop_back();
    }
  };
  rec(rec, 0, 0, 0);
}

double choose(std::size_t n, int k) {
  double r = 1;
  for (int i = 0; i < k; ++i) r = r * static_cast<double>(n - static_cast<std::size_t>(i)) / (i + 1);
  return r;
}

// Multiplies together faults that share a location so each path has distinct
// locations; identity products are dropped.
std::vector<ElementaryFault> canonical_path(std::vector<ElementaryFault> path) {
  std::sort(path.begin(), path.end(), [](const auto& a, const auto& b) {
    return std::tie(a.instruction, a.slot) < std::tie(b.instruction, b.slot);
  });
  std::vector<ElementaryFault> out;
  for (auto& f : path) {
    if (!out.empty() && out.back().instruction == f.instruction && out.back().slot == f.slot) {
      out.back().pauli *= f.pauli;
      if (out.back().pauli.is_identity()) out.pop_back();
    } else {
      out.push_back(std::move(f));
    }
  }
  return out;
}

}  // namespace

WitnessCheck verify_witness(const Circuit& circuit, const Layout& layout, const FaultPathWitness& w) {
  const auto a = propagate_path(circuit, w.first);
  const auto b = propagate_path(circuit, w.second);
  WitnessCheck r;
  r.same_detectors = a.detectors == b.detectors;
  r.same_syndrome = layout.syndrome(a.final_error) == layout.syndrome(b.final_error);
  r.inequivalent = !layout.in_stabilizer_group(a.final_error * b.final_error);
  return r;
}

DistinguishabilityReport check_distinguishability(const Circuit& circuit, const Layout& layout, int t,
                                                  const FtVerifyOptions& options) {
  if (t < 1) throw std::invalid_argument("order t must be >= 1");
  const NoiseModel noise{options.include_idles ? NoiseKind::SI : NoiseKind::NI, 1e-3, 1.0};
  const auto faults = enumerate_faults(circuit, noise);
  const auto sigs = propagate_faults(circuit, faults, true, options.threads);

  DistinguishabilityReport rep;
  rep.elementary_faults = faults.size();
  std::vector<UniqueSig> uniq;
  uniq.reserve(faults.size());
  for (std::uint32_t i = 0; i < faults.size(); ++i) {
    UniqueSig u;
    u.detectors = sigs[i].detectors;
    const auto s = layout.syndrome(sigs[i].final_error);
    for (std::uint32_t k = 0; k < s.size(); ++k) {
      if (s[k]) u.syndrome.push_back(k);
    }
    const auto l = layout.logical_action(sigs[i].final_error);
    u.logical = static_cast<std::uint8_t>(l[0] | (l[1] << 1));
    u.fault = i;
    if (u.detectors.empty() && u.syndrome.empty() && u.logical == 0) continue;
    uniq.push_back(std::move(u));
  }
  std::stable_sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end(),
                         [](const auto& a, const auto& b) { return !(a < b) && !(b < a); }),
             uniq.end());
  rep.unique_signatures = uniq.size();

  const auto det_keys = zobrist_keys(circuit.detectors.size(), 1);
  const auto syn_keys = zobrist_keys(layout.stabilizers().size(), 2);
  std::vector<std::uint64_t> hash(uniq.size());
  std::vector<std::uint8_t> logical(uniq.size());
  for (std::size_t i = 0; i < uniq.size(); ++i) {
    std::uint64_t h = 0;
    for (auto d : uniq[i].detectors) h ^= det_keys[d];
    for (auto s : uniq[i].syndrome) h ^= syn_keys[s];
    hash[i] = h & ~std::uint64_t{3};
    logical[i] = uniq[i].logical;
  }

  // Entries pack the (detector, syndrome) hash in the high bits and the logical
  // action in the low two.
  std::vector<std::uint64_t> table = {0};
  for (int w = 1; w <= t; ++w) {
    const double add = choose(uniq.size(), w);
    if ((static_cast<double>(table.size()) + add) * sizeof(std::uint64_t) >
        static_cast<double>(options.memory_budget_bytes)) {
      rep.complete = false;
      rep.largest_distinguishable_order = w - 1;
      return rep;
    }
    table.reserve(table.size() + static_cast<std::size_t>(add));
    for_each_subset(hash, logical, w, [&](std::uint64_t h, std::uint8_t b, const auto&) {
      table.push_back(h | b);
    });
    std::sort(table.begin(), table.end());
    table.erase(std::unique(table.begin(), table.end()), table.end());
    rep.table_entries = table.size();

    std::vector<std::uint64_t> clashes;
    for (std::size_t i = 1; i < table.size(); ++i) {
      if ((table[i] >> 2) == (table[i - 1] >> 2)) clashes.push_back(table[i] & ~std::uint64_t{3});
    }
    clashes.erase(std::unique(clashes.begin(), clashes.end()), clashes.end());
    for (const std::uint64_t target : clashes) {
      // Recover concrete subsets with this hash and check them exactly.
      std::map<std::uint8_t, std::vector<std::uint32_t>> by_logical;
      for (int k = 0; k <= w; ++k) {
        if (k == 0) {
          if (target == 0) by_logical.try_emplace(0);
          continue;
        }
        for_each_subset(hash, logical, k, [&](std::uint64_t h, std::uint8_t b, const auto& idx) {
          if (h == target) by_logical.try_emplace(b, idx);
        });
      }
      if (by_logical.size() < 2) continue;
      auto it = by_logical.begin();
      const auto& a = it->second;
      const auto& b = std::next(it)->second;
      FaultPathWitness wit;
      for (auto i : a) {
        if (std::find(b.begin(), b.end(), i) == b.end()) wit.first.push_back(faults[uniq[i].fault]);
      }
      for (auto i : b) {
        if (std::find(a.begin(), a.end(), i) == a.end()) wit.second.push_back(faults[uniq[i].fault]);
      }
      wit.first = canonical_path(std::move(wit.first));
      wit.second = canonical_path(std::move(wit.second));
      if (!verify_witness(circuit, layout, wit).ok()) continue;  // hash collision
      rep.largest_distinguishable_order = w - 1;
      rep.witness = std::move(wit);
      return rep;
    }
  }
  rep.largest_distinguishable_order = t;
  return rep;
}

FaultDistanceReport fault_distance(const Circuit& circuit, int w_max, const FtVerifyOptions& options) {
  if (w_max < 1) throw std::invalid_argument("w_max must be >= 1");
  if (circuit.observables.size() != 1) throw std::invalid_argument("fault distance needs exactly one observable");
  const NoiseModel noise{options.include_idles ? NoiseKind::SI : NoiseKind::NI, 1e-3, 1.0};
  const auto dem = build_dem(circuit, noise, options.threads);
  const int half = (w_max + 1) / 2;
  const auto keys = zobrist_keys(dem.num_detectors, 3);
  std::vector<std::uint64_t> hash(dem.channels.size());
  std::vector<std::uint8_t> obs(dem.channels.size());
  for (std::size_t i = 0; i < dem.channels.size(); ++i) {
    std::uint64_t h = 0;
    for (auto d : dem.channels[i].detectors) h ^= keys[d];
    hash[i] = h & ~std::uint64_t{7};
    obs[i] = static_cast<std::uint8_t>(dem.channels[i].observables & 1U);
  }
  FaultDistanceReport rep;
  // entry: hash | observable << 2 | subset size
  std::vector<std::uint64_t> table = {0};
  for (int k = 1; k <= half; ++k) {
    const double add = choose(dem.channels.size(), k);
    if ((static_cast<double>(table.size()) + add) * sizeof(std::uint64_t) >
        static_cast<double>(options.memory_budget_bytes)) {
      rep.complete = false;
      break;
    }
    for_each_subset(hash, obs, k, [&](std::uint64_t h, std::uint8_t b, const auto&) {
      table.push_back(h | (std::uint64_t{b} << 2) | static_cast<std::uint64_t>(k));
    });
  }
  std::sort(table.begin(), table.end());
  int best = w_max + 1;
  std::uint64_t best_hash = 0;
  for (std::size_t i = 0; i < table.size();) {
    std::size_t j = i;
    int min_size[2] = {1 << 20, 1 << 20};
    while (j < table.size() && (table[j] >> 3) == (table[i] >> 3)) {
      const int b = static_cast<int>((table[j] >> 2) & 1U);
      min_size[b] = std::min(min_size[b], static_cast<int>(table[j] & 3U));
      ++j;
    }
    const int cand = min_size[0] + min_size[1];
    if (cand < best) {
      best = cand;
      best_hash = table[i] & ~std::uint64_t{7};
    }
    i = j;
  }
  if (best > w_max) {
    rep.distance = w_max + 1;
    rep.found = false;
    return rep;
  }
  // recover one pair of subsets realizing the minimum and check it exactly
  std::vector<std::uint32_t> pick[2];
  int pick_size[2] = {1 << 20, 1 << 20};
  for (int k = 0; k <= half; ++k) {
    if (k == 0) {
      if (best_hash == 0) pick_size[0] = 0;
      continue;
    }
    for_each_subset(hash, obs, k, [&](std::uint64_t h, std::uint8_t b, const auto& idx) {
      if (h == best_hash && k < pick_size[b]) {
        pick_size[b] = k;
        pick[b].assign(idx.begin(), idx.end());
      }
    });
  }
  std::vector<std::uint32_t> path;
  std::set_symmetric_difference(pick[0].begin(), pick[0].end(), pick[1].begin(), pick[1].end(),
                                std::back_inserter(path));
  std::vector<std::uint32_t> dets;
  std::uint64_t o = 0;
  for (auto c : path) {
    std::vector<std::uint32_t> next;
    std::set_symmetric_difference(dets.begin(), dets.end(), dem.channels[c].detectors.begin(),
                                  dem.channels[c].detectors.end(), std::back_inserter(next));
    dets = std::move(next);
    o ^= dem.channels[c].observables;
  }
  if (!dets.empty() || o == 0) throw std::logic_error("fault distance witness failed to replay");
  rep.distance = static_cast<int>(path.size());
  rep.found = true;
  rep.channels = path;
  return rep;
}

}  // namespace ftsurf
