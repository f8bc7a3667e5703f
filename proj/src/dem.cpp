#include "ftsurf/dem.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "ftsurf/parallel.hpp"

namespace ftsurf {

namespace {

struct SigKey {
  std::vector<std::uint32_t> detectors;
  std::uint64_t observables;
  bool operator==(const SigKey&) const = default;
};

struct SigHash {
  std::size_t operator()(const SigKey& k) const {
    std::uint64_t h = 1469598103934665603ULL ^ k.observables;
    for (auto d : k.detectors) {
      h ^= d;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// uniform in (0, 1]
double unit_open0(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

// Same-location split of the realizations of one depolarizing channel;
// sigs[k] belongs to realization code k + 1. Returns an empty hint for
// realizations kept whole.
std::vector<std::vector<DemComponent>> channel_hints(const std::vector<const FaultSignature*>& sigs) {
  const std::size_t n = sigs.size();
  std::vector<std::vector<DemComponent>> out(n);
  std::vector<std::uint32_t> singles;  // sorted union of one-detector realizations
  std::vector<char> whole(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    if (sigs[k]->detectors.size() == 1) {
      singles.push_back(sigs[k]->detectors[0]);
      whole[k] = 1;
    }
  }
  std::sort(singles.begin(), singles.end());
  singles.erase(std::unique(singles.begin(), singles.end()), singles.end());
  const auto covered = [&](const std::vector<std::uint32_t>& dets) {
    return std::includes(singles.begin(), singles.end(), dets.begin(), dets.end());
  };
  const auto subset = [](const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  const auto minus = [](const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> r;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
  };
  std::vector<std::size_t> pairs;
  for (std::size_t k = 0; k < n; ++k) {
    if (sigs[k]->detectors.size() == 2 && !covered(sigs[k]->detectors)) {
      pairs.push_back(k);
      whole[k] = 1;
    }
  }
  const auto component = [&](std::size_t k) { return DemComponent{sigs[k]->detectors, sigs[k]->observables}; };
  for (std::size_t k = 0; k < n; ++k) {
    const auto& goal = sigs[k]->detectors;
    if (goal.empty() || whole[k]) continue;
    std::vector<DemComponent> comps;
    std::vector<std::uint32_t> rest = goal;
    bool found = covered(goal);
    for (std::size_t a = 0; !found && a < pairs.size(); ++a) {
      const auto& m = sigs[pairs[a]]->detectors;
      if (subset(m, goal) && covered(minus(goal, m))) {
        comps.push_back(component(pairs[a]));
        rest = minus(goal, m);
        found = true;
      }
    }
    for (std::size_t a = 0; !found && a < pairs.size(); ++a) {
      for (std::size_t b = a + 1; !found && b < pairs.size(); ++b) {
        const auto& m1 = sigs[pairs[a]]->detectors;
        const auto& m2 = sigs[pairs[b]]->detectors;
        if (!subset(m1, goal) || !subset(m2, goal) || minus(m1, m2).size() != m1.size()) continue;
        const auto r = minus(minus(goal, m1), m2);
        if (!covered(r)) continue;
        comps.push_back(component(pairs[a]));
        comps.push_back(component(pairs[b]));
        rest = r;
        found = true;
      }
    }
    if (!found) continue;
    for (std::size_t k2 = 0; k2 < n && !rest.empty(); ++k2) {
      const auto& m = sigs[k2]->detectors;
      if (m.size() != 1) continue;
      auto it = std::lower_bound(rest.begin(), rest.end(), m[0]);
      if (it == rest.end() || *it != m[0]) continue;
      rest.erase(it);
      comps.push_back(component(k2));
    }
    out[k] = std::move(comps);
  }
  return out;
}

}  // namespace

DetectorErrorModel build_dem(const Circuit& circuit, const std::vector<ElementaryFault>& faults,
                             int threads) {
  const auto sigs = propagate_faults(circuit, faults, false, threads);
  DetectorErrorModel dem;
  dem.num_detectors = circuit.detectors.size();
  dem.num_observables = circuit.observables.size();
  for (const auto& info : circuit.detector_info) dem.detector_types += info.type == PauliType::X ? 'X' : 'Z';
  std::vector<std::vector<DemComponent>> hints(faults.size());
  for (std::size_t i = 0; i < faults.size();) {
    std::size_t j = i;
    while (j < faults.size() && faults[j].instruction == faults[i].instruction) ++j;
    const int nq = faults[i].channel_qubits;
    // three-qubit channels are treated as independent correlated terms
    if (nq > 0 && nq <= 2 && j - i == (std::size_t{1} << (2 * nq)) - 1) {
      std::vector<const FaultSignature*> group;
      for (std::size_t k = i; k < j; ++k) group.push_back(&sigs[k]);
      auto h = channel_hints(group);
      for (std::size_t k = i; k < j; ++k) hints[k] = std::move(h[k - i]);
    }
    i = j;
  }
  std::unordered_map<SigKey, std::uint32_t, SigHash> index;
  for (std::uint32_t i = 0; i < faults.size(); ++i) {
    const auto& s = sigs[i];
    if (s.detectors.empty() && s.observables == 0) continue;
    const double p = faults[i].independent_probability();
    if (p <= 0) continue;
    SigKey key{s.detectors, s.observables};
    auto [it, fresh] = index.try_emplace(std::move(key), static_cast<std::uint32_t>(dem.channels.size()));
    if (fresh) {
      dem.channels.push_back({p, s.detectors, s.observables, {i}, std::move(hints[i])});
    } else {
      auto& ch = dem.channels[it->second];
      ch.p = xor_prob(ch.p, p);
      ch.sources.push_back(i);
    }
  }
  return dem;
}

DetectorErrorModel build_dem(const Circuit& circuit, const NoiseModel& noise, int threads) {
  return build_dem(circuit, enumerate_faults(circuit, noise), threads);
}

namespace {

std::uint64_t edge_key(const std::vector<std::uint32_t>& dets) {
  constexpr std::uint64_t none = 0xffffffffULL;
  if (dets.empty()) return (none << 32) | none;
  if (dets.size() == 1) return (std::uint64_t{dets[0]} << 32) | none;
  return (std::uint64_t{dets[0]} << 32) | dets[1];
}

std::vector<std::uint32_t> xor_sorted(const std::vector<std::uint32_t>& a,
                                      const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

class Decomposer {
 public:
  Decomposer(const std::vector<DemChannel>& edges,
             const std::unordered_map<std::uint64_t, std::vector<std::uint32_t>>& by_dets)
      : edges_(edges), by_dets_(by_dets) {}

  // Exact partitions of `dets` into existing edges. Returns true when one with
  // matching observables was found; `first` keeps the first partition seen.
  bool search(const std::vector<std::uint32_t>& dets, std::uint64_t target_obs,
              std::vector<std::uint32_t>& consistent, std::vector<std::uint32_t>& first) {
    budget_ = 20000;
    target_ = target_obs;
    found_first_ = false;
    chosen_.clear();
    first_.clear();
    const bool ok = dfs(dets, 0);
    if (ok) consistent = chosen_;
    if (found_first_) first = first_;
    return ok;
  }

 private:
  bool dfs(const std::vector<std::uint32_t>& rest, std::uint64_t obs) {
    if (rest.empty()) {
      if (!found_first_) {
        found_first_ = true;
        first_ = chosen_;
      }
      return obs == target_;
    }
    if (budget_-- <= 0) return false;
    const std::uint32_t a = rest[0];
    // pairs before singles, each block's candidate edges in id order
    std::vector<std::vector<std::uint32_t>> blocks;
    for (std::size_t j = 1; j < rest.size(); ++j) blocks.push_back({a, rest[j]});
    blocks.push_back({a});
    for (const auto& block : blocks) {
      auto it = by_dets_.find(edge_key(block));
      if (it == by_dets_.end()) continue;
      const auto next = xor_sorted(rest, block);
      for (auto e : it->second) {
        chosen_.push_back(e);
        if (dfs(next, obs ^ edges_[e].observables)) return true;
        chosen_.pop_back();
        if (budget_ <= 0) return false;
      }
    }
    return false;
  }

  const std::vector<DemChannel>& edges_;
  const std::unordered_map<std::uint64_t, std::vector<std::uint32_t>>& by_dets_;
  std::vector<std::uint32_t> chosen_;
  std::vector<std::uint32_t> first_;
  bool found_first_ = false;
  std::uint64_t target_ = 0;
  long budget_ = 0;
};

}  // namespace

DecomposedDEM decompose_dem(const DetectorErrorModel& dem, const DecomposeOptions& options) {
  DecomposedDEM out;
  out.num_detectors = dem.num_detectors;
  out.num_observables = dem.num_observables;
  out.map.resize(dem.channels.size());
  const auto mixed = [&](const std::vector<std::uint32_t>& dets) {
    if (!options.split_mixed || dem.detector_types.empty() || dets.empty()) return false;
    for (auto d : dets) {
      if (dem.detector_types[d] != dem.detector_types[dets[0]]) return true;
    }
    return false;
  };
  const auto hinted = [&](const DemChannel& ch) { return options.use_hints && !ch.hint.empty(); };
  const auto direct = [&](const DemChannel& ch) {
    return ch.detectors.size() <= 2 && !mixed(ch.detectors) && !hinted(ch);
  };
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> by_dets;
  for (std::uint32_t c = 0; c < dem.channels.size(); ++c) {
    const auto& ch = dem.channels[c];
    if (!direct(ch)) continue;
    const auto e = static_cast<std::uint32_t>(out.edges.size());
    out.edges.push_back(ch);
    out.edges.back().p = 0.0;
    out.map[c] = {e};
    by_dets[edge_key(ch.detectors)].push_back(e);
  }
  // hint components join the edge set before any search
  for (std::uint32_t c = 0; c < dem.channels.size(); ++c) {
    const auto& ch = dem.channels[c];
    if (!hinted(ch)) continue;
    std::vector<std::uint32_t> parts;
    std::vector<std::uint32_t> dets;
    std::uint64_t obs = 0;
    for (const auto& comp : ch.hint) {
      auto& list = by_dets[edge_key(comp.detectors)];
      std::uint32_t e = 0;
      bool have = false;
      for (auto cand : list) {
        if (out.edges[cand].observables == comp.observables) {
          e = cand;
          have = true;
          break;
        }
      }
      if (!have) {
        e = static_cast<std::uint32_t>(out.edges.size());
        out.edges.push_back({0.0, comp.detectors, comp.observables, {}, {}});
        list.push_back(e);
      }
      parts.push_back(e);
      dets = xor_sorted(dets, comp.detectors);
      obs ^= comp.observables;
    }
    if (dets != ch.detectors) throw std::logic_error("channel hint does not reproduce its detectors");
    if (obs != ch.observables) out.observable_mismatches.push_back(c);
    std::sort(parts.begin(), parts.end());
    out.map[c] = parts;
  }
  Decomposer search(out.edges, by_dets);

  for (std::uint32_t c = 0; c < dem.channels.size(); ++c) {
    const auto& ch = dem.channels[c];
    if (direct(ch) || hinted(ch)) continue;
    std::vector<std::uint32_t> consistent;
    std::vector<std::uint32_t> first;
    std::vector<std::uint32_t> parts;
    if (options.exact_search && search.search(ch.detectors, ch.observables, consistent, first)) {
      parts = consistent;
    } else if (!first.empty()) {
      parts = first;
      out.observable_mismatches.push_back(c);
    } else {
      // Greedy peel over all existing edges, then keep a small remainder as a new edge.
      std::vector<std::uint32_t> rest = ch.detectors;
      std::uint64_t obs = ch.observables;
      bool progress = true;
      while ((rest.size() > 2 || mixed(rest)) && progress) {
        progress = false;
        std::uint32_t best = 0;
        std::size_t best_size = 0;
        for (std::size_t i = 0; i < rest.size(); ++i) {
          for (std::size_t j = i + 1; j <= rest.size(); ++j) {
            std::vector<std::uint32_t> block =
                j < rest.size() ? std::vector<std::uint32_t>{rest[i], rest[j]} : std::vector<std::uint32_t>{rest[i]};
            auto it = by_dets.find(edge_key(block));
            if (it == by_dets.end()) continue;
            const auto e = it->second.front();
            if (block.size() > best_size || (block.size() == best_size && e < best)) {
              best = e;
              best_size = block.size();
            }
          }
        }
        if (best_size > 0) {
          parts.push_back(best);
          rest = xor_sorted(rest, out.edges[best].detectors);
          obs ^= out.edges[best].observables;
          progress = true;
        }
      }
      if (rest.size() > 2 || mixed(rest)) {
        out.residue.push_back(c);
        continue;
      }
      if (rest.empty() && obs != 0 && !options.exact_search) {
        out.observable_mismatches.push_back(c);
      } else if (!rest.empty() || obs != 0) {
        auto it = by_dets.find(edge_key(rest));
        std::uint32_t e = 0;
        bool have = false;
        if (it != by_dets.end()) {
          for (auto cand : it->second) {
            if (out.edges[cand].observables == obs) {
              e = cand;
              have = true;
              break;
            }
          }
          if (!have && !rest.empty() && !options.exact_search) {
            // plain peeling keeps the existing edge and its observables
            e = it->second.front();
            have = true;
            out.observable_mismatches.push_back(c);
          }
        }
        if (!have) {
          e = static_cast<std::uint32_t>(out.edges.size());
          out.edges.push_back({0.0, rest, obs, {}, {}});
          by_dets[edge_key(rest)].push_back(e);
        }
        parts.push_back(e);
      }
    }
    std::sort(parts.begin(), parts.end());
    out.map[c] = parts;
  }
  // Priors are folded in channel order once every mapping is known.
  for (std::uint32_t c = 0; c < dem.channels.size(); ++c) {
    for (auto e : out.map[c]) out.edges[e].p = xor_prob(out.edges[e].p, dem.channels[c].p);
  }
  return out;
}

std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block) {
  return splitmix64(seed ^ splitmix64(block * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL));
}

std::vector<std::uint32_t> ShotBatch::flagged(std::size_t shot) const {
  std::vector<std::uint32_t> out;
  for (std::size_t w = 0; w < det_stride; ++w) {
    for (std::uint64_t v = detectors[shot * det_stride + w]; v; v &= v - 1) {
      out.push_back(static_cast<std::uint32_t>(w * 64 + static_cast<std::size_t>(std::countr_zero(v))));
    }
  }
  return out;
}

ShotBatch sample(const DetectorErrorModel& dem, std::size_t shots, std::uint64_t seed, int threads) {
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  if (dem.num_observables > 64) throw std::invalid_argument("at most 64 observables supported");
  ShotBatch b;
  b.shots = shots;
  b.num_detectors = dem.num_detectors;
  b.num_observables = dem.num_observables;
  b.det_stride = std::max<std::size_t>(1, (dem.num_detectors + 63) / 64);
  b.detectors.assign(shots * b.det_stride, 0);
  b.observables.assign(shots, 0);
  for (const auto& ch : dem.channels) {
    if (ch.p < 0 || ch.p > 1) throw std::invalid_argument("channel probability outside [0, 1]");
    for (auto d : ch.detectors) {
      if (d >= dem.num_detectors) throw std::invalid_argument("channel detector out of range");
    }
  }
  const std::size_t blocks = (shots + kShotBlock - 1) / kShotBlock;
  parallel_for(blocks, threads, [&](std::size_t block) {
    std::mt19937_64 rng(block_seed(seed, block));
    const std::size_t first = block * kShotBlock;
    const std::size_t n = std::min(kShotBlock, shots - first);
    for (const auto& ch : dem.channels) {
      if (ch.p <= 0) continue;
      auto fire = [&](std::size_t s) {
        std::uint64_t* row = &b.detectors[(first + s) * b.det_stride];
        for (auto d : ch.detectors) row[d >> 6] ^= std::uint64_t{1} << (d & 63);
        b.observables[first + s] ^= ch.observables;
      };
      if (ch.p >= 1) {
        for (std::size_t s = 0; s < n; ++s) fire(s);
        continue;
      }
      // geometric gaps between firing shots
      const double log_q = std::log1p(-ch.p);
      std::size_t s = 0;
      while (true) {
        const double gap = std::floor(std::log(unit_open0(rng)) / log_q);
        if (gap >= static_cast<double>(n - s)) break;
        s += static_cast<std::size_t>(gap);
        fire(s);
        if (++s >= n) break;
      }
    }
  });
  return b;
}

namespace {

void write_targets(std::ostream& os, const std::vector<std::uint32_t>& dets, std::uint64_t obs) {
  for (auto d : dets) os << " D" << d;
  for (int k = 0; k < 64; ++k) {
    if (obs >> k & 1U) os << " L" << k;
  }
}

std::ostream& prob(std::ostream& os, double p) {
  return os << "error(" << std::setprecision(std::numeric_limits<double>::max_digits10) << p << ")";
}

}  // namespace

std::string to_text(const DetectorErrorModel& dem) {
  std::ostringstream os;
  os << "# detectors " << dem.num_detectors << " observables " << dem.num_observables << '\n';
  if (!dem.detector_types.empty()) os << "# types " << dem.detector_types << '\n';
  for (const auto& ch : dem.channels) {
    prob(os, ch.p);
    write_targets(os, ch.detectors, ch.observables);
    os << '\n';
  }
  return os.str();
}

std::string to_text(const DetectorErrorModel& dem, const DecomposedDEM& ddem) {
  std::ostringstream os;
  os << "# detectors " << dem.num_detectors << " observables " << dem.num_observables << '\n';
  if (!dem.detector_types.empty()) os << "# types " << dem.detector_types << '\n';
  for (std::size_t c = 0; c < dem.channels.size(); ++c) {
    const auto& ch = dem.channels[c];
    prob(os, ch.p);
    if (ddem.map[c].empty()) {
      write_targets(os, ch.detectors, ch.observables);
    } else {
      for (std::size_t k = 0; k < ddem.map[c].size(); ++k) {
        if (k) os << " ^";
        const auto& e = ddem.edges[ddem.map[c][k]];
        write_targets(os, e.detectors, e.observables);
      }
    }
    os << '\n';
  }
  return os.str();
}

DetectorErrorModel parse_dem_text(const std::string& text) {
  DetectorErrorModel dem;
  std::istringstream is(text);
  std::string line;
  std::size_t max_det = 0;
  std::size_t max_obs = 0;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string a;
      std::string b;
      std::size_t nd = 0;
      std::size_t no = 0;
      if (line.rfind("# types ", 0) == 0) {
        dem.detector_types = line.substr(8);
        continue;
      }
      if (hs >> a >> nd >> b >> no && a == "detectors" && b == "observables") {
        dem.num_detectors = nd;
        dem.num_observables = no;
        header = true;
      }
      continue;
    }
    if (line.rfind("error(", 0) != 0) throw std::invalid_argument("cannot parse DEM line '" + line + "'");
    const auto close = line.find(')');
    if (close == std::string::npos) throw std::invalid_argument("cannot parse DEM line '" + line + "'");
    DemChannel ch;
    ch.p = std::stod(line.substr(6, close - 6));
    std::istringstream ts(line.substr(close + 1));
    std::string tok;
    std::vector<std::uint32_t> dets;
    while (ts >> tok) {
      if (tok == "^") continue;
      const auto v = static_cast<std::uint32_t>(std::stoul(tok.substr(1)));
      if (tok[0] == 'D') {
        dets.push_back(v);
        max_det = std::max<std::size_t>(max_det, v + 1);
      } else if (tok[0] == 'L') {
        if (v >= 64) throw std::invalid_argument("observable index too large");
        ch.observables ^= std::uint64_t{1} << v;
        max_obs = std::max<std::size_t>(max_obs, v + 1);
      } else {
        throw std::invalid_argument("bad DEM target '" + tok + "'");
      }
    }
    std::sort(dets.begin(), dets.end());
    // fold repeated detectors pairwise
    std::vector<std::uint32_t> folded;
    for (std::size_t i = 0; i < dets.size();) {
      std::size_t j = i;
      while (j < dets.size() && dets[j] == dets[i]) ++j;
      if ((j - i) % 2) folded.push_back(dets[i]);
      i = j;
    }
    ch.detectors = folded;
    dem.channels.push_back(std::move(ch));
  }
  if (!dem.detector_types.empty()) {
    if (dem.detector_types.find_first_not_of("XZ") != std::string::npos) throw std::invalid_argument("bad detector types");
    if (header && dem.detector_types.size() != dem.num_detectors) throw std::invalid_argument("detector type count mismatch");
  }
  if (!header) {
    dem.num_detectors = max_det;
    dem.num_observables = max_obs;
  } else if (max_det > dem.num_detectors || max_obs > dem.num_observables) {
    throw std::invalid_argument("DEM target exceeds declared counts");
  }
  return dem;
}

namespace {

void write_rows(const std::string& path, const std::vector<std::uint64_t>& words, std::size_t rows,
                std::size_t stride, std::size_t width) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  const std::size_t bytes = (width + 7) / 8;
  std::vector<char> row(bytes);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < bytes; ++i) {
      row[i] = static_cast<char>((words[r * stride + i / 8] >> (8 * (i % 8))) & 0xff);
    }
    f.write(row.data(), static_cast<std::streamsize>(bytes));
  }
}

void read_rows(const std::string& path, std::vector<std::uint64_t>& words, std::size_t rows,
               std::size_t stride, std::size_t width) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "'");
  const std::size_t bytes = (width + 7) / 8;
  std::vector<unsigned char> row(bytes);
  words.assign(rows * stride, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!f.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(bytes))) {
      throw std::runtime_error("'" + path + "' is shorter than expected");
    }
    for (std::size_t i = 0; i < bytes; ++i) {
      words[r * stride + i / 8] |= std::uint64_t{row[i]} << (8 * (i % 8));
    }
  }
}

}  // namespace

void write_batch(const ShotBatch& batch, const std::string& det_path, const std::string& obs_path) {
  write_rows(det_path, batch.detectors, batch.shots, batch.det_stride, batch.num_detectors);
  write_rows(obs_path, batch.observables, batch.shots, 1, batch.num_observables);
}

ShotBatch read_batch(const std::string& det_path, const std::string& obs_path, std::size_t shots,
                     std::size_t num_detectors, std::size_t num_observables) {
  ShotBatch b;
  b.shots = shots;
  b.num_detectors = num_detectors;
  b.num_observables = num_observables;
  b.det_stride = std::max<std::size_t>(1, (num_detectors + 63) / 64);
  read_rows(det_path, b.detectors, shots, b.det_stride, num_detectors);
  if (obs_path.empty()) {
    b.observables.assign(shots, 0);
  } else {
    read_rows(obs_path, b.observables, shots, 1, num_observables);
  }
  return b;
}

}  // namespace ftsurf
