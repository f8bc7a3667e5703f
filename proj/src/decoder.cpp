#include "ftsurf/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>

#include "ftsurf/blossom.hpp"
#include "ftsurf/sparse_blossom.hpp"

namespace ftsurf {

namespace {

constexpr std::int64_t kInf = std::int64_t{1} << 60;

double weight_of(double p) {
  p = std::clamp(p, 1e-15, 1 - 1e-15);
  return std::log((1 - p) / p);
}

std::int64_t scaled(double w) { return std::llround(std::fabs(w) * kWeightScale); }

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct ShortestPaths {
  std::vector<std::int64_t> dist;
  std::vector<std::uint64_t> obs;
  std::vector<std::int32_t> pred;
};

void dijkstra(const MatchingGraph& g, std::uint32_t src, std::int64_t* dist, std::uint64_t* obs,
              std::int32_t* pred) {
  const std::size_t n = g.num_detectors + 1;
  std::fill(dist, dist + n, kInf);
  std::fill(obs, obs + n, 0);
  std::fill(pred, pred + n, -1);
  using Item = std::pair<std::int64_t, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[src] = 0;
  pq.push({0, src});
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d != dist[u]) continue;
    for (auto e : g.incident(u)) {
      const auto& edge = g.edges[e];
      const std::uint32_t v = edge.u == u ? edge.v : edge.u;
      const std::int64_t nd = d + edge.length;
      if (nd < dist[v]) {
        dist[v] = nd;
        obs[v] = obs[u] ^ edge.observables;
        pred[v] = static_cast<std::int32_t>(e);
        pq.push({nd, v});
      }
    }
  }
}

// Rows of shortest-path data for a set of sources, from the cache or computed.
class PathRows {
 public:
  PathRows(const MatchingGraph& g, const std::vector<std::uint32_t>& sources) : g_(g) {
    if (g.paths) return;
    const std::size_t n = g.num_detectors + 1;
    rows_.resize(sources.size());
    for (std::size_t i = 0; i < sources.size(); ++i) {
      index_[sources[i]] = i;
      auto& r = rows_[i];
      r.dist.resize(n);
      r.obs.resize(n);
      r.pred.resize(n);
      dijkstra(g, sources[i], r.dist.data(), r.obs.data(), r.pred.data());
    }
  }
  std::int64_t dist(std::uint32_t s, std::uint32_t t) const {
    if (g_.paths) return g_.paths->dist[s * g_.paths->nodes + t];
    return rows_[index_.at(s)].dist[t];
  }
  std::uint64_t obs(std::uint32_t s, std::uint32_t t) const {
    if (g_.paths) return g_.paths->obs[s * g_.paths->nodes + t];
    return rows_[index_.at(s)].obs[t];
  }
  std::int32_t pred(std::uint32_t s, std::uint32_t t) const {
    if (g_.paths) return g_.paths->pred[s * g_.paths->nodes + t];
    return rows_[index_.at(s)].pred[t];
  }

 private:
  const MatchingGraph& g_;
  std::vector<ShortestPaths> rows_;
  std::map<std::uint32_t, std::size_t> index_;
};

// Flagged detectors after absorbing negative-weight edges, plus those edges.
struct Shifted {
  std::vector<std::uint32_t> flagged;
  std::vector<std::uint32_t> forced;
};

Shifted shift_negative(const MatchingGraph& g, const std::vector<std::uint32_t>& flagged) {
  Shifted s;
  std::vector<std::uint8_t> bit(g.num_detectors, 0);
  for (auto d : flagged) {
    if (d >= g.num_detectors) throw std::invalid_argument("flagged detector out of range");
    bit[d] ^= 1;
  }
  for (std::uint32_t e = 0; e < g.edges.size(); ++e) {
    const auto& edge = g.edges[e];
    if (edge.weight >= 0) continue;
    s.forced.push_back(e);
    bit[edge.u] ^= 1;
    if (edge.v != g.boundary()) bit[edge.v] ^= 1;
  }
  for (std::uint32_t d = 0; d < g.num_detectors; ++d) {
    if (bit[d]) s.flagged.push_back(d);
  }
  return s;
}

// Flagged nodes with their boundary distances; a node either pairs with
// another along a shortest path or leaves through the boundary.
struct Instance {
  std::vector<std::uint32_t> f;
  std::vector<std::int64_t> exit;
};

Instance make_instance(const MatchingGraph& g, const std::vector<std::uint32_t>& f, const PathRows& rows) {
  Instance in;
  in.f = f;
  for (auto u : f) in.exit.push_back(rows.dist(u, g.boundary()));
  return in;
}

std::int64_t direct_cost(const Instance& in, const PathRows& rows, int i, int j) {
  return rows.dist(in.f[i], in.f[j]);
}

void toggle_path(const MatchingGraph& g, const PathRows& rows, std::uint32_t s, std::uint32_t t,
                 std::vector<std::uint8_t>& used) {
  std::uint32_t v = t;
  while (v != s) {
    const auto e = rows.pred(s, v);
    if (e < 0) throw std::logic_error("broken shortest-path tree");
    used[e] ^= 1;
    const auto& edge = g.edges[e];
    v = edge.u == v ? edge.v : edge.u;
  }
}

using NodePairs = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

// Pairs of graph nodes (second may be the boundary) joined by shortest paths.
Prediction assemble(const MatchingGraph& g, const PathRows& rows, const NodePairs& pairs, const Shifted& sh) {
  Prediction pred;
  for (const auto& [s, t] : pairs) {
    if (rows.dist(s, t) >= kInf) {
      pred.ok = false;
      return pred;
    }
  }
  std::vector<std::uint8_t> used(g.edges.size(), 0);
  for (const auto& [s, t] : pairs) toggle_path(g, rows, s, t, used);
  for (auto e : sh.forced) used[e] ^= 1;
  for (std::uint32_t e = 0; e < g.edges.size(); ++e) {
    if (!used[e]) continue;
    pred.edges.push_back(e);
    pred.observables ^= g.edges[e].observables;
    pred.weight += g.edges[e].weight;
  }
  return pred;
}

// Same paths as full shortest-path rows, but each search stops at its target.
Prediction assemble_searched(const MatchingGraph& g, const NodePairs& pairs, const Shifted& sh) {
  Prediction pred;
  const std::size_t n = g.num_detectors + 1;
  std::vector<std::int64_t> dist(n, kInf);
  std::vector<std::int32_t> via(n, -1);
  std::vector<std::uint32_t> seen;
  std::vector<std::uint8_t> used(g.edges.size(), 0);
  using Item = std::pair<std::int64_t, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (const auto& [s, t] : pairs) {
    for (auto x : seen) {
      dist[x] = kInf;
      via[x] = -1;
    }
    seen.clear();
    pq = {};
    dist[s] = 0;
    seen.push_back(s);
    pq.push({0, s});
    while (!pq.empty()) {
      const auto [d, u] = pq.top();
      pq.pop();
      if (d != dist[u]) continue;
      if (u == t) break;
      for (auto e : g.incident(u)) {
        const auto& edge = g.edges[e];
        const std::uint32_t v = edge.u == u ? edge.v : edge.u;
        const std::int64_t nd = d + edge.length;
        if (nd < dist[v]) {
          if (dist[v] == kInf) seen.push_back(v);
          dist[v] = nd;
          via[v] = static_cast<std::int32_t>(e);
          pq.push({nd, v});
        }
      }
    }
    if (dist[t] >= kInf) {
      pred.ok = false;
      return pred;
    }
    for (std::uint32_t v = t; v != s;) {
      const auto e = via[v];
      used[e] ^= 1;
      v = g.edges[e].u == v ? g.edges[e].v : g.edges[e].u;
    }
  }
  for (auto e : sh.forced) used[e] ^= 1;
  for (std::uint32_t e = 0; e < g.edges.size(); ++e) {
    if (!used[e]) continue;
    pred.edges.push_back(e);
    pred.observables ^= g.edges[e].observables;
    pred.weight += g.edges[e].weight;
  }
  return pred;
}

// solver returns mate[i] = partner index, or -1 for a boundary exit.
template <class Solver>
Prediction decode_with(const MatchingGraph& g, const std::vector<std::uint32_t>& flagged, Solver&& solver) {
  const Shifted sh = shift_negative(g, flagged);
  if (sh.flagged.empty() && sh.forced.empty()) return {};
  const PathRows rows(g, sh.flagged);
  const Instance in = make_instance(g, sh.flagged, rows);
  const auto mate = solver(in, rows);
  NodePairs pairs;
  for (std::size_t i = 0; i < in.f.size(); ++i) {
    if (mate[i] < 0) {
      pairs.push_back({in.f[i], g.boundary()});
    } else if (static_cast<std::size_t>(mate[i]) > i) {
      pairs.push_back({in.f[i], in.f[mate[i]]});
    }
  }
  return assemble(g, rows, pairs, sh);
}

// Keeps dense Edmonds arithmetic well inside int64.
std::int64_t capped(std::int64_t x) { return std::min(x, std::int64_t{1} << 56); }

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

// Only pairs cheaper than two boundary exits can be optimal, and components of
// such pairs are independent: boundary exits carry no parity constraint once
// each node may leave on its own. Each component is then a complete pair
// problem (pair cost = min(direct, both exits)) plus one boundary vertex when odd.
std::vector<int> solve_sparse(const Instance& in, const PathRows& rows) {
  const int k = static_cast<int>(in.f.size());
  std::vector<int> parent(k);
  for (int i = 0; i < k; ++i) parent[i] = i;
  struct Kept {
    int i, j;
    std::int64_t cost;
  };
  std::vector<Kept> kept;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      if (rows.dist(in.f[i], in.f[j]) >= kInf) continue;
      const std::int64_t c = direct_cost(in, rows, i, j);
      if (c >= capped(in.exit[i]) + capped(in.exit[j])) continue;
      kept.push_back({i, j, c});
      parent[find_root(parent, i)] = find_root(parent, j);
    }
  }
  std::vector<std::vector<int>> members(k);
  for (int i = 0; i < k; ++i) members[find_root(parent, i)].push_back(i);
  std::vector<int> local(k, -1);
  for (const auto& m : members) {
    for (std::size_t a = 0; a < m.size(); ++a) local[m[a]] = static_cast<int>(a);
  }
  std::vector<std::vector<Kept>> by_root(k);
  for (const auto& e : kept) by_root[find_root(parent, e.i)].push_back(e);

  std::vector<int> mate(k, -1);
  for (int r = 0; r < k; ++r) {
    const auto& m = members[r];
    if (m.size() < 2) continue;
    if (m.size() == 2) {
      mate[m[0]] = m[1];
      mate[m[1]] = m[0];
      continue;
    }
    const int c = static_cast<int>(m.size());
    const int n = c + (c % 2);
    std::vector<std::int64_t> cost(static_cast<std::size_t>(n) * n, 0);
    std::vector<std::uint8_t> via(static_cast<std::size_t>(n) * n, 1);
    for (int a = 0; a < c; ++a) {
      for (int b = a + 1; b < c; ++b) cost[a * n + b] = cost[b * n + a] = capped(in.exit[m[a]]) + capped(in.exit[m[b]]);
      if (n > c) cost[a * n + c] = cost[c * n + a] = capped(in.exit[m[a]]);
    }
    for (const auto& e : by_root[r]) {
      const int a = local[e.i], b = local[e.j];
      cost[a * n + b] = cost[b * n + a] = e.cost;
      via[a * n + b] = via[b * n + a] = 0;
    }
    const auto mt = min_weight_perfect_matching(cost, n);
    for (int a = 0; a < c; ++a) {
      const int b = mt[a];
      mate[m[a]] = (b >= c || via[a * n + b]) ? -1 : m[b];
    }
  }
  return mate;
}

void set_weight(MatchingEdge& edge, std::uint32_t id) {
  edge.weight = weight_of(edge.p);
  edge.length = 2 * (scaled(edge.weight) * kTieSpan + static_cast<std::int64_t>(mix(id) % kTieSpan));
}

void add_edge(MatchingGraph& g, std::uint32_t source, const DemChannel& ch, double p,
              std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t>& index,
              std::vector<double>& best_p) {
  if (ch.detectors.size() > 2) throw std::invalid_argument("decomposed edge with more than two detectors");
  if (ch.detectors.empty()) {
    g.edge_of_source.push_back(std::numeric_limits<std::uint32_t>::max());
    return;
  }
  const std::uint32_t u = ch.detectors[0];
  const std::uint32_t v = ch.detectors.size() == 2 ? ch.detectors[1] : g.boundary();
  auto [it, fresh] = index.try_emplace({u, v}, static_cast<std::uint32_t>(g.edges.size()));
  if (fresh) {
    MatchingEdge e;
    e.u = u;
    e.v = v;
    e.p = p;
    e.observables = ch.observables;
    e.source = source;
    g.edges.push_back(e);
    best_p.push_back(p);
  } else {
    auto& e = g.edges[it->second];
    e.p = xor_prob(e.p, p);
    if (p > best_p[it->second]) {
      best_p[it->second] = p;
      e.observables = ch.observables;
    }
  }
  g.edge_of_source.push_back(it->second);
}

}  // namespace

MatchingGraph build_matching_graph(const DecomposedDEM& ddem) {
  std::vector<double> p(ddem.edges.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = ddem.edges[i].p;
  return build_matching_graph(ddem, p);
}

MatchingGraph build_matching_graph(const DecomposedDEM& ddem, const std::vector<double>& edge_p) {
  if (!ddem.residue.empty()) throw std::invalid_argument("decomposed DEM has undecomposed residue channels");
  if (edge_p.size() != ddem.edges.size()) throw std::invalid_argument("edge probability count mismatch");
  MatchingGraph g;
  g.num_detectors = ddem.num_detectors;
  g.num_observables = ddem.num_observables;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> index;
  std::vector<double> best_p;
  for (std::uint32_t i = 0; i < ddem.edges.size(); ++i) add_edge(g, i, ddem.edges[i], edge_p[i], index, best_p);
  auto adj = std::make_shared<std::vector<std::vector<std::uint32_t>>>(g.num_detectors + 1);
  for (std::uint32_t e = 0; e < g.edges.size(); ++e) {
    auto& edge = g.edges[e];
    set_weight(edge, e);
    (*adj)[edge.u].push_back(e);
    (*adj)[edge.v].push_back(e);
  }
  g.adjacency = std::move(adj);
  return g;
}

void reweight_matching_graph(MatchingGraph& g, const DecomposedDEM& ddem, const std::vector<double>& edge_p) {
  if (edge_p.size() != ddem.edges.size() || g.edge_of_source.size() != ddem.edges.size()) {
    throw std::invalid_argument("edge probability count mismatch");
  }
  constexpr auto none = std::numeric_limits<std::uint32_t>::max();
  std::vector<double> best(g.edges.size(), -1.0);
  for (auto& e : g.edges) e.p = 0.0;
  for (std::uint32_t i = 0; i < ddem.edges.size(); ++i) {
    const auto e = g.edge_of_source[i];
    if (e == none) continue;
    auto& edge = g.edges[e];
    edge.p = best[e] < 0 ? edge_p[i] : xor_prob(edge.p, edge_p[i]);
    if (edge_p[i] > best[e]) {
      best[e] = edge_p[i];
      edge.observables = ddem.edges[i].observables;
    }
  }
  for (std::uint32_t e = 0; e < g.edges.size(); ++e) set_weight(g.edges[e], e);
  g.paths.reset();
}

void precompute_paths(MatchingGraph& graph) {
  auto t = std::make_shared<PathTable>();
  const std::size_t n = graph.num_detectors + 1;
  t->nodes = n;
  t->dist.resize(n * n);
  t->obs.resize(n * n);
  t->pred.resize(n * n);
  for (std::size_t s = 0; s < n; ++s) {
    dijkstra(graph, static_cast<std::uint32_t>(s), t->dist.data() + s * n, t->obs.data() + s * n,
             t->pred.data() + s * n);
  }
  graph.paths = std::move(t);
}

Prediction mwpm_decode(const MatchingGraph& graph, const std::vector<std::uint32_t>& flagged) {
  const Shifted sh = shift_negative(graph, flagged);
  if (sh.flagged.empty() && sh.forced.empty()) return {};
  NodePairs pairs;
  SparseBlossom solver(graph);
  if (!solver.match(sh.flagged, pairs)) {
    Prediction p;
    p.ok = false;
    return p;
  }
  for (auto& pr : pairs) {
    if (pr.second == kBoundaryEvent) pr.second = graph.boundary();
  }
  if (graph.paths) {
    const PathRows rows(graph, {});
    return assemble(graph, rows, pairs, sh);
  }
  return assemble_searched(graph, pairs, sh);
}

Prediction dense_mwpm_decode(const MatchingGraph& graph, const std::vector<std::uint32_t>& flagged) {
  return decode_with(graph, flagged, solve_sparse);
}

Prediction brute_force_mwpm(const MatchingGraph& graph, const std::vector<std::uint32_t>& flagged) {
  if (flagged.size() > 12) throw std::invalid_argument("brute-force matching limited to 12 flagged detectors");
  return decode_with(graph, flagged, [](const Instance& in, const PathRows& rows) {
    const int k = static_cast<int>(in.f.size());
    std::vector<int> mate(k, -2);
    std::vector<int> best;
    std::int64_t best_cost = std::numeric_limits<std::int64_t>::max();
    auto rec = [&](auto&& self, std::int64_t acc) -> void {
      int i = 0;
      while (i < k && mate[i] != -2) ++i;
      if (i == k) {
        if (acc < best_cost) {
          best_cost = acc;
          best = mate;
        }
        return;
      }
      // unreachable steps are skipped; adding kInf repeatedly would overflow
      auto step = [&](std::int64_t c) {
        if (c < kInf && acc + c < best_cost) self(self, acc + c);
      };
      mate[i] = -1;
      step(in.exit[i]);
      for (int j = i + 1; j < k; ++j) {
        if (mate[j] != -2) continue;
        mate[i] = j;
        mate[j] = i;
        step(direct_cost(in, rows, i, j));
        mate[j] = -2;
      }
      mate[i] = -2;
    };
    rec(rec, 0);
    if (best.empty()) best.assign(k, -1);  // nothing feasible; assemble reports it
    return best;
  });
}

TannerGraph build_tanner_graph(const DetectorErrorModel& dem) {
  TannerGraph t;
  t.num_checks = dem.num_detectors;
  const std::size_t nc = dem.channels.size();
  t.var_offset.assign(nc + 1, 0);
  std::vector<std::uint32_t> count(dem.num_detectors + 1, 0);
  for (std::size_t c = 0; c < nc; ++c) {
    t.var_offset[c + 1] = t.var_offset[c] + static_cast<std::uint32_t>(dem.channels[c].detectors.size());
    for (auto d : dem.channels[c].detectors) {
      if (d >= dem.num_detectors) throw std::invalid_argument("channel detector out of range");
      ++count[d + 1];
    }
  }
  t.check_offset.assign(dem.num_detectors + 1, 0);
  for (std::size_t d = 0; d < dem.num_detectors; ++d) t.check_offset[d + 1] = t.check_offset[d] + count[d + 1];
  t.check_edges.resize(t.var_offset[nc]);
  std::vector<std::uint32_t> fill(t.check_offset.begin(), t.check_offset.end() - 1);
  for (std::size_t c = 0; c < nc; ++c) {
    std::uint32_t e = t.var_offset[c];
    for (auto d : dem.channels[c].detectors) t.check_edges[fill[d]++] = e++;
  }
  t.prior.resize(nc);
  for (std::size_t c = 0; c < nc; ++c) t.prior[c] = dem.channels[c].p;
  return t;
}

// Messages live as delta = 1 - 2p towards checks and as odds p / (1 - p)
// towards variables, so neither update needs a transcendental function.
std::vector<double> bp_posteriors(const TannerGraph& t, const std::vector<std::uint32_t>& flagged, int iterations) {
  if (iterations < 1) throw std::invalid_argument("bp needs at least one iteration");
  constexpr double eps = 1e-12;
  static constexpr double odds_lo = eps / (1 - eps);
  static constexpr double odds_hi = (1 - eps) / eps;
  constexpr double delta_cap = 1 - 2 * eps;
  auto clamp_odds = [](double r) { return std::clamp(r, odds_lo, odds_hi); };
  auto to_delta = [](double r) { return (1 - r) / (1 + r); };
  const std::size_t nc = t.prior.size();
  std::vector<std::uint8_t> syn(t.num_checks, 0);
  for (auto d : flagged) {
    if (d >= t.num_checks) throw std::invalid_argument("flagged detector out of range");
    syn[d] ^= 1;
  }
  std::vector<double> prior(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    const double p = std::clamp(t.prior[c], eps, 1 - eps);
    prior[c] = p / (1 - p);
  }
  const std::size_t ne = t.check_edges.size();
  std::vector<double> v2c(ne);  // delta
  std::vector<double> c2v(ne);  // odds
  for (std::size_t c = 0; c < nc; ++c) {
    for (auto e = t.var_offset[c]; e < t.var_offset[c + 1]; ++e) v2c[e] = to_delta(prior[c]);
  }
  std::vector<double> suffix;
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t d = 0; d < t.num_checks; ++d) {
      const auto lo = t.check_offset[d], hi = t.check_offset[d + 1];
      const std::size_t k = hi - lo;
      if (k == 0) continue;
      suffix.assign(k + 1, 1.0);
      for (std::size_t i = k; i-- > 0;) suffix[i] = suffix[i + 1] * v2c[t.check_edges[lo + i]];
      double prefix = syn[d] ? -1.0 : 1.0;
      for (std::size_t i = 0; i < k; ++i) {
        const auto e = t.check_edges[lo + i];
        const double x = std::clamp(prefix * suffix[i + 1], -delta_cap, delta_cap);
        c2v[e] = clamp_odds((1 - x) / (1 + x));
        prefix *= v2c[e];
      }
    }
    for (std::size_t c = 0; c < nc; ++c) {
      double total = prior[c];
      for (auto e = t.var_offset[c]; e < t.var_offset[c + 1]; ++e) total *= c2v[e];
      for (auto e = t.var_offset[c]; e < t.var_offset[c + 1]; ++e) v2c[e] = to_delta(clamp_odds(total / c2v[e]));
    }
  }
  std::vector<double> post(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    if (t.var_offset[c] == t.var_offset[c + 1]) {
      post[c] = t.prior[c];
      continue;
    }
    double total = prior[c];
    for (auto e = t.var_offset[c]; e < t.var_offset[c + 1]; ++e) total *= c2v[e];
    total = clamp_odds(total);
    post[c] = std::clamp(total / (1 + total), eps, 1 - eps);
  }
  return post;
}

std::vector<double> bp_posteriors(const DetectorErrorModel& dem, const std::vector<std::uint32_t>& flagged,
                                  int iterations) {
  return bp_posteriors(build_tanner_graph(dem), flagged, iterations);
}

std::vector<double> push_posteriors(const DecomposedDEM& ddem, const std::vector<double>& channel_p) {
  if (channel_p.size() != ddem.map.size()) throw std::invalid_argument("posterior count mismatch");
  std::vector<double> p(ddem.edges.size(), 0.0);
  for (std::size_t c = 0; c < ddem.map.size(); ++c) {
    for (auto e : ddem.map[c]) p[e] = xor_prob(p[e], channel_p[c]);
  }
  return p;
}

BeliefMatcher::BeliefMatcher(const DetectorErrorModel& dem, const DecomposedDEM& ddem, int iterations)
    : ddem_(&ddem), iterations_(iterations), tanner_(build_tanner_graph(dem)), base_(build_matching_graph(ddem)) {
  if (iterations < 1) throw std::invalid_argument("bp needs at least one iteration");
  if (ddem.map.size() != dem.channels.size()) throw std::invalid_argument("decomposition does not match the DEM");
  base_.paths.reset();
}

Prediction BeliefMatcher::decode(const std::vector<std::uint32_t>& flagged) const {
  const auto post = bp_posteriors(tanner_, flagged, iterations_);
  MatchingGraph graph = base_;
  reweight_matching_graph(graph, *ddem_, push_posteriors(*ddem_, post));
  return mwpm_decode(graph, flagged);
}

Prediction belief_match_decode(const DetectorErrorModel& dem, const DecomposedDEM& ddem,
                               const std::vector<std::uint32_t>& flagged, int iterations) {
  return BeliefMatcher(dem, ddem, iterations).decode(flagged);
}

}  // namespace ftsurf
