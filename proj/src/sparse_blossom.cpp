#include "ftsurf/sparse_blossom.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>

namespace ftsurf {

namespace {

using Time = std::int64_t;
constexpr std::uint32_t kNone = 0xFFFFFFFFu;
constexpr std::uint32_t kBoundaryRegion = 0xFFFFFFFEu;
constexpr Time kNever = std::numeric_limits<Time>::max();

// Endpoints are detection events; b may be kBoundaryEvent.
struct CEdge {
  std::uint32_t a = kNone;
  std::uint32_t b = kNone;
  CEdge rev() const { return {b, a}; }
};

struct Region {
  Time base = 0;  // radius(t) = base + slope * t
  int slope = 0;
  std::uint32_t parent = kNone;
  std::vector<std::pair<std::uint32_t, CEdge>> cycle;  // child, edge to the next child
  std::vector<std::uint32_t> shell;
  std::uint32_t tree = kNone;
  std::uint32_t match = kNone;
  CEdge match_edge;
  std::uint32_t source = kNone;
  std::uint64_t version = 0;
  bool alive = true;
};

struct TreeNode {
  std::uint32_t inner = kNone;
  std::uint32_t outer = kNone;
  CEdge inner_to_outer;
  CEdge parent_edge;  // parent's outer -> inner
  std::uint32_t parent = kNone;
  std::vector<std::uint32_t> children;
};

struct NodeState {
  std::uint32_t region = kNone;
  std::uint32_t top = kNone;
  std::uint32_t source = kNone;
  Time dist = 0;
  Time wrapped = 0;
  std::uint64_t version = 0;
};

struct Event {
  Time t;
  std::uint64_t seq;
  std::uint32_t id;
  std::uint64_t version;
  bool region;
  bool operator>(const Event& o) const { return t != o.t ? t > o.t : seq > o.seq; }
};

}  // namespace

struct SparseBlossom::Impl {
  const MatchingGraph& g;
  std::vector<NodeState> nodes;
  std::vector<std::uint32_t> touched;
  std::vector<Region> regions;
  std::vector<TreeNode> trees;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;
  std::uint64_t seq = 0;
  Time now = 0;
  std::vector<std::uint32_t> scratch;

  explicit Impl(const MatchingGraph& graph) : g(graph), nodes(graph.num_detectors) {}

  Time radius(std::uint32_t r) const { return regions[r].base + regions[r].slope * now; }
  Time local(std::uint32_t u) const {
    const auto& n = nodes[u];
    return radius(n.top) + n.wrapped - n.dist;
  }

  void touch(std::uint32_t u) {
    if (nodes[u].version == 0) touched.push_back(u);
  }

  void collect(std::uint32_t r, std::vector<std::uint32_t>& out) const {
    const auto& R = regions[r];
    if (R.source != kNone) out.push_back(R.source);
    out.insert(out.end(), R.shell.begin(), R.shell.end());
    for (const auto& [c, e] : R.cycle) collect(c, out);
  }

  void push(Time t, std::uint32_t id, std::uint64_t version, bool region) {
    queue.push({t, seq++, id, version, region});
  }

  // Earliest growth event along an edge at u; target kNone for nothing.
  Time next_event(std::uint32_t u, std::uint32_t& target, std::uint32_t& edge_id) const {
    const auto& nu = nodes[u];
    const auto& R = regions[nu.top];
    const Time lu = local(u);
    Time best = kNever;
    target = kNone;
    const auto B = g.boundary();
    for (auto e : g.incident(u)) {
      const auto& edge = g.edges[e];
      const std::uint32_t v = edge.u == u ? edge.v : edge.u;
      const Time w = edge.length;
      Time t = kNever;
      if (v == B || nodes[v].top == kNone) {
        if (R.slope > 0) t = now + std::max<Time>(0, w - lu);
      } else if (nodes[v].top != nu.top) {
        const int rate = R.slope + regions[nodes[v].top].slope;
        if (rate > 0) {
          const Time gap = std::max<Time>(0, w - lu - local(v));
          if (rate == 2 && gap % 2) throw std::logic_error("collision between integer times");
          t = now + gap / rate;
        }
      }
      if (t < best) {
        best = t;
        target = v;
        edge_id = e;
      }
    }
    return best;
  }

  void schedule_node(std::uint32_t u) {
    auto& n = nodes[u];
    ++n.version;
    std::uint32_t v, e;
    const Time t = next_event(u, v, e);
    if (t != kNever) push(t, u, n.version, false);
  }

  void schedule_region(std::uint32_t r) {
    auto& R = regions[r];
    ++R.version;
    if (R.slope >= 0) return;
    const Time target = R.shell.empty() ? 0 : nodes[R.shell.back()].dist;
    push(std::max(now, R.base - target), r, R.version, true);
  }

  void set_slope(std::uint32_t r, int s) {
    auto& R = regions[r];
    const Time rad = radius(r);
    R.slope = s;
    R.base = rad - s * now;
  }

  void reschedule(std::uint32_t r) {
    scratch.clear();
    collect(r, scratch);
    for (auto u : scratch) schedule_node(u);
    schedule_region(r);
  }

  void change(std::uint32_t r, int s) {
    if (regions[r].slope == s) return;
    set_slope(r, s);
    reschedule(r);
  }

  std::uint32_t new_tree() {
    trees.emplace_back();
    return static_cast<std::uint32_t>(trees.size() - 1);
  }

  std::uint32_t root_of(std::uint32_t t) const {
    while (trees[t].parent != kNone) t = trees[t].parent;
    return t;
  }

  // Outer region r of tree node t gets partner; the path to the root flips and
  // every region of the tree freezes.
  void match_and_dissolve(std::uint32_t t, std::uint32_t r, std::uint32_t partner, CEdge e) {
    regions[r].match = partner;
    regions[r].match_edge = e;
    std::uint32_t n = t;
    while (trees[n].parent != kNone) {
      const auto p = trees[n].parent;
      const auto in = trees[n].inner;
      const auto out = trees[p].outer;
      regions[in].match = out;
      regions[in].match_edge = trees[n].parent_edge.rev();
      regions[out].match = in;
      regions[out].match_edge = trees[n].parent_edge;
      n = p;
    }
    std::vector<std::uint32_t> stack{n};
    while (!stack.empty()) {
      const auto x = stack.back();
      stack.pop_back();
      auto& T = trees[x];
      for (auto c : T.children) stack.push_back(c);
      for (auto reg : {T.inner, T.outer}) {
        if (reg == kNone) continue;
        regions[reg].tree = kNone;
        change(reg, 0);
      }
      T = TreeNode{};
    }
  }

  std::uint32_t child_index(std::uint32_t blossom, std::uint32_t event) const {
    std::uint32_t r = nodes[event].region;
    while (regions[r].parent != blossom) r = regions[r].parent;
    const auto& cyc = regions[blossom].cycle;
    for (std::uint32_t i = 0; i < cyc.size(); ++i) {
      if (cyc[i].first == r) return i;
    }
    throw std::logic_error("event not inside blossom");
  }

  void form_blossom(std::uint32_t a, std::uint32_t b, std::uint32_t Bo, CEdge e) {
    std::vector<std::uint32_t> up_a;
    for (std::uint32_t x = a; x != kNone; x = trees[x].parent) up_a.push_back(x);
    std::uint32_t c = b;
    std::vector<std::uint32_t> path_b;
    while (std::find(up_a.begin(), up_a.end(), c) == up_a.end()) {
      path_b.push_back(c);
      c = trees[c].parent;
    }
    std::vector<std::uint32_t> path_a;
    for (auto x : up_a) {
      if (x == c) break;
      path_a.push_back(x);
    }
    std::reverse(path_a.begin(), path_a.end());

    std::vector<std::uint32_t> cyc_r{trees[c].outer};
    std::vector<CEdge> cyc_e;
    for (auto n : path_a) {
      cyc_e.push_back(trees[n].parent_edge);
      cyc_r.push_back(trees[n].inner);
      cyc_e.push_back(trees[n].inner_to_outer);
      cyc_r.push_back(trees[n].outer);
    }
    cyc_e.push_back(e);
    if (b != c) {
      cyc_r.push_back(Bo);
      for (std::size_t i = 0; i < path_b.size(); ++i) {
        const auto n = path_b[i];
        cyc_e.push_back(trees[n].inner_to_outer.rev());
        cyc_r.push_back(trees[n].inner);
        cyc_e.push_back(trees[n].parent_edge.rev());
        if (i + 1 < path_b.size()) cyc_r.push_back(trees[trees[n].parent].outer);
      }
    }
    if (cyc_r.size() != cyc_e.size() || cyc_r.size() % 2 == 0) throw std::logic_error("malformed blossom cycle");

    const auto bl = static_cast<std::uint32_t>(regions.size());
    regions.emplace_back();
    for (std::size_t i = 0; i < cyc_r.size(); ++i) {
      const auto r = cyc_r[i];
      set_slope(r, 0);
      ++regions[r].version;
      regions[r].parent = bl;
      regions[r].tree = kNone;
      const Time rad = radius(r);
      scratch.clear();
      collect(r, scratch);
      for (auto u : scratch) {
        nodes[u].top = bl;
        nodes[u].wrapped += rad;
      }
      regions[bl].cycle.push_back({r, cyc_e[i]});
    }

    std::vector<std::uint32_t> gone(path_a);
    gone.insert(gone.end(), path_b.begin(), path_b.end());
    auto is_gone = [&](std::uint32_t x) { return std::find(gone.begin(), gone.end(), x) != gone.end(); };
    std::vector<std::uint32_t> kids;
    for (auto ch : trees[c].children) {
      if (!is_gone(ch)) kids.push_back(ch);
    }
    for (auto n : gone) {
      for (auto ch : trees[n].children) {
        if (is_gone(ch)) continue;
        trees[ch].parent = c;
        kids.push_back(ch);
      }
    }
    for (auto n : gone) trees[n] = TreeNode{};
    trees[c].children = std::move(kids);
    trees[c].outer = bl;

    auto& Bl = regions[bl];
    Bl.tree = c;
    Bl.slope = 1;
    Bl.base = -now;
    if (trees[c].inner != kNone) {
      Bl.match = trees[c].inner;
      Bl.match_edge = trees[c].inner_to_outer.rev();
      regions[trees[c].inner].match = bl;
    }
    reschedule(bl);
  }

  // Inner blossom at zero radius: the even side of its cycle rejoins the tree,
  // the odd side pairs up.
  void shatter(std::uint32_t bl) {
    const auto n = regions[bl].tree;
    const auto cyc = regions[bl].cycle;
    const auto k = static_cast<std::uint32_t>(cyc.size());
    const auto p = child_index(bl, trees[n].parent_edge.b);
    const auto q = child_index(bl, trees[n].inner_to_outer.a);
    const std::uint32_t fwd = (q + k - p) % k;
    const int dir = fwd % 2 == 0 ? 1 : -1;
    const std::uint32_t len = dir == 1 ? fwd : k - fwd;
    auto at = [&](std::int64_t i) { return static_cast<std::uint32_t>(((i % k) + k) % k); };
    auto edge_between = [&](std::uint32_t i, std::uint32_t j) {
      return dir == 1 ? cyc[i].second : cyc[j].second.rev();
    };

    for (const auto& [r, e] : cyc) {
      const Time rad = radius(r);
      regions[r].parent = kNone;
      scratch.clear();
      collect(r, scratch);
      for (auto u : scratch) {
        nodes[u].top = r;
        nodes[u].wrapped -= rad;
      }
    }

    const auto old_parent = trees[n].parent;
    auto& siblings = trees[old_parent].children;
    siblings.erase(std::find(siblings.begin(), siblings.end(), n));
    std::uint32_t par = old_parent;
    CEdge pe = trees[n].parent_edge;
    std::vector<std::uint32_t> path;
    for (std::uint32_t j = 0; j <= len; ++j) path.push_back(at(static_cast<std::int64_t>(p) + dir * static_cast<std::int64_t>(j)));
    for (std::uint32_t j = 0; j + 1 < len; j += 2) {
      const auto in = cyc[path[j]].first;
      const auto out = cyc[path[j + 1]].first;
      const auto t = new_tree();
      auto& T = trees[t];
      T.inner = in;
      T.outer = out;
      T.inner_to_outer = edge_between(path[j], path[j + 1]);
      T.parent = par;
      T.parent_edge = pe;
      trees[par].children.push_back(t);
      regions[in].tree = regions[out].tree = t;
      regions[in].match = out;
      regions[in].match_edge = T.inner_to_outer;
      regions[out].match = in;
      regions[out].match_edge = T.inner_to_outer.rev();
      par = t;
      pe = edge_between(path[j + 1], path[j + 2]);
    }
    const auto last = cyc[path[len]].first;
    trees[n].inner = last;
    trees[n].parent = par;
    trees[n].parent_edge = pe;
    trees[par].children.push_back(n);
    regions[last].tree = n;
    regions[last].match = trees[n].outer;
    regions[last].match_edge = trees[n].inner_to_outer;
    regions[trees[n].outer].match = last;
    regions[trees[n].outer].match_edge = trees[n].inner_to_outer.rev();

    for (std::uint32_t j = len + 1; j < k; j += 2) {
      const auto i1 = at(static_cast<std::int64_t>(p) + dir * static_cast<std::int64_t>(j));
      const auto i2 = at(static_cast<std::int64_t>(p) + dir * static_cast<std::int64_t>(j + 1));
      const auto r1 = cyc[i1].first, r2 = cyc[i2].first;
      const CEdge e = edge_between(i1, i2);
      regions[r1].match = r2;
      regions[r1].match_edge = e;
      regions[r2].match = r1;
      regions[r2].match_edge = e.rev();
      regions[r1].tree = regions[r2].tree = kNone;
    }

    regions[bl].alive = false;
    regions[bl].cycle.clear();
    ++regions[bl].version;
    for (std::uint32_t j = 0; j <= len; ++j) {
      const auto r = cyc[path[j]].first;
      set_slope(r, j % 2 == 0 ? -1 : 1);
    }
    for (const auto& [r, e] : cyc) reschedule(r);
  }

  void hit_boundary(std::uint32_t r, CEdge e) {
    if (regions[r].slope <= 0 || regions[r].tree == kNone) throw std::logic_error("boundary hit by a non-growing region");
    match_and_dissolve(regions[r].tree, r, kBoundaryRegion, e);
  }

  void hit_region(std::uint32_t A, std::uint32_t S, CEdge e) {
    const auto a = regions[A].tree;
    if (regions[S].tree == kNone) {
      const auto C = regions[S].match;
      if (C == kNone) throw std::logic_error("free region outside every tree");
      if (C == kBoundaryRegion) {
        match_and_dissolve(a, A, S, e);
        regions[S].match = A;
        regions[S].match_edge = e.rev();
        return;
      }
      const auto t = new_tree();
      auto& T = trees[t];
      T.inner = S;
      T.outer = C;
      T.inner_to_outer = regions[S].match_edge;
      T.parent = a;
      T.parent_edge = e;
      trees[a].children.push_back(t);
      regions[S].tree = regions[C].tree = t;
      change(S, -1);
      change(C, 1);
      return;
    }
    const auto b = regions[S].tree;
    if (trees[b].outer != S) return;  // inner: cannot close at positive rate
    if (root_of(a) == root_of(b)) {
      form_blossom(a, b, S, e);
    } else {
      match_and_dissolve(a, A, S, e);
      match_and_dissolve(b, S, A, e.rev());
    }
  }

  void on_node(std::uint32_t u) {
    std::uint32_t v, eid;
    const Time t = next_event(u, v, eid);
    if (t == kNever) return;
    if (t > now) {
      push(t, u, ++nodes[u].version, false);
      return;
    }
    const auto R = nodes[u].top;
    const auto B = g.boundary();
    if (v == B) {
      hit_boundary(R, {nodes[u].source, kBoundaryEvent});
    } else if (nodes[v].top == kNone) {
      touch(v);
      auto& nv = nodes[v];
      nv.region = R;
      nv.top = R;
      nv.source = nodes[u].source;
      nv.dist = radius(R);
      nv.wrapped = 0;
      regions[R].shell.push_back(v);
      schedule_node(v);
    } else {
      const auto S = nodes[v].top;
      CEdge e{nodes[u].source, nodes[v].source};
      if (regions[R].slope > 0) {
        hit_region(R, S, e);
      } else {
        hit_region(S, R, e.rev());
      }
    }
    schedule_node(u);
  }

  void on_region(std::uint32_t r) {
    auto& R = regions[r];
    if (!R.shell.empty()) {
      const auto v = R.shell.back();
      if (radius(r) > nodes[v].dist) {
        schedule_region(r);
        return;
      }
      R.shell.pop_back();
      auto& nv = nodes[v];
      nv.region = nv.top = nv.source = kNone;
      nv.dist = nv.wrapped = 0;
      ++nv.version;
      for (auto e : g.incident(v)) {
        const auto& edge = g.edges[e];
        const auto w = edge.u == v ? edge.v : edge.u;
        if (w != g.boundary() && nodes[w].top != kNone) schedule_node(w);
      }
      schedule_region(r);
      return;
    }
    if (radius(r) > 0) {
      schedule_region(r);
      return;
    }
    if (!R.cycle.empty()) {
      shatter(r);
      return;
    }
    // Trivial inner region at zero radius: its neighbours in the tree touch.
    const auto n = R.tree;
    const auto par = trees[n].parent;
    const CEdge e{trees[n].inner_to_outer.b, trees[n].parent_edge.a};
    form_blossom(n, par, trees[par].outer, e);
  }

  void pair_up(std::uint32_t r, std::uint32_t event, std::vector<std::pair<std::uint32_t, std::uint32_t>>& out) {
    const auto& R = regions[r];
    if (R.cycle.empty()) {
      if (R.source != event) throw std::logic_error("match edge does not end at the region source");
      return;
    }
    const auto k = static_cast<std::uint32_t>(R.cycle.size());
    const auto i = child_index(r, event);
    pair_up(R.cycle[i].first, event, out);
    for (std::uint32_t j = 1; j < k; j += 2) {
      const auto c1 = (i + j) % k;
      const auto c2 = (i + j + 1) % k;
      const auto e = R.cycle[c1].second;
      out.push_back({e.a, e.b});
      pair_up(R.cycle[c1].first, e.a, out);
      pair_up(R.cycle[c2].first, e.b, out);
    }
  }

  bool run(const std::vector<std::uint32_t>& events, std::vector<std::pair<std::uint32_t, std::uint32_t>>& out) {
    out.clear();
    for (auto x : events) {
      if (x >= nodes.size()) throw std::invalid_argument("detection event out of range");
      if (nodes[x].top != kNone) throw std::invalid_argument("duplicate detection event");
      const auto r = static_cast<std::uint32_t>(regions.size());
      regions.emplace_back();
      auto& R = regions[r];
      R.slope = 1;
      R.source = x;
      const auto t = new_tree();
      trees[t].outer = r;
      R.tree = t;
      touch(x);
      auto& nx = nodes[x];
      nx.region = nx.top = r;
      nx.source = x;
    }
    for (auto x : events) schedule_node(x);
    while (!queue.empty()) {
      const Event ev = queue.top();
      queue.pop();
      if (ev.region) {
        if (!regions[ev.id].alive || regions[ev.id].version != ev.version) continue;
        now = ev.t;
        on_region(ev.id);
      } else {
        if (nodes[ev.id].version != ev.version || nodes[ev.id].top == kNone) continue;
        now = ev.t;
        on_node(ev.id);
      }
    }
    bool ok = true;
    for (std::uint32_t r = 0; r < regions.size(); ++r) {
      const auto& R = regions[r];
      if (!R.alive || R.parent != kNone) continue;
      if (R.tree != kNone || R.match == kNone) {
        ok = false;
        break;
      }
      if (R.match == kBoundaryRegion) {
        out.push_back({R.match_edge.a, kBoundaryEvent});
        pair_up(r, R.match_edge.a, out);
      } else if (r < R.match) {
        out.push_back({R.match_edge.a, R.match_edge.b});
        pair_up(r, R.match_edge.a, out);
        pair_up(R.match, R.match_edge.b, out);
      }
    }
    reset();
    return ok;
  }

  void reset() {
    for (auto u : touched) nodes[u] = NodeState{};
    touched.clear();
    regions.clear();
    trees.clear();
    queue = {};
    now = 0;
    seq = 0;
  }
};

SparseBlossom::SparseBlossom(const MatchingGraph& graph) : impl_(new Impl(graph)) {}
SparseBlossom::~SparseBlossom() { delete impl_; }

bool SparseBlossom::match(const std::vector<std::uint32_t>& events,
                          std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs) {
  return impl_->run(events, pairs);
}

}  // namespace ftsurf
