#include "ftsurf/layout.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace ftsurf {

std::string to_string(CodeKind k) { return k == CodeKind::Rotated ? "rotated" : "unrotated"; }
std::string to_string(PauliType t) { return t == PauliType::X ? "X" : "Z"; }
char to_char(Direction d) { return "NESW"[static_cast<int>(d)]; }

CodeKind parse_code_kind(const std::string& s) {
  if (s == "rotated") return CodeKind::Rotated;
  if (s == "unrotated") return CodeKind::Unrotated;
  throw std::invalid_argument("unknown code kind '" + s + "'");
}

PauliType parse_pauli_type(const std::string& s) {
  if (s == "X" || s == "x") return PauliType::X;
  if (s == "Z" || s == "z") return PauliType::Z;
  throw std::invalid_argument("unknown basis '" + s + "'");
}

std::vector<Qubit> StabilizerDef::data() const {
  std::vector<Qubit> out;
  for (const auto& n : neighbors) {
    if (n) out.push_back(*n);
  }
  std::sort(out.begin(), out.end());
  return out;
}

PauliString StabilizerDef::pauli() const {
  const auto qs = data();
  return type == PauliType::X ? PauliString::xs(qs) : PauliString::zs(qs);
}

std::size_t total_qubits(CodeKind kind, int d) {
  const auto dd = static_cast<std::size_t>(d);
  return kind == CodeKind::Unrotated ? 4 * dd * dd - 4 * dd + 1 : 2 * dd * dd - 1;
}

Layout::Layout(CodeKind kind, int d) : kind_(kind), d_(d) {
  if (d < 3 || d % 2 == 0) {
    throw std::invalid_argument("code distance must be an odd integer >= 3");
  }
  if (kind == CodeKind::Unrotated) {
    build_unrotated();
  } else {
    build_rotated();
  }
}

namespace {

bool row_major_less(const Coord& a, const Coord& b) {
  return a.row != b.row ? a.row < b.row : a.col < b.col;
}

// Neighbour offsets in grid coordinates, indexed by Direction.
struct Offsets {
  std::array<Coord, 4> delta;
};

}  // namespace

// Data on (r + c) even, ancillas on (r + c) odd of a (2d-1) x (2d-1) grid.
// Z checks sit at (even, odd), X checks at (odd, even).
void Layout::build_unrotated() {
  const int n = 2 * d_ - 1;
  std::vector<Coord> data;
  std::vector<std::pair<Coord, PauliType>> ancillas;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if ((r + c) % 2 == 0) {
        data.push_back({r, c});
      } else {
        ancillas.push_back({{r, c}, r % 2 == 0 ? PauliType::Z : PauliType::X});
      }
    }
  }
  finish(ancillas, data);
}

// Data (i, j) at grid (2i+1, 2j+1); plaquette (a, b) at grid (2a, 2b) touching the
// four surrounding data qubits. X checks on (a + b) even, with weight-2 X checks on
// the west/east edges and weight-2 Z checks on the north/south edges.
void Layout::build_rotated() {
  std::vector<Coord> data;
  std::vector<std::pair<Coord, PauliType>> ancillas;
  for (int i = 0; i < d_; ++i) {
    for (int j = 0; j < d_; ++j) data.push_back({2 * i + 1, 2 * j + 1});
  }
  for (int a = 0; a <= d_; ++a) {
    for (int b = 0; b <= d_; ++b) {
      const PauliType t = (a + b) % 2 == 0 ? PauliType::X : PauliType::Z;
      const bool bulk = a >= 1 && a <= d_ - 1 && b >= 1 && b <= d_ - 1;
      const bool ew_edge = (b == 0 || b == d_) && a >= 1 && a <= d_ - 1;
      const bool ns_edge = (a == 0 || a == d_) && b >= 1 && b <= d_ - 1;
      if (bulk || (ew_edge && t == PauliType::X) || (ns_edge && t == PauliType::Z)) {
        ancillas.push_back({{2 * a, 2 * b}, t});
      }
    }
  }
  finish(ancillas, data);
}

void Layout::finish(const std::vector<std::pair<Coord, PauliType>>& ancillas,
                    const std::vector<Coord>& data_in) {
  std::vector<Coord> data = data_in;
  std::sort(data.begin(), data.end(), row_major_less);
  auto anc = ancillas;
  std::sort(anc.begin(), anc.end(),
            [](const auto& a, const auto& b) { return row_major_less(a.first, b.first); });

  num_data_ = data.size();
  coords_ = data;
  std::map<std::pair<int, int>, Qubit> data_at;
  for (Qubit q = 0; q < data.size(); ++q) data_at[{data[q].row, data[q].col}] = q;

  const Offsets offs = kind_ == CodeKind::Unrotated
                           ? Offsets{{Coord{-1, 0}, Coord{0, 1}, Coord{1, 0}, Coord{0, -1}}}
                           : Offsets{{Coord{-1, -1}, Coord{-1, 1}, Coord{1, 1}, Coord{1, -1}}};
  for (const auto& [c, t] : anc) {
    StabilizerDef s;
    s.type = t;
    s.ancilla = static_cast<Qubit>(coords_.size());
    coords_.push_back(c);
    for (int dir = 0; dir < 4; ++dir) {
      auto it = data_at.find({c.row + offs.delta[dir].row, c.col + offs.delta[dir].col});
      if (it != data_at.end()) s.neighbors[dir] = it->second;
    }
    stabilizers_.push_back(s);
  }

  int min_row = data.front().row;
  int min_col = data.front().col;
  for (const auto& c : data) {
    min_row = std::min(min_row, c.row);
    min_col = std::min(min_col, c.col);
  }
  std::vector<Qubit> north;
  std::vector<Qubit> west;
  for (Qubit q = 0; q < data.size(); ++q) {
    if (data[q].row == min_row) north.push_back(q);
    if (data[q].col == min_col) west.push_back(q);
  }
  logical_x_ = PauliString::xs(north);
  logical_z_ = PauliString::zs(west);

  basis_ = Gf2Basis(2 * num_data_);
  for (const auto& s : stabilizers_) basis_.insert(symplectic(s.pauli()));
}

std::size_t Layout::count(PauliType t) const {
  return static_cast<std::size_t>(std::count_if(stabilizers_.begin(), stabilizers_.end(),
                                                [t](const auto& s) { return s.type == t; }));
}

BitVec Layout::symplectic(const PauliString& e) const {
  BitVec v(2 * num_data_);
  for (Qubit q : e.x_support()) {
    if (!is_data(q)) throw std::invalid_argument("Pauli support outside data qubits");
    v.set(q);
  }
  for (Qubit q : e.z_support()) {
    if (!is_data(q)) throw std::invalid_argument("Pauli support outside data qubits");
    v.set(num_data_ + q);
  }
  return v;
}

std::vector<std::uint8_t> Layout::syndrome(const PauliString& e) const {
  for (Qubit q : e.support()) {
    if (!is_data(q)) throw std::invalid_argument("Pauli support outside data qubits");
  }
  std::vector<std::uint8_t> s(stabilizers_.size());
  for (std::size_t i = 0; i < stabilizers_.size(); ++i) {
    s[i] = static_cast<std::uint8_t>(commutes(stabilizers_[i].pauli(), e));
  }
  return s;
}

bool Layout::in_stabilizer_group(const PauliString& e) const {
  return basis_.contains(symplectic(e));
}

std::array<int, 2> Layout::logical_action(const PauliString& e) const {
  return {commutes(logical_x_, e), commutes(logical_z_, e)};
}

int code_distance_bruteforce(const Layout& layout) {
  const std::size_t n = layout.num_data();
  if (n > 16) throw std::invalid_argument("exhaustive distance search limited to 16 data qubits");
  int best = static_cast<int>(n) + 1;
  for (PauliType t : {PauliType::X, PauliType::Z}) {
    for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
      const int w = std::popcount(mask);
      if (w >= best) continue;
      std::vector<Qubit> qs;
      for (Qubit q = 0; q < n; ++q) {
        if (mask >> q & 1U) qs.push_back(q);
      }
      const PauliString e = t == PauliType::X ? PauliString::xs(qs) : PauliString::zs(qs);
      const auto s = layout.syndrome(e);
      if (std::any_of(s.begin(), s.end(), [](auto b) { return b != 0; })) continue;
      const auto l = layout.logical_action(e);
      if (l[0] || l[1]) best = w;
    }
  }
  return best;
}

}  // namespace ftsurf
