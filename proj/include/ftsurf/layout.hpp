#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ftsurf/bits.hpp"
#include "ftsurf/pauli.hpp"

namespace ftsurf {

enum class CodeKind { Rotated, Unrotated };
enum class PauliType { X, Z };
/// Plaquette neighbour labels. For the rotated code these are the corners of the
/// square plaquette rotated by 45 degrees: N = upper-left, E = upper-right,
/// S = lower-right, W = lower-left.
enum class Direction { N = 0, E = 1, S = 2, W = 3 };

std::string to_string(CodeKind k);
std::string to_string(PauliType t);
char to_char(Direction d);
CodeKind parse_code_kind(const std::string& s);
PauliType parse_pauli_type(const std::string& s);

struct Coord {
  int row = 0;
  int col = 0;
  friend bool operator==(const Coord&, const Coord&) = default;
};

struct StabilizerDef {
  PauliType type = PauliType::Z;
  Qubit ancilla = 0;
  std::array<std::optional<Qubit>, 4> neighbors;  // indexed by Direction

  std::optional<Qubit> neighbor(Direction d) const { return neighbors[static_cast<int>(d)]; }
  std::vector<Qubit> data() const;
  std::size_t weight() const { return data().size(); }
  PauliString pauli() const;
};

class Layout {
 public:
  /// Throws std::invalid_argument unless d is odd and >= 3.
  Layout(CodeKind kind, int d);

  CodeKind kind() const { return kind_; }
  int distance() const { return d_; }
  std::size_t num_data() const { return num_data_; }
  std::size_t num_qubits() const { return coords_.size(); }
  bool is_data(Qubit q) const { return q < num_data_; }
  const Coord& coord(Qubit q) const { return coords_.at(q); }
  const std::vector<StabilizerDef>& stabilizers() const { return stabilizers_; }
  std::size_t count(PauliType t) const;
  const PauliString& logical_x() const { return logical_x_; }
  const PauliString& logical_z() const { return logical_z_; }
  const PauliString& logical(PauliType t) const {
    return t == PauliType::X ? logical_x_ : logical_z_;
  }

  /// Component i is <S_i, e>. Throws if e touches an ancilla.
  std::vector<std::uint8_t> syndrome(const PauliString& e) const;
  /// True iff e is a product of stabilizer generators.
  bool in_stabilizer_group(const PauliString& e) const;
  /// (<logical_x, e>, <logical_z, e>).
  std::array<int, 2> logical_action(const PauliString& e) const;

  /// Symplectic encoding over the data qubits: bits [0,n) are X, [n,2n) are Z.
  BitVec symplectic(const PauliString& e) const;

 private:
  void build_unrotated();
  void build_rotated();
  void finish(const std::vector<std::pair<Coord, PauliType>>& ancillas,
              const std::vector<Coord>& data);

  CodeKind kind_;
  int d_;
  std::size_t num_data_ = 0;
  std::vector<Coord> coords_;
  std::vector<StabilizerDef> stabilizers_;
  PauliString logical_x_;
  PauliString logical_z_;
  Gf2Basis basis_{0};
};

/// Number of physical qubits including ancillas for one patch.
std::size_t total_qubits(CodeKind kind, int d);

/// Exhaustive minimum weight of a single-type logical operator. Refuses layouts
/// with more than 16 data qubits.
int code_distance_bruteforce(const Layout& layout);

}  // namespace ftsurf
