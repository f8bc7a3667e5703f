#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ftsurf {

using Qubit = std::uint32_t;

/// Signless Pauli operator stored as two sorted qubit sets. A qubit present in
/// both sets carries Y. Global phase is never tracked.
class PauliString {
 public:
  PauliString() = default;
  PauliString(std::vector<Qubit> x_support, std::vector<Qubit> z_support);

  static PauliString x(Qubit q) { return PauliString({q}, {}); }
  static PauliString y(Qubit q) { return PauliString({q}, {q}); }
  static PauliString z(Qubit q) { return PauliString({}, {q}); }
  static PauliString xs(std::span<const Qubit> qs);
  static PauliString zs(std::span<const Qubit> qs);

  /// Parses "X0*Z3*Y7". "I" or the empty string is the identity.
  static PauliString parse(std::string_view text);

  const std::vector<Qubit>& x_support() const { return x_; }
  const std::vector<Qubit>& z_support() const { return z_; }

  bool has_x(Qubit q) const;
  bool has_z(Qubit q) const;
  /// 'I', 'X', 'Y' or 'Z'.
  char at(Qubit q) const;

  std::size_t weight() const;
  bool is_identity() const { return x_.empty() && z_.empty(); }
  /// Sorted union of both supports.
  std::vector<Qubit> support() const;

  PauliString& operator*=(const PauliString& other);
  friend PauliString operator*(PauliString a, const PauliString& b) { return a *= b; }
  friend bool operator==(const PauliString&, const PauliString&) = default;
  friend auto operator<=>(const PauliString&, const PauliString&) = default;

  /// "X0*Z3*Y7" in ascending qubit order; identity prints as "I".
  std::string to_string() const;

 private:
  std::vector<Qubit> x_;
  std::vector<Qubit> z_;
};

/// Symplectic form: 1 if the operators anticommute, 0 otherwise.
int commutes(const PauliString& a, const PauliString& b);

enum class GateKind { H, CZ, CZZ };

struct Gate {
  GateKind kind;
  std::vector<Qubit> qubits;  // CZZ: control first, then both targets
};

/// U P U^dagger up to sign. Throws std::invalid_argument on a malformed gate.
PauliString conjugate(const Gate& gate, const PauliString& p);

/// Sorted-set symmetric difference, shared by several modules.
std::vector<Qubit> symmetric_difference(const std::vector<Qubit>& a,
                                        const std::vector<Qubit>& b);

}  // namespace ftsurf
