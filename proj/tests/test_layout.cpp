#include <gtest/gtest.h>

#include <random>

#include "ftsurf/layout.hpp"

using namespace ftsurf;

namespace {

bool all_zero(const std::vector<std::uint8_t>& v) {
  for (auto b : v) {
    if (b) return false;
  }
  return true;
}

}  // namespace

namespace ftsurf {
void PrintTo(CodeKind k, std::ostream* os) { *os << to_string(k); }
}  // namespace ftsurf

class LayoutInvariants : public ::testing::TestWithParam<std::tuple<CodeKind, int>> {};

TEST_P(LayoutInvariants, Census) {
  const auto [kind, d] = GetParam();
  const Layout l(kind, d);
  const std::size_t dd = d;
  if (kind == CodeKind::Unrotated) {
    EXPECT_EQ(l.num_data(), dd * dd + (dd - 1) * (dd - 1));
  } else {
    EXPECT_EQ(l.num_data(), dd * dd);
  }
  EXPECT_EQ(l.num_qubits(), total_qubits(kind, d));
  std::map<std::size_t, std::size_t> weights;
  for (const auto& s : l.stabilizers()) {
    ++weights[s.weight()];
    for (Qubit q : s.data()) EXPECT_TRUE(l.is_data(q));
    EXPECT_FALSE(l.is_data(s.ancilla));
  }
  if (kind == CodeKind::Unrotated) {
    EXPECT_EQ(weights[4], 2 * (dd - 1) * (dd - 2));
    EXPECT_EQ(weights[3], 4 * (dd - 1));
  } else {
    EXPECT_EQ(weights[4], (dd - 1) * (dd - 1));
    EXPECT_EQ(weights[2], 2 * (dd - 1));
  }
  EXPECT_EQ(l.count(PauliType::X), l.count(PauliType::Z));
  for (const auto& a : l.stabilizers()) {
    for (const auto& b : l.stabilizers()) EXPECT_EQ(commutes(a.pauli(), b.pauli()), 0);
    EXPECT_EQ(commutes(a.pauli(), l.logical_x()), 0);
    EXPECT_EQ(commutes(a.pauli(), l.logical_z()), 0);
  }
  EXPECT_EQ(commutes(l.logical_x(), l.logical_z()), 1);
  EXPECT_EQ(l.logical_x().weight(), dd);
  EXPECT_EQ(l.logical_z().weight(), dd);
}

INSTANTIATE_TEST_SUITE_P(All, LayoutInvariants,
                         ::testing::Combine(::testing::Values(CodeKind::Rotated, CodeKind::Unrotated),
                                            ::testing::Values(3, 5, 7, 9)));

TEST(Layout, SmallPatchCounts) {
  const Layout u3(CodeKind::Unrotated, 3);
  EXPECT_EQ(u3.num_data(), 13u);
  EXPECT_EQ(u3.stabilizers().size(), 12u);
  EXPECT_EQ(u3.count(PauliType::X), 6u);
  EXPECT_EQ(u3.num_qubits(), 25u);
  const Layout r3(CodeKind::Rotated, 3);
  EXPECT_EQ(r3.num_data(), 9u);
  EXPECT_EQ(r3.stabilizers().size(), 8u);
  EXPECT_EQ(r3.num_qubits(), 17u);
  const Layout u5(CodeKind::Unrotated, 5);
  EXPECT_EQ(u5.num_data(), 41u);
  EXPECT_EQ(u5.stabilizers().size(), 40u);
}

TEST(Layout, RejectsBadDistance) {
  EXPECT_THROW(Layout(CodeKind::Rotated, 4), std::invalid_argument);
  EXPECT_THROW(Layout(CodeKind::Unrotated, 1), std::invalid_argument);
}

TEST(Layout, Syndrome) {
  const Layout l(CodeKind::Unrotated, 3);
  EXPECT_TRUE(all_zero(l.syndrome(PauliString())));
  EXPECT_TRUE(all_zero(l.syndrome(l.logical_x())));
  EXPECT_THROW(l.syndrome(PauliString::x(static_cast<Qubit>(l.num_data()))), std::invalid_argument);
  // bulk data qubit at grid (2,2): X flips the Z checks west and east of it
  Qubit bulk = 0;
  for (Qubit q = 0; q < l.num_data(); ++q) {
    if (l.coord(q) == Coord{2, 2}) bulk = q;
  }
  const auto s = l.syndrome(PauliString::x(bulk));
  std::vector<Coord> flagged;
  for (std::size_t i = 0; i < s.size(); ++i) {
    // commutation oracle against each stabilizer directly
    const auto& st = l.stabilizers()[i];
    const auto data = st.data();
    const bool touches = std::find(data.begin(), data.end(), bulk) != data.end();
    EXPECT_EQ(s[i], touches && st.type == PauliType::Z ? 1 : 0);
    if (s[i]) flagged.push_back(l.coord(st.ancilla));
  }
  ASSERT_EQ(flagged.size(), 2u);
  EXPECT_EQ(flagged[0].row, 2);
  EXPECT_EQ(flagged[1].row, 2);
}

TEST(Layout, SyndromeLinear) {
  std::mt19937_64 rng(5);
  const Layout l(CodeKind::Rotated, 5);
  for (int t = 0; t < 1000; ++t) {
    std::vector<Qubit> ax, az, bx, bz;
    for (Qubit q = 0; q < l.num_data(); ++q) {
      if (rng() % 3 == 0) ax.push_back(q);
      if (rng() % 3 == 0) az.push_back(q);
      if (rng() % 3 == 0) bx.push_back(q);
      if (rng() % 3 == 0) bz.push_back(q);
    }
    const PauliString a(ax, az);
    const PauliString b(bx, bz);
    const auto sa = l.syndrome(a);
    const auto sb = l.syndrome(b);
    const auto sab = l.syndrome(a * b);
    for (std::size_t i = 0; i < sa.size(); ++i) EXPECT_EQ(sab[i], sa[i] ^ sb[i]);
  }
}

TEST(Layout, StabilizerGroup) {
  for (CodeKind k : {CodeKind::Rotated, CodeKind::Unrotated}) {
    const Layout l(k, 3);
    EXPECT_TRUE(l.in_stabilizer_group(PauliString()));
    PauliString prod;
    int n = 0;
    for (const auto& s : l.stabilizers()) {
      if (s.type == PauliType::Z && n < 2) {
        prod *= s.pauli();
        ++n;
      }
    }
    EXPECT_TRUE(l.in_stabilizer_group(prod));
    EXPECT_FALSE(l.in_stabilizer_group(l.logical_z()));
    EXPECT_FALSE(l.in_stabilizer_group(l.logical_x()));
    EXPECT_FALSE(l.in_stabilizer_group(PauliString::z(0)));
  }
}

TEST(Layout, LogicalAction) {
  const Layout l(CodeKind::Unrotated, 5);
  EXPECT_EQ(l.logical_action(l.logical_z()), (std::array<int, 2>{1, 0}));
  EXPECT_EQ(l.logical_action(l.stabilizers()[0].pauli()), (std::array<int, 2>{0, 0}));
  const Qubit q = l.logical_x().x_support()[1];
  EXPECT_EQ(l.logical_action(PauliString::z(q)), (std::array<int, 2>{1, 0}));
}

TEST(Layout, BruteForceDistance) {
  EXPECT_EQ(code_distance_bruteforce(Layout(CodeKind::Unrotated, 3)), 3);
  EXPECT_EQ(code_distance_bruteforce(Layout(CodeKind::Rotated, 3)), 3);
  EXPECT_THROW(code_distance_bruteforce(Layout(CodeKind::Rotated, 5)), std::invalid_argument);
}
