#include <gtest/gtest.h>

#include <random>

#include "ftsurf/pauli.hpp"

using namespace ftsurf;

namespace {

PauliString random_pauli(std::mt19937_64& rng, Qubit n) {
  std::vector<Qubit> xs;
  std::vector<Qubit> zs;
  for (Qubit q = 0; q < n; ++q) {
    const auto v = rng() % 4;
    if (v & 1) xs.push_back(q);
    if (v & 2) zs.push_back(q);
  }
  return PauliString(xs, zs);
}

// Oracle: CZ from the elementary rule only.
PauliString apply_cz(Qubit a, Qubit b, const PauliString& p) {
  PauliString out = p;
  if (p.has_x(a)) out *= PauliString::z(b);
  if (p.has_x(b)) out *= PauliString::z(a);
  return out;
}

}  // namespace

TEST(Pauli, Multiply) {
  EXPECT_TRUE((PauliString::x(0) * PauliString::x(0)).is_identity());
  EXPECT_EQ(PauliString::x(0) * PauliString::z(0), PauliString::y(0));
  EXPECT_EQ(PauliString::parse("X0*Z1") * PauliString::parse("Z0*Z1"), PauliString::y(0));
}

TEST(Pauli, ParseAndPrint) {
  const auto p = PauliString::parse("X0*Z3*Y7");
  EXPECT_EQ(p.to_string(), "X0*Z3*Y7");
  EXPECT_EQ(p.weight(), 3u);
  EXPECT_EQ(p.at(7), 'Y');
  EXPECT_EQ(p.at(5), 'I');
  EXPECT_EQ(PauliString().to_string(), "I");
  EXPECT_TRUE(PauliString::parse("I").is_identity());
  EXPECT_THROW(PauliString::parse("Q3"), std::invalid_argument);
}

TEST(Pauli, Commutes) {
  EXPECT_EQ(commutes(PauliString::x(0), PauliString::z(0)), 1);
  EXPECT_EQ(commutes(PauliString::parse("X0*X1"), PauliString::parse("Z0*Z1")), 0);
  EXPECT_EQ(commutes(PauliString::y(0), PauliString::x(0)), 1);
}

TEST(Pauli, ConjugateExamples) {
  EXPECT_EQ(conjugate({GateKind::H, {0}}, PauliString::x(0)), PauliString::z(0));
  EXPECT_EQ(conjugate({GateKind::CZ, {0, 1}}, PauliString::x(0)), PauliString::parse("X0*Z1"));
  // two sequential CZs as the oracle
  const auto y = PauliString::y(0);
  EXPECT_EQ(conjugate({GateKind::CZZ, {0, 1, 2}}, y), apply_cz(0, 2, apply_cz(0, 1, y)));
  EXPECT_EQ(conjugate({GateKind::CZZ, {0, 1, 2}}, y), PauliString::parse("Y0*Z1*Z2"));
  EXPECT_THROW(conjugate({GateKind::CZ, {0, 0}}, y), std::invalid_argument);
  EXPECT_THROW(conjugate({GateKind::CZZ, {0, 1}}, y), std::invalid_argument);
}

TEST(Pauli, CzzMatchesTwoCzOnAll64) {
  for (int code = 0; code < 64; ++code) {
    std::vector<Qubit> xs;
    std::vector<Qubit> zs;
    for (Qubit q = 0; q < 3; ++q) {
      if (code >> (2 * q) & 1) xs.push_back(q);
      if (code >> (2 * q) & 2) zs.push_back(q);
    }
    const PauliString p(xs, zs);
    EXPECT_EQ(conjugate({GateKind::CZZ, {0, 1, 2}}, p), apply_cz(0, 2, apply_cz(0, 1, p)));
  }
}

TEST(Pauli, RandomizedProperties) {
  std::mt19937_64 rng(11);
  const std::vector<Gate> gates = {{GateKind::H, {3}}, {GateKind::CZ, {1, 5}},
                                   {GateKind::CZZ, {7, 0, 4}}, {GateKind::CZZ, {2, 6, 3}}};
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = random_pauli(rng, 8);
    const auto q = random_pauli(rng, 8);
    for (const auto& g : gates) {
      const auto gp = conjugate(g, p);
      const auto gq = conjugate(g, q);
      EXPECT_EQ(commutes(p, q), commutes(gp, gq));
      EXPECT_EQ(conjugate(g, p * q), gp * gq);
      EXPECT_EQ(conjugate(g, gp), p);
    }
  }
}
