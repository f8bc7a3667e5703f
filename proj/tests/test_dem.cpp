#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "ftsurf/dem.hpp"
#include "ftsurf/frame.hpp"

using namespace ftsurf;

namespace {

Circuit memory(const Layout& l, GateStyle style, const std::string& ordering, PauliType basis, int rounds) {
  CircuitOptions o;
  o.basis = basis;
  o.rounds = rounds;
  o.style = style;
  o.ordering = parse_ordering(style, ordering);
  return build_memory_circuit(l, o);
}

std::vector<std::uint32_t> xor_ids(std::vector<std::uint32_t> a, const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> out;
  std::sort(a.begin(), a.end());
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

ElementaryFault fault_at(std::uint32_t ins, FaultSlot slot, PauliString p) {
  ElementaryFault f;
  f.instruction = ins;
  f.slot = slot;
  f.pauli = std::move(p);
  f.probability = 0.01;
  f.channel_strength = 0.01;
  return f;
}

}  // namespace

TEST(Frame, IdentityFault) {
  const Layout l(CodeKind::Rotated, 3);
  const auto c = memory(l, GateStyle::CZ, "sewn", PauliType::Z, 3);
  const auto s = propagate_fault(c, fault_at(10, FaultSlot::After, PauliString()));
  EXPECT_TRUE(s.detectors.empty());
  EXPECT_EQ(s.observables, 0u);
  EXPECT_TRUE(s.final_error.is_identity());
  EXPECT_TRUE(s.meas_flips.empty());
}

TEST(Frame, MeasurementFlipHitsTwoConsecutiveDetectors) {
  const Layout l(CodeKind::Unrotated, 3);
  const auto c = memory(l, GateStyle::CZZ, "24", PauliType::Z, 3);
  // second ancilla measurement of some stabilizer in a middle round
  for (std::uint32_t d = 0; d < c.detectors.size(); ++d) {
    const auto& info = c.detector_info[d];
    if (info.round != 1) continue;
    const std::uint32_t m = c.detectors[d].back();
    const auto ins = c.measurement_instruction[m];
    const auto& target = c.instructions[ins];
    const auto s = propagate_fault(c, fault_at(ins, FaultSlot::Before, PauliString::x(target.qubits[0])));
    ASSERT_EQ(s.detectors.size(), 2u);
    EXPECT_EQ(s.meas_flips, std::vector<std::uint32_t>{m});
    const auto& a = c.detector_info[s.detectors[0]];
    const auto& b = c.detector_info[s.detectors[1]];
    EXPECT_EQ(a.stabilizer, info.stabilizer);
    EXPECT_EQ(b.stabilizer, info.stabilizer);
    EXPECT_EQ(b.round, a.round + 1);
  }
}

TEST(Frame, HookError) {
  for (CodeKind kind : {CodeKind::Rotated, CodeKind::Unrotated}) {
    const Layout l(kind, 3);
    const auto g = build_gadget_circuit(l, GateStyle::CZZ, parse_ordering(GateStyle::CZZ, "nw"), 2, false);
    // first CZZ of a weight-4 Z check; the ancilla sits in the X basis here, so
    // the hook is an X fault on it
    for (std::uint32_t i = 0; i < g.instructions.size(); ++i) {
      const auto& ins = g.instructions[i];
      if (ins.kind != OpKind::CZZ) continue;
      const Qubit anc = ins.qubits[0];
      const StabilizerDef* st = nullptr;
      for (const auto& s : l.stabilizers()) {
        if (s.ancilla == anc) st = &s;
      }
      if (st->type != PauliType::Z || st->weight() != 4) continue;
      const auto s = propagate_fault(g, fault_at(i, FaultSlot::After, PauliString::x(anc)));
      EXPECT_EQ(s.final_error.weight(), 2u);
      EXPECT_TRUE(s.final_error.x_support().empty());
      const auto data = st->data();
      for (Qubit q : s.final_error.z_support()) {
        EXPECT_NE(std::find(data.begin(), data.end(), q), data.end());
      }
      ASSERT_FALSE(s.detectors.empty());
      for (auto d : s.detectors) EXPECT_EQ(g.detector_info[d].type, PauliType::X);
      break;
    }
  }
}

TEST(Frame, BatchMatchesSingleAndLinearity) {
  const Layout l(CodeKind::Unrotated, 3);
  const auto c = memory(l, GateStyle::CZZ, "24", PauliType::X, 3);
  const auto faults = enumerate_faults(c, NoiseModel{NoiseKind::SI, 0.001, 1.0});
  const auto batch = propagate_faults(c, faults, true, 2);
  const DetectorMap map(c);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 300; ++t) {
    const auto& f = faults[rng() % faults.size()];
    const std::size_t idx = static_cast<std::size_t>(&f - faults.data());
    const auto single = propagate_fault(c, f);
    EXPECT_EQ(single, batch[idx]);
    EXPECT_EQ(map.detectors_of(single.meas_flips), single.detectors);
  }
  for (int t = 0; t < 1000; ++t) {
    std::vector<ElementaryFault> path;
    FaultSignature expect;
    const int k = 2 + static_cast<int>(rng() % 2);
    for (int j = 0; j < k; ++j) {
      const std::size_t idx = rng() % faults.size();
      path.push_back(faults[idx]);
      expect.detectors = xor_ids(expect.detectors, batch[idx].detectors);
      expect.meas_flips = xor_ids(expect.meas_flips, batch[idx].meas_flips);
      expect.observables ^= batch[idx].observables;
      expect.final_error *= batch[idx].final_error;
    }
    EXPECT_EQ(propagate_path(c, path), expect);
  }
}

TEST(Dem, MergeCombinesProbabilities) {
  const Layout l(CodeKind::Rotated, 3);
  const auto c = memory(l, GateStyle::CZ, "sewn", PauliType::Z, 2);
  const auto ins = c.measurement_instruction[0];
  auto f = fault_at(ins, FaultSlot::Before, PauliString::x(c.instructions[ins].qubits[0]));
  f.channel_qubits = 0;
  f.probability = 0.1;
  const auto dem = build_dem(c, std::vector<ElementaryFault>{f, f});
  ASSERT_EQ(dem.channels.size(), 1u);
  EXPECT_NEAR(dem.channels[0].p, 2 * 0.1 * 0.9, 1e-15);
  EXPECT_EQ(dem.channels[0].sources, (std::vector<std::uint32_t>{0, 1}));
}

TEST(Dem, ChannelsAreNontrivial) {
  const Layout l(CodeKind::Unrotated, 3);
  const auto c = memory(l, GateStyle::CZZ, "24", PauliType::Z, 3);
  const auto faults = enumerate_faults(c, NoiseModel{NoiseKind::NI, 0.001, 1.0});
  const auto dem = build_dem(c, faults);
  EXPECT_LE(dem.channels.size(), faults.size());
  std::set<std::pair<std::vector<std::uint32_t>, std::uint64_t>> seen;
  for (const auto& ch : dem.channels) {
    EXPECT_TRUE(!ch.detectors.empty() || ch.observables != 0);
    EXPECT_GT(ch.p, 0);
    EXPECT_LE(ch.p, 0.5);
    EXPECT_TRUE(seen.insert({ch.detectors, ch.observables}).second);
  }
  // exhaustive oracle: every fault with a nonzero signature lands in exactly one channel
  std::size_t nonzero = 0;
  const auto sigs = propagate_faults(c, faults, false);
  for (const auto& s : sigs) nonzero += !s.detectors.empty() || s.observables != 0;
  std::size_t sources = 0;
  for (const auto& ch : dem.channels) sources += ch.sources.size();
  EXPECT_EQ(sources, nonzero);
}

TEST(Dem, DecompositionXorInvariant) {
  for (CodeKind kind : {CodeKind::Rotated, CodeKind::Unrotated}) {
    const Layout l(kind, 3);
    const auto c = memory(l, GateStyle::CZZ, kind == CodeKind::Rotated ? "21" : "24", PauliType::Z, 3);
    const auto dem = build_dem(c, NoiseModel{NoiseKind::SI, 0.001, 1.0});
    const auto dd = decompose_dem(dem);
    EXPECT_TRUE(dd.residue.empty());
    std::set<std::uint32_t> mismatch(dd.observable_mismatches.begin(), dd.observable_mismatches.end());
    for (std::uint32_t ch = 0; ch < dem.channels.size(); ++ch) {
      std::vector<std::uint32_t> dets;
      std::uint64_t obs = 0;
      for (auto e : dd.map[ch]) {
        ASSERT_LE(dd.edges[e].detectors.size(), 2u);
        dets = xor_ids(dets, dd.edges[e].detectors);
        obs ^= dd.edges[e].observables;
      }
      EXPECT_EQ(dets, dem.channels[ch].detectors);
      EXPECT_EQ(obs == dem.channels[ch].observables, !mismatch.count(ch));
      if (dem.channels[ch].detectors.size() <= 2 && dem.channels[ch].hint.empty()) {
        ASSERT_EQ(dd.map[ch].size(), 1u);
        EXPECT_EQ(dd.edges[dd.map[ch][0]].detectors, dem.channels[ch].detectors);
      }
    }
    for (const auto& e : dd.edges) EXPECT_GT(e.p, 0);
  }
}

TEST(Dem, HintsSplitMixedPairs) {
  // a single Y on a data qubit of a two-check code: the X and Z parts are separate edges
  const Layout l(CodeKind::Unrotated, 3);
  const auto c = memory(l, GateStyle::CZ, "default", PauliType::Z, 3);
  const auto dem = build_dem(c, NoiseModel{NoiseKind::SI, 0.001, 1.0});
  const auto dd = decompose_dem(dem);
  std::size_t split = 0;
  for (std::uint32_t ch = 0; ch < dem.channels.size(); ++ch) {
    for (auto e : dd.map[ch]) {
      const auto& dets = dd.edges[e].detectors;
      if (dets.size() == 2) EXPECT_EQ(dem.detector_types[dets[0]], dem.detector_types[dets[1]]);
    }
    split += dem.channels[ch].detectors.size() <= 2 && dd.map[ch].size() > 1;
  }
  EXPECT_GT(split, 0u);
}

TEST(Sample, Trivial) {
  DetectorErrorModel dem;
  dem.num_detectors = 70;
  dem.num_observables = 1;
  dem.channels.push_back({0.0, {1, 65}, 1, {}});
  auto b = sample(dem, 3000, 1);
  for (auto w : b.detectors) EXPECT_EQ(w, 0u);
  for (auto w : b.observables) EXPECT_EQ(w, 0u);
  dem.channels[0].p = 1.0;
  b = sample(dem, 3000, 1);
  for (std::size_t s = 0; s < b.shots; ++s) {
    EXPECT_EQ(b.flagged(s), (std::vector<std::uint32_t>{1, 65}));
    EXPECT_EQ(b.observables[s], 1u);
  }
}

TEST(Sample, Frequencies) {
  DetectorErrorModel dem;
  dem.num_detectors = 4;
  dem.num_observables = 1;
  const std::vector<double> ps = {0.001, 0.01, 0.2, 0.5};
  for (std::uint32_t i = 0; i < 4; ++i) dem.channels.push_back({ps[i], {i}, 0, {}});
  const std::size_t shots = 1000000;
  const auto b = sample(dem, shots, 99, 2);
  for (std::uint32_t i = 0; i < 4; ++i) {
    std::size_t hits = 0;
    for (std::size_t s = 0; s < shots; ++s) hits += b.detector(s, i);
    const double sigma = std::sqrt(ps[i] * (1 - ps[i]) / static_cast<double>(shots));
    EXPECT_NEAR(static_cast<double>(hits) / static_cast<double>(shots), ps[i], 3 * sigma);
  }
}

TEST(Sample, ThreadInvariant) {
  const Layout l(CodeKind::Rotated, 3);
  const auto dem = build_dem(memory(l, GateStyle::CZ, "sewn", PauliType::Z, 3),
                             NoiseModel{NoiseKind::SI, 0.01, 1.0});
  const auto a = sample(dem, 5000, 42, 1);
  const auto b = sample(dem, 5000, 42, 3);
  const auto c = sample(dem, 5000, 43, 1);
  EXPECT_EQ(a.detectors, b.detectors);
  EXPECT_EQ(a.observables, b.observables);
  EXPECT_NE(a.detectors, c.detectors);
}

TEST(DemText, RoundTrip) {
  const Layout l(CodeKind::Unrotated, 3);
  const auto dem = build_dem(memory(l, GateStyle::CZZ, "24", PauliType::X, 3),
                             NoiseModel{NoiseKind::NI, 0.003, 1.0});
  const auto back = parse_dem_text(to_text(dem));
  ASSERT_EQ(back.channels.size(), dem.channels.size());
  EXPECT_EQ(back.num_detectors, dem.num_detectors);
  for (std::size_t i = 0; i < dem.channels.size(); ++i) {
    EXPECT_EQ(back.channels[i].p, dem.channels[i].p);
    EXPECT_EQ(back.channels[i].detectors, dem.channels[i].detectors);
    EXPECT_EQ(back.channels[i].observables, dem.channels[i].observables);
  }
  const auto dd = decompose_dem(dem);
  const auto folded = parse_dem_text(to_text(dem, dd));
  std::set<std::uint32_t> mismatch(dd.observable_mismatches.begin(), dd.observable_mismatches.end());
  for (std::uint32_t i = 0; i < dem.channels.size(); ++i) {
    EXPECT_EQ(folded.channels[i].detectors, dem.channels[i].detectors);
    if (!mismatch.count(i)) EXPECT_EQ(folded.channels[i].observables, dem.channels[i].observables);
  }
  const auto parsed = parse_dem_text("error(0.1) D0 D2 L0\nerror(0.2) D1 ^ D1 D3\n");
  EXPECT_EQ(parsed.num_detectors, 4u);
  EXPECT_EQ(parsed.channels[1].detectors, (std::vector<std::uint32_t>{3}));
  EXPECT_THROW(parse_dem_text("error(0.1) X3\n"), std::invalid_argument);
}

TEST(Batch, FileRoundTrip) {
  DetectorErrorModel dem;
  dem.num_detectors = 77;
  dem.num_observables = 2;
  dem.channels.push_back({0.3, {0, 8, 76}, 2, {}});
  dem.channels.push_back({0.4, {5}, 1, {}});
  const auto b = sample(dem, 1500, 5);
  const std::string dp = ::testing::TempDir() + "ftsurf_det.b8";
  const std::string op = ::testing::TempDir() + "ftsurf_obs.b8";
  write_batch(b, dp, op);
  const auto r = read_batch(dp, op, b.shots, b.num_detectors, b.num_observables);
  EXPECT_EQ(r.detectors, b.detectors);
  EXPECT_EQ(r.observables, b.observables);
  std::remove(dp.c_str());
  std::remove(op.c_str());
}
