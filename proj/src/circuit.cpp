#include "ftsurf/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ftsurf {

std::string to_string(OpKind k) {
  switch (k) {
    case OpKind::H: return "H";
    case OpKind::CZ: return "CZ";
    case OpKind::CZZ: return "CZZ";
    case OpKind::InitZ: return "RZ";
    case OpKind::MeasZ: return "MZ";
    case OpKind::Idle: return "IDLE";
    case OpKind::IdleMI: return "IDLE_MI";
  }
  return "?";
}

std::string to_string(GateStyle s) { return s == GateStyle::CZ ? "cz" : "czz"; }

GateStyle parse_gate_style(const std::string& s) {
  if (s == "cz" || s == "CZ") return GateStyle::CZ;
  if (s == "czz" || s == "CZZ") return GateStyle::CZZ;
  throw std::invalid_argument("unknown gate style '" + s + "'");
}

std::string to_string(NoiseKind k) { return k == NoiseKind::SI ? "SI" : "NI"; }

NoiseKind parse_noise_kind(const std::string& s) {
  if (s == "SI" || s == "si") return NoiseKind::SI;
  if (s == "NI" || s == "ni") return NoiseKind::NI;
  throw std::invalid_argument("unknown noise model '" + s + "'");
}

namespace {

Direction parse_direction(char c) {
  switch (c) {
    case 'N': case 'n': return Direction::N;
    case 'E': case 'e': return Direction::E;
    case 'S': case 's': return Direction::S;
    case 'W': case 'w': return Direction::W;
    default: throw std::invalid_argument(std::string("bad direction '") + c + "'");
  }
}

std::vector<std::vector<Direction>> singletons(const std::string& dirs) {
  if (dirs.size() != 4) throw std::invalid_argument("CZ ordering needs four directions");
  std::vector<std::vector<Direction>> out;
  int seen = 0;
  for (char c : dirs) {
    const Direction d = parse_direction(c);
    seen |= 1 << static_cast<int>(d);
    out.push_back({d});
  }
  if (seen != 0xF) throw std::invalid_argument("CZ ordering must visit N, E, S and W");
  return out;
}

using PairSlots = std::vector<std::vector<Direction>>;
const PairSlots kNE = {{Direction::N, Direction::E}, {Direction::S, Direction::W}};
const PairSlots kNW = {{Direction::N, Direction::W}, {Direction::S, Direction::E}};
const PairSlots kNS = {{Direction::N, Direction::S}, {Direction::E, Direction::W}};

}  // namespace

Ordering parse_ordering(GateStyle style, const std::string& name) {
  Ordering o;
  o.name = name;
  o.style = style;
  if (style == GateStyle::CZ) {
    std::string x = "SEWN";
    std::string z = "SWEN";
    if (name != "sewn" && name != "default") {
      const auto slash = name.find('/');
      if (slash == std::string::npos) {
        throw std::invalid_argument("CZ ordering must be 'sewn' or 'XXXX/ZZZZ', got '" + name + "'");
      }
      x = name.substr(0, slash);
      z = name.substr(slash + 1);
    }
    o.slots[0] = singletons(x);
    o.slots[1] = singletons(z);
    return o;
  }
  // Index 0 is X checks, 1 is Z checks.
  if (name == "21") {
    o.slots = {kNW, kNE};
  } else if (name == "22") {
    o.slots = {kNE, kNW};
  } else if (name == "24" || name == "nw" || name == "NW") {
    o.slots = {kNW, kNW};
  } else if (name == "25" || name == "ne" || name == "NE") {
    o.slots = {kNE, kNE};
  } else if (name == "ns" || name == "NS") {
    o.slots = {kNS, kNS};
    o.known_non_ft = true;
  } else {
    throw std::invalid_argument("unknown CZZ ordering '" + name + "'");
  }
  return o;
}

namespace {

struct PendingInstruction {
  Instruction ins;
  // Measurement tag: stabilizer index and round for ancillas, -1 for data.
  int stab = -2;
  int round = -1;
};

class Builder {
 public:
  Builder(const Layout& layout, bool allow_overlap)
      : layout_(layout), allow_overlap_(allow_overlap) {}

  void add(int tick, OpKind kind, std::vector<Qubit> qubits, int stab = -2, int round = -1) {
    pending_.push_back({Instruction{kind, std::move(qubits), tick}, stab, round});
    max_tick_ = std::max(max_tick_, tick);
  }

  Circuit finish(std::map<std::pair<int, int>, std::uint32_t>& stab_meas,
                 std::map<Qubit, std::uint32_t>& data_meas) {
    std::stable_sort(pending_.begin(), pending_.end(),
                     [](const auto& a, const auto& b) { return a.ins.tick < b.ins.tick; });
    Circuit c;
    c.num_qubits = layout_.num_qubits();
    c.num_data = layout_.num_data();
    c.num_ticks = max_tick_ + 1;

    std::vector<std::vector<int>> busy(c.num_ticks, std::vector<int>(c.num_qubits, 0));
    std::vector<bool> has_mi(c.num_ticks, false);
    for (const auto& p : pending_) {
      for (Qubit q : p.ins.qubits) {
        if (busy[p.ins.tick][q]++) {
          const bool entangling = p.ins.kind == OpKind::CZ || p.ins.kind == OpKind::CZZ;
          if (!(allow_overlap_ && entangling)) {
            throw std::logic_error("qubit scheduled twice in one timestep");
          }
        }
      }
      if (p.ins.kind == OpKind::InitZ || p.ins.kind == OpKind::MeasZ) has_mi[p.ins.tick] = true;
    }
    std::size_t next = 0;
    for (int t = 0; t < c.num_ticks; ++t) {
      for (; next < pending_.size() && pending_[next].ins.tick == t; ++next) {
        const auto& p = pending_[next];
        if (p.ins.kind == OpKind::MeasZ) {
          const auto m = static_cast<std::uint32_t>(c.measurement_instruction.size());
          c.measurement_instruction.push_back(static_cast<std::uint32_t>(c.instructions.size()));
          if (p.stab >= 0) {
            stab_meas[{p.stab, p.round}] = m;
          } else {
            data_meas[p.ins.qubits[0]] = m;
          }
        }
        c.instructions.push_back(p.ins);
      }
      for (Qubit q = 0; q < c.num_qubits; ++q) {
        if (!busy[t][q]) {
          c.instructions.push_back({has_mi[t] ? OpKind::IdleMI : OpKind::Idle, {q}, t});
        }
      }
    }
    return c;
  }

 private:
  const Layout& layout_;
  std::vector<PendingInstruction> pending_;
  int max_tick_ = 0;
  bool allow_overlap_ = false;
};

void add_entangling(Builder& b, const StabilizerDef& s, const Ordering& ordering, int first_tick) {
  const auto& slots = ordering.for_type(s.type);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    std::vector<Qubit> data;
    for (Direction d : slots[i]) {
      if (auto q = s.neighbor(d)) data.push_back(*q);
    }
    std::sort(data.begin(), data.end());
    const int tick = first_tick + static_cast<int>(i);
    if (data.size() == 1) {
      b.add(tick, OpKind::CZ, {s.ancilla, data[0]});
    } else if (data.size() == 2) {
      b.add(tick, OpKind::CZZ, {s.ancilla, data[0], data[1]});
    }
  }
}

void validate_ordering(const Ordering& o, GateStyle style, bool allow_non_ft) {
  if (o.style != style) throw std::invalid_argument("ordering does not match gate style");
  const std::size_t width = style == GateStyle::CZ ? 1 : 2;
  for (const auto& per_type : o.slots) {
    int seen = 0;
    for (const auto& slot : per_type) {
      if (slot.size() != width) throw std::invalid_argument("ordering slot has wrong width");
      for (Direction d : slot) seen |= 1 << static_cast<int>(d);
    }
    if (seen != 0xF) throw std::invalid_argument("ordering must cover all four neighbours");
  }
  if (o.known_non_ft && !allow_non_ft) {
    throw std::invalid_argument("ordering '" + o.name +
                                "' is known not to be fault-tolerant; pass the allow-non-ft flag");
  }
}

Circuit build(const Layout& layout, const CircuitOptions& opt) {
  if (opt.rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  validate_ordering(opt.ordering, opt.style, opt.allow_non_ft);
  const int e = static_cast<int>(opt.ordering.for_type(PauliType::X).size());
  const auto& stabs = layout.stabilizers();
  std::vector<Qubit> data(layout.num_data());
  for (Qubit q = 0; q < data.size(); ++q) data[q] = q;
  std::vector<int> x_stabs;
  std::vector<int> z_stabs;
  for (int i = 0; i < static_cast<int>(stabs.size()); ++i) {
    (stabs[i].type == PauliType::X ? x_stabs : z_stabs).push_back(i);
  }
  const bool x_basis = opt.basis == PauliType::X;

  // Pairings with clashing neighbours put two commuting gates on one data qubit
  // in the same timestep; they act in instruction order.
  Builder b(layout, opt.ordering.known_non_ft);
  auto for_each = [&](const std::vector<int>& ids, OpKind k, int tick, int round = -1) {
    for (int i : ids) {
      if (k == OpKind::MeasZ) {
        b.add(tick, k, {stabs[i].ancilla}, i, round);
      } else {
        b.add(tick, k, {stabs[i].ancilla});
      }
    }
  };
  auto data_op = [&](OpKind k, int tick) {
    for (Qubit q : data) b.add(tick, k, {q}, -1, -1);
  };

  int tick = 0;
  if (opt.initialize) data_op(OpKind::InitZ, tick);
  for_each(x_stabs, OpKind::InitZ, tick);
  for_each(z_stabs, OpKind::InitZ, tick);
  ++tick;

  for (int r = 0; r < opt.rounds; ++r) {
    const bool last = r == opt.rounds - 1;
    // Open the X cycle; close the previous Z cycle.
    for_each(x_stabs, OpKind::H, tick);
    if (!(r == 0 && x_basis && opt.initialize)) data_op(OpKind::H, tick);
    if (r > 0) for_each(z_stabs, OpKind::H, tick);
    ++tick;
    const int x_first = tick;
    for (int i : x_stabs) add_entangling(b, stabs[i], opt.ordering, x_first);
    if (r > 0) {
      for_each(z_stabs, OpKind::MeasZ, x_first, r - 1);
      for_each(z_stabs, OpKind::InitZ, x_first + 1);
    }
    tick += e;
    // Close the X cycle; open the Z cycle.
    for_each(x_stabs, OpKind::H, tick);
    data_op(OpKind::H, tick);
    for_each(z_stabs, OpKind::H, tick);
    ++tick;
    const int z_first = tick;
    for (int i : z_stabs) add_entangling(b, stabs[i], opt.ordering, z_first);
    for_each(x_stabs, OpKind::MeasZ, z_first, r);
    if (!last) for_each(x_stabs, OpKind::InitZ, z_first + 1);
    tick += e;
  }
  for_each(z_stabs, OpKind::H, tick);
  if (x_basis && opt.final_measurement) data_op(OpKind::H, tick);
  ++tick;
  for_each(z_stabs, OpKind::MeasZ, tick, opt.rounds - 1);
  if (opt.final_measurement) data_op(OpKind::MeasZ, tick);

  std::map<std::pair<int, int>, std::uint32_t> stab_meas;
  std::map<Qubit, std::uint32_t> data_meas;
  Circuit c = b.finish(stab_meas, data_meas);

  const int rounds = opt.rounds;
  for (int t = 0; t <= rounds; ++t) {
    for (int i = 0; i < static_cast<int>(stabs.size()); ++i) {
      const bool same_type = stabs[i].type == opt.basis;
      std::vector<std::uint32_t> recs;
      if (t >= 1 && t <= rounds - 1) {
        recs = {stab_meas.at({i, t - 1}), stab_meas.at({i, t})};
      } else if (t == 0 && same_type && opt.initialize) {
        recs = {stab_meas.at({i, 0})};
      } else if (t == rounds && same_type && opt.final_measurement) {
        recs = {stab_meas.at({i, rounds - 1})};
        for (Qubit q : stabs[i].data()) recs.push_back(data_meas.at(q));
      } else {
        continue;
      }
      std::sort(recs.begin(), recs.end());
      c.detectors.push_back(std::move(recs));
      c.detector_info.push_back({static_cast<std::uint32_t>(i), t, stabs[i].type});
    }
  }
  if (opt.final_measurement) {
    std::vector<std::uint32_t> obs;
    const auto& l = layout.logical(opt.basis);
    for (Qubit q : l.support()) obs.push_back(data_meas.at(q));
    std::sort(obs.begin(), obs.end());
    c.observables.push_back(std::move(obs));
  }
  return c;
}

}  // namespace

Circuit build_memory_circuit(const Layout& layout, const CircuitOptions& options) {
  return build(layout, options);
}

Circuit build_gadget_circuit(const Layout& layout, GateStyle style, const Ordering& ordering,
                             int rounds, bool allow_non_ft) {
  CircuitOptions opt;
  opt.basis = PauliType::Z;
  opt.rounds = rounds;
  opt.style = style;
  opt.ordering = ordering;
  opt.allow_non_ft = allow_non_ft;
  opt.initialize = false;
  opt.final_measurement = false;
  return build(layout, opt);
}

std::size_t count_fault_locations(const Circuit& circuit) {
  return static_cast<std::size_t>(
      std::count_if(circuit.instructions.begin(), circuit.instructions.end(), [](const auto& i) {
        return i.kind != OpKind::Idle && i.kind != OpKind::IdleMI;
      }));
}

std::size_t fault_location_formula(CodeKind kind, GateStyle style, int d) {
  const long long n = d;
  long long v = 0;
  if (kind == CodeKind::Rotated) {
    v = style == GateStyle::CZ ? 10 * n * n * n - 2 * n * n - 4 * n : 8 * n * n * n - 4 * n;
  } else {
    v = style == GateStyle::CZ ? 20 * n * n * n - 20 * n * n + 2 * n + 2
                               : 16 * n * n * n - 12 * n * n - 2 * n + 2;
  }
  return static_cast<std::size_t>(v);
}

double NoiseModel::strength(OpKind k) const {
  switch (k) {
    case OpKind::CZ: return p;
    case OpKind::CZZ: return lambda_czz * p;
    case OpKind::H: return p / 10;
    case OpKind::InitZ: return 2 * p;
    case OpKind::MeasZ: return 5 * p;
    case OpKind::Idle:
    case OpKind::IdleMI: return kind == NoiseKind::SI ? p / 10 : 0.0;
  }
  return 0.0;
}

double rescale_depolarizing(double p, int n) {
  if (n < 1) throw std::invalid_argument("qubit count must be positive");
  const double four_n = std::pow(4.0, n);
  const double max_p = (four_n - 1) / four_n;
  if (p < 0 || p > max_p + 1e-15) {
    throw std::invalid_argument("depolarizing strength outside [0, (4^n-1)/4^n]");
  }
  const double radicand = std::max(0.0, 1.0 - four_n / (four_n - 1) * p);
  return 0.5 - 0.5 * std::pow(radicand, std::pow(2.0, 1 - 2 * n));
}

double ElementaryFault::independent_probability() const {
  if (channel_qubits == 0) return probability;
  return rescale_depolarizing(channel_strength, channel_qubits);
}

std::vector<ElementaryFault> enumerate_faults(const Circuit& circuit, const NoiseModel& noise) {
  std::vector<ElementaryFault> out;
  for (std::uint32_t i = 0; i < circuit.instructions.size(); ++i) {
    const auto& ins = circuit.instructions[i];
    const double s = noise.strength(ins.kind);
    if (s <= 0) continue;
    if (ins.kind == OpKind::InitZ || ins.kind == OpKind::MeasZ) {
      ElementaryFault f;
      f.instruction = i;
      f.slot = ins.kind == OpKind::InitZ ? FaultSlot::After : FaultSlot::Before;
      f.pauli = PauliString::x(ins.qubits[0]);
      f.probability = s;
      f.channel_strength = s;
      f.channel_qubits = 0;
      out.push_back(std::move(f));
      continue;
    }
    const auto n = static_cast<int>(ins.qubits.size());
    const int realizations = (1 << (2 * n)) - 1;
    for (int code = 1; code <= realizations; ++code) {
      std::vector<Qubit> xs;
      std::vector<Qubit> zs;
      for (int k = 0; k < n; ++k) {
        const int pk = (code >> (2 * k)) & 3;  // 1 = X, 2 = Z, 3 = Y
        if (pk & 1) xs.push_back(ins.qubits[k]);
        if (pk & 2) zs.push_back(ins.qubits[k]);
      }
      ElementaryFault f;
      f.instruction = i;
      f.slot = FaultSlot::After;
      f.pauli = PauliString(std::move(xs), std::move(zs));
      f.probability = s / realizations;
      f.channel_strength = s;
      f.channel_qubits = static_cast<std::uint8_t>(n);
      out.push_back(std::move(f));
    }
  }
  return out;
}

namespace {

// i^phase * X^x Z^z over all qubits.
struct SignedPauli {
  std::vector<std::uint8_t> x;
  std::vector<std::uint8_t> z;
  int phase = 0;

  explicit SignedPauli(std::size_t n) : x(n, 0), z(n, 0) {}

  // Right-multiplies by the phase-free X^bx Z^bz supported on `qs`.
  void mul_local(const std::vector<Qubit>& qs, const std::vector<std::uint8_t>& bx,
                 const std::vector<std::uint8_t>& bz) {
    int flips = 0;
    for (std::size_t k = 0; k < qs.size(); ++k) flips += z[qs[k]] & bx[k];
    phase = (phase + 2 * flips) & 3;
    for (std::size_t k = 0; k < qs.size(); ++k) {
      x[qs[k]] ^= bx[k];
      z[qs[k]] ^= bz[k];
    }
  }
};

// Conjugates in place by a self-inverse Clifford acting on `qs`.
void conjugate_signed(SignedPauli& p, OpKind kind, const std::vector<Qubit>& qs) {
  const std::size_t n = qs.size();
  std::vector<std::uint8_t> lx(n);
  std::vector<std::uint8_t> lz(n);
  for (std::size_t k = 0; k < n; ++k) {
    lx[k] = p.x[qs[k]];
    lz[k] = p.z[qs[k]];
    p.x[qs[k]] = 0;
    p.z[qs[k]] = 0;
  }
  // Images of X_k and Z_k; all are phase-free in X-before-Z order.
  auto image = [&](bool is_x, std::size_t k, std::vector<std::uint8_t>& bx,
                   std::vector<std::uint8_t>& bz) {
    bx.assign(n, 0);
    bz.assign(n, 0);
    if (kind == OpKind::H) {
      (is_x ? bz : bx)[k] = 1;
      return;
    }
    if (!is_x) {
      bz[k] = 1;
      return;
    }
    bx[k] = 1;
    if (k == 0) {
      for (std::size_t j = 1; j < n; ++j) bz[j] = 1;
    } else {
      bz[0] = 1;
    }
  };
  std::vector<std::uint8_t> bx;
  std::vector<std::uint8_t> bz;
  for (std::size_t k = 0; k < n; ++k) {
    if (lx[k]) {
      image(true, k, bx, bz);
      p.mul_local(qs, bx, bz);
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (lz[k]) {
      image(false, k, bx, bz);
      p.mul_local(qs, bx, bz);
    }
  }
}

// 0: deterministic value 0, 1: deterministic value 1, -1: random.
int evaluate(const Circuit& c, const Layout& layout, const std::vector<std::uint32_t>& recs) {
  if (recs.empty()) return 0;
  std::vector<std::uint8_t> in_set(c.num_measurements(), 0);
  for (auto m : recs) in_set[m] ^= 1;
  std::vector<int> meas_of(c.instructions.size(), -1);
  for (std::uint32_t m = 0; m < c.num_measurements(); ++m) meas_of[c.measurement_instruction[m]] = static_cast<int>(m);
  const std::uint32_t last = c.measurement_instruction[*std::max_element(recs.begin(), recs.end())];

  SignedPauli p(c.num_qubits);
  std::vector<std::uint8_t> reset_seen(c.num_qubits, 0);
  for (std::int64_t i = last; i >= 0; --i) {
    const auto& ins = c.instructions[static_cast<std::size_t>(i)];
    switch (ins.kind) {
      case OpKind::MeasZ: {
        const Qubit q = ins.qubits[0];
        if (p.x[q]) return -1;
        if (in_set[static_cast<std::size_t>(meas_of[static_cast<std::size_t>(i)])]) p.z[q] ^= 1;
        break;
      }
      case OpKind::InitZ: {
        const Qubit q = ins.qubits[0];
        if (p.x[q]) return -1;
        p.z[q] = 0;
        reset_seen[q] = 1;
        break;
      }
      case OpKind::H:
      case OpKind::CZ:
      case OpKind::CZZ:
        conjugate_signed(p, ins.kind, ins.qubits);
        break;
      default:
        break;
    }
  }
  // Whatever survives must act on never-reset data as a stabilizer element.
  std::vector<Qubit> xs;
  std::vector<Qubit> zs;
  for (Qubit q = 0; q < c.num_qubits; ++q) {
    if (!p.x[q] && !p.z[q]) continue;
    if (!layout.is_data(q)) return -1;
    if (p.x[q]) xs.push_back(q);
    if (p.z[q]) zs.push_back(q);
  }
  if (!xs.empty() || !zs.empty()) {
    if (!layout.in_stabilizer_group(PauliString(xs, zs))) return -1;
  }
  if (p.phase % 2 != 0) return -1;
  return p.phase == 0 ? 0 : 1;
}

}  // namespace

DeterminismReport check_determinism(const Circuit& circuit, const Layout& layout) {
  DeterminismReport r;
  for (std::uint32_t i = 0; i < circuit.detectors.size(); ++i) {
    const int v = evaluate(circuit, layout, circuit.detectors[i]);
    if (v < 0) r.random_detectors.push_back(i);
    if (v == 1) r.flipped_detectors.push_back(i);
  }
  for (std::uint32_t i = 0; i < circuit.observables.size(); ++i) {
    const int v = evaluate(circuit, layout, circuit.observables[i]);
    if (v < 0) r.random_observables.push_back(i);
    if (v == 1) r.flipped_observables.push_back(i);
  }
  return r;
}

std::string to_text(const Circuit& circuit) {
  std::ostringstream os;
  std::size_t i = 0;
  const auto& ins = circuit.instructions;
  for (int t = 0; t < circuit.num_ticks; ++t) {
    if (t > 0) os << "TICK\n";
    std::vector<Qubit> resets;
    std::vector<Qubit> hs;
    std::vector<Qubit> meas;
    std::vector<std::string> gates;
    for (; i < ins.size() && ins[i].tick == t; ++i) {
      const auto& in = ins[i];
      switch (in.kind) {
        case OpKind::InitZ: resets.push_back(in.qubits[0]); break;
        case OpKind::H: hs.push_back(in.qubits[0]); break;
        case OpKind::MeasZ: meas.push_back(in.qubits[0]); break;
        case OpKind::CZ:
        case OpKind::CZZ: {
          std::string line = to_string(in.kind);
          for (Qubit q : in.qubits) line += " " + std::to_string(q);
          gates.push_back(std::move(line));
          break;
        }
        default: break;
      }
    }
    auto list = [&](const char* name, const std::vector<Qubit>& qs) {
      if (qs.empty()) return;
      os << name;
      for (Qubit q : qs) os << ' ' << q;
      os << '\n';
    };
    list("RZ", resets);
    list("H", hs);
    for (const auto& g : gates) os << g << '\n';
    list("MZ", meas);
  }
  for (const auto& d : circuit.detectors) {
    os << "DETECTOR";
    for (auto m : d) os << " rec[" << m << ']';
    os << '\n';
  }
  for (std::size_t k = 0; k < circuit.observables.size(); ++k) {
    os << "OBSERVABLE(" << k << ")";
    for (auto m : circuit.observables[k]) os << " rec[" << m << ']';
    os << '\n';
  }
  return os.str();
}

Circuit parse_circuit_text(const std::string& text, std::size_t num_data) {
  Circuit c;
  c.num_data = num_data;
  std::istringstream is(text);
  std::string line;
  int tick = 0;
  std::vector<Instruction> raw;
  std::size_t max_q = 0;
  auto parse_recs = [](std::istringstream& ls) {
    std::vector<std::uint32_t> recs;
    std::string tok;
    while (ls >> tok) {
      if (tok.rfind("rec[", 0) != 0 || tok.back() != ']') {
        throw std::invalid_argument("bad rec target '" + tok + "'");
      }
      recs.push_back(static_cast<std::uint32_t>(std::stoul(tok.substr(4, tok.size() - 5))));
    }
    return recs;
  };
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string op;
    ls >> op;
    if (op == "TICK") {
      ++tick;
      continue;
    }
    if (op == "DETECTOR") {
      c.detectors.push_back(parse_recs(ls));
      continue;
    }
    if (op.rfind("OBSERVABLE", 0) == 0) {
      c.observables.push_back(parse_recs(ls));
      continue;
    }
    std::vector<Qubit> qs;
    Qubit q = 0;
    while (ls >> q) {
      qs.push_back(q);
      max_q = std::max<std::size_t>(max_q, q);
    }
    if (op == "RZ" || op == "H" || op == "MZ") {
      const OpKind k = op == "RZ" ? OpKind::InitZ : op == "H" ? OpKind::H : OpKind::MeasZ;
      for (Qubit t : qs) raw.push_back({k, {t}, tick});
    } else if (op == "CZ" && qs.size() == 2) {
      raw.push_back({OpKind::CZ, qs, tick});
    } else if (op == "CZZ" && qs.size() == 3) {
      raw.push_back({OpKind::CZZ, qs, tick});
    } else {
      throw std::invalid_argument("cannot parse circuit line '" + line + "'");
    }
  }
  c.num_qubits = max_q + 1;
  c.num_ticks = tick + 1;
  std::vector<std::vector<int>> busy(c.num_ticks, std::vector<int>(c.num_qubits, 0));
  std::vector<bool> has_mi(c.num_ticks, false);
  for (const auto& in : raw) {
    for (Qubit q : in.qubits) busy[in.tick][q] = 1;
    if (in.kind == OpKind::InitZ || in.kind == OpKind::MeasZ) has_mi[in.tick] = true;
  }
  std::size_t next = 0;
  for (int t = 0; t < c.num_ticks; ++t) {
    for (; next < raw.size() && raw[next].tick == t; ++next) {
      if (raw[next].kind == OpKind::MeasZ) {
        c.measurement_instruction.push_back(static_cast<std::uint32_t>(c.instructions.size()));
      }
      c.instructions.push_back(raw[next]);
    }
    for (Qubit q = 0; q < c.num_qubits; ++q) {
      if (!busy[t][q]) c.instructions.push_back({has_mi[t] ? OpKind::IdleMI : OpKind::Idle, {q}, t});
    }
  }
  c.detector_info.resize(c.detectors.size());
  return c;
}

}  // namespace ftsurf
