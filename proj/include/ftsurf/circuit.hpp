#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ftsurf/layout.hpp"
#include "ftsurf/pauli.hpp"

namespace ftsurf {

enum class OpKind : std::uint8_t { H, CZ, CZZ, InitZ, MeasZ, Idle, IdleMI };
enum class GateStyle { CZ, CZZ };

std::string to_string(OpKind k);
std::string to_string(GateStyle s);
GateStyle parse_gate_style(const std::string& s);

struct Instruction {
  OpKind kind;
  std::vector<Qubit> qubits;  // CZ / CZZ: ancilla first, then data in ascending order
  int tick = 0;
};

/// Which data neighbours each entangling timestep of a stabilizer readout touches.
/// slots[t] holds one list per entangling timestep; CZ style uses singletons,
/// CZZ style uses pairs.
struct Ordering {
  std::string name;
  GateStyle style = GateStyle::CZ;
  std::array<std::vector<std::vector<Direction>>, 2> slots;  // indexed by PauliType
  bool known_non_ft = false;

  const std::vector<std::vector<Direction>>& for_type(PauliType t) const {
    return slots[t == PauliType::X ? 0 : 1];
  }
};

/// CZ style: "sewn" (default; X checks S-E-W-N, Z checks S-W-E-N) or an explicit
/// "XXXX/ZZZZ" direction string pair. CZZ style: "21", "22", "24", "25", "ne",
/// "nw" or "ns".
Ordering parse_ordering(GateStyle style, const std::string& name);

struct DetectorInfo {
  std::uint32_t stabilizer = 0;  // index into Layout::stabilizers()
  int round = 0;                 // comparison index t
  PauliType type = PauliType::Z;
};

struct Circuit {
  std::size_t num_qubits = 0;
  std::size_t num_data = 0;
  int num_ticks = 0;
  std::vector<Instruction> instructions;  // sorted by tick
  std::vector<std::uint32_t> measurement_instruction;  // measurement index -> instruction
  std::vector<std::vector<std::uint32_t>> detectors;   // measurement indices per detector
  std::vector<DetectorInfo> detector_info;
  std::vector<std::vector<std::uint32_t>> observables;

  std::size_t num_measurements() const { return measurement_instruction.size(); }
};

struct CircuitOptions {
  PauliType basis = PauliType::Z;
  int rounds = 1;
  GateStyle style = GateStyle::CZ;
  Ordering ordering;
  /// Required to build orderings known to break fault tolerance.
  bool allow_non_ft = false;
  /// Off: data are not reset and the first-round comparisons are dropped.
  bool initialize = true;
  /// Off: no final data readout, no boundary detectors and no observable.
  bool final_measurement = true;
};

/// Memory experiment: data reset (+H for X basis), `rounds` rounds of X- then
/// Z-check readout with each type's ancilla measured during the other type's
/// entangling cycle, and a final data readout.
Circuit build_memory_circuit(const Layout& layout, const CircuitOptions& options);

/// Syndrome-extraction gadget on an unknown code state: no data reset, no final
/// readout, detectors only between consecutive rounds.
Circuit build_gadget_circuit(const Layout& layout, GateStyle style, const Ordering& ordering,
                             int rounds, bool allow_non_ft);

/// Number of gate, reset and measurement instructions (idles excluded).
std::size_t count_fault_locations(const Circuit& circuit);

/// Closed forms for memory circuits with rounds = d.
std::size_t fault_location_formula(CodeKind kind, GateStyle style, int d);

enum class NoiseKind { SI, NI };
std::string to_string(NoiseKind k);
NoiseKind parse_noise_kind(const std::string& s);

struct NoiseModel {
  NoiseKind kind = NoiseKind::NI;
  double p = 0.0;
  double lambda_czz = 1.0;

  /// Channel strength attached to an instruction kind.
  double strength(OpKind k) const;
};

enum class FaultSlot : std::uint8_t { Before, After };

struct ElementaryFault {
  std::uint32_t instruction = 0;
  FaultSlot slot = FaultSlot::After;
  PauliString pauli;
  /// Probability of this realization inside its channel.
  double probability = 0.0;
  /// Total channel strength and qubit count; zero qubits marks a bit-flip channel.
  double channel_strength = 0.0;
  std::uint8_t channel_qubits = 0;

  /// Probability of an independent Bernoulli fault reproducing the channel when
  /// every realization is drawn independently.
  double independent_probability() const;
};

/// One fault per (location, non-identity realization). Zero-strength channels are
/// omitted.
std::vector<ElementaryFault> enumerate_faults(const Circuit& circuit, const NoiseModel& noise);

/// Per-realization probability for which 4^n - 1 independent correlated errors
/// reproduce an n-qubit depolarizing channel of total strength p.
double rescale_depolarizing(double p, int n);

struct DeterminismReport {
  std::vector<std::uint32_t> random_detectors;
  std::vector<std::uint32_t> flipped_detectors;  // deterministic with reference 1
  std::vector<std::uint32_t> random_observables;
  std::vector<std::uint32_t> flipped_observables;

  bool ok() const {
    return random_detectors.empty() && flipped_detectors.empty() &&
           random_observables.empty() && flipped_observables.empty();
  }
};

/// Heisenberg-picture check with sign tracking that every detector and observable
/// has noiseless value 0. Qubits never reset are assumed to start in a +1
/// eigenstate of every stabilizer of `layout`.
DeterminismReport check_determinism(const Circuit& circuit, const Layout& layout);

/// One instruction per line, TICK between timesteps, then DETECTOR and
/// OBSERVABLE(0) lines with absolute rec[] indices. Idles are not written.
std::string to_text(const Circuit& circuit);
/// Inverse of to_text; idle instructions are re-derived.
Circuit parse_circuit_text(const std::string& text, std::size_t num_data);

}  // namespace ftsurf
