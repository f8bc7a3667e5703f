#pragma once

#include <cstdint>
#include <vector>

#include "ftsurf/circuit.hpp"

namespace ftsurf {

/// Effect of a fault (or a set of faults) on a noiseless run.
struct FaultSignature {
  std::vector<std::uint32_t> detectors;   // sorted flipped detector ids
  std::uint64_t observables = 0;          // bit k = observable k flipped
  PauliString final_error;                // residual frame on data qubits
  std::vector<std::uint32_t> meas_flips;  // sorted flipped measurement ids

  friend bool operator==(const FaultSignature&, const FaultSignature&) = default;
};

/// Measurement -> detector / observable incidence, built once per circuit.
class DetectorMap {
 public:
  explicit DetectorMap(const Circuit& circuit);

  /// Detector ids flipped by a set of measurement flips (XOR).
  std::vector<std::uint32_t> detectors_of(const std::vector<std::uint32_t>& meas) const;
  std::uint64_t observables_of(const std::vector<std::uint32_t>& meas) const;

  const std::vector<std::vector<std::uint32_t>>& detectors_per_measurement() const { return det_; }
  const std::vector<std::uint64_t>& observables_per_measurement() const { return obs_; }

 private:
  std::vector<std::vector<std::uint32_t>> det_;
  std::vector<std::uint64_t> obs_;
};

/// Forward Pauli-frame propagation of one fault.
FaultSignature propagate_fault(const Circuit& circuit, const ElementaryFault& fault);

/// Joint propagation of a fault path (all faults injected in one run).
FaultSignature propagate_path(const Circuit& circuit, const std::vector<ElementaryFault>& path);

/// One signature per fault, 64 faults per pass. `threads` <= 1 runs inline.
/// Final errors are only filled when `with_final_error` is set.
std::vector<FaultSignature> propagate_faults(const Circuit& circuit,
                                             const std::vector<ElementaryFault>& faults,
                                             bool with_final_error, int threads = 1);

}  // namespace ftsurf
