#include "ftsurf/frame.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ftsurf/parallel.hpp"

namespace ftsurf {

int default_threads() {
  if (const char* env = std::getenv("FTSURF_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

DetectorMap::DetectorMap(const Circuit& circuit)
    : det_(circuit.num_measurements()), obs_(circuit.num_measurements(), 0) {
  if (circuit.observables.size() > 64) throw std::invalid_argument("at most 64 observables supported");
  for (std::uint32_t d = 0; d < circuit.detectors.size(); ++d) {
    for (auto m : circuit.detectors[d]) det_.at(m).push_back(d);
  }
  for (std::size_t k = 0; k < circuit.observables.size(); ++k) {
    for (auto m : circuit.observables[k]) obs_.at(m) ^= std::uint64_t{1} << k;
  }
}

std::vector<std::uint32_t> DetectorMap::detectors_of(const std::vector<std::uint32_t>& meas) const {
  std::vector<std::uint32_t> out;
  for (auto m : meas) out.insert(out.end(), det_[m].begin(), det_[m].end());
  std::sort(out.begin(), out.end());
  // keep ids with odd multiplicity
  std::vector<std::uint32_t> odd;
  for (std::size_t i = 0; i < out.size();) {
    std::size_t j = i;
    while (j < out.size() && out[j] == out[i]) ++j;
    if ((j - i) % 2) odd.push_back(out[i]);
    i = j;
  }
  return odd;
}

std::uint64_t DetectorMap::observables_of(const std::vector<std::uint32_t>& meas) const {
  std::uint64_t o = 0;
  for (auto m : meas) o ^= obs_[m];
  return o;
}

namespace {

std::vector<int> measurement_of_instruction(const Circuit& c) {
  std::vector<int> out(c.instructions.size(), -1);
  for (std::uint32_t m = 0; m < c.num_measurements(); ++m) {
    out[c.measurement_instruction[m]] = static_cast<int>(m);
  }
  return out;
}

template <class Word>
void apply(const Instruction& ins, std::vector<Word>& x, std::vector<Word>& z, std::vector<Word>& meas,
           int m) {
  const auto& q = ins.qubits;
  switch (ins.kind) {
    case OpKind::H:
      std::swap(x[q[0]], z[q[0]]);
      break;
    case OpKind::CZ:
      z[q[0]] ^= x[q[1]];
      z[q[1]] ^= x[q[0]];
      break;
    case OpKind::CZZ:
      z[q[0]] ^= x[q[1]] ^ x[q[2]];
      z[q[1]] ^= x[q[0]];
      z[q[2]] ^= x[q[0]];
      break;
    case OpKind::MeasZ:
      meas[static_cast<std::size_t>(m)] = x[q[0]];
      z[q[0]] = 0;
      break;
    case OpKind::InitZ:
      x[q[0]] = 0;
      z[q[0]] = 0;
      break;
    case OpKind::Idle:
    case OpKind::IdleMI:
      break;
  }
}

template <class Word>
void inject(const PauliString& p, Word bit, std::vector<Word>& x, std::vector<Word>& z) {
  for (Qubit q : p.x_support()) x.at(q) ^= bit;
  for (Qubit q : p.z_support()) z.at(q) ^= bit;
}

bool fault_less(const ElementaryFault& a, const ElementaryFault& b) {
  if (a.instruction != b.instruction) return a.instruction < b.instruction;
  return a.slot == FaultSlot::Before && b.slot == FaultSlot::After;
}

}  // namespace

FaultSignature propagate_path(const Circuit& circuit, const std::vector<ElementaryFault>& path) {
  FaultSignature sig;
  if (path.empty()) return sig;
  std::vector<ElementaryFault> sorted = path;
  std::stable_sort(sorted.begin(), sorted.end(), fault_less);
  for (const auto& f : sorted) {
    if (f.instruction >= circuit.instructions.size()) {
      throw std::invalid_argument("fault location outside the circuit");
    }
  }
  const auto meas_of = measurement_of_instruction(circuit);
  std::vector<std::uint8_t> x(circuit.num_qubits, 0);
  std::vector<std::uint8_t> z(circuit.num_qubits, 0);
  std::vector<std::uint8_t> meas(circuit.num_measurements(), 0);
  std::size_t next = 0;
  for (std::size_t i = sorted.front().instruction; i < circuit.instructions.size(); ++i) {
    for (; next < sorted.size() && sorted[next].instruction == i && sorted[next].slot == FaultSlot::Before;
         ++next) {
      inject<std::uint8_t>(sorted[next].pauli, 1, x, z);
    }
    apply(circuit.instructions[i], x, z, meas, meas_of[i]);
    for (; next < sorted.size() && sorted[next].instruction == i; ++next) {
      inject<std::uint8_t>(sorted[next].pauli, 1, x, z);
    }
  }
  for (std::uint32_t m = 0; m < meas.size(); ++m) {
    if (meas[m]) sig.meas_flips.push_back(m);
  }
  const DetectorMap map(circuit);
  sig.detectors = map.detectors_of(sig.meas_flips);
  sig.observables = map.observables_of(sig.meas_flips);
  std::vector<Qubit> xs;
  std::vector<Qubit> zs;
  for (Qubit q = 0; q < circuit.num_data; ++q) {
    if (x[q]) xs.push_back(q);
    if (z[q]) zs.push_back(q);
  }
  sig.final_error = PauliString(std::move(xs), std::move(zs));
  return sig;
}

FaultSignature propagate_fault(const Circuit& circuit, const ElementaryFault& fault) {
  return propagate_path(circuit, {fault});
}

std::vector<FaultSignature> propagate_faults(const Circuit& circuit,
                                             const std::vector<ElementaryFault>& faults,
                                             bool with_final_error, int threads) {
  std::vector<std::size_t> order(faults.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return fault_less(faults[a], faults[b]); });
  for (const auto& f : faults) {
    if (f.instruction >= circuit.instructions.size()) {
      throw std::invalid_argument("fault location outside the circuit");
    }
  }
  const auto meas_of = measurement_of_instruction(circuit);
  const DetectorMap map(circuit);
  std::vector<FaultSignature> out(faults.size());
  const std::size_t chunks = (faults.size() + 63) / 64;

  parallel_for(chunks, threads, [&](std::size_t chunk) {
    const std::size_t begin = chunk * 64;
    const std::size_t end = std::min(faults.size(), begin + 64);
    std::vector<std::uint64_t> x(circuit.num_qubits, 0);
    std::vector<std::uint64_t> z(circuit.num_qubits, 0);
    std::vector<std::uint64_t> meas(circuit.num_measurements(), 0);
    std::size_t next = begin;
    for (std::size_t i = faults[order[begin]].instruction; i < circuit.instructions.size(); ++i) {
      for (; next < end && faults[order[next]].instruction == i &&
             faults[order[next]].slot == FaultSlot::Before;
           ++next) {
        inject(faults[order[next]].pauli, std::uint64_t{1} << (next - begin), x, z);
      }
      apply(circuit.instructions[i], x, z, meas, meas_of[i]);
      for (; next < end && faults[order[next]].instruction == i; ++next) {
        inject(faults[order[next]].pauli, std::uint64_t{1} << (next - begin), x, z);
      }
    }
    for (std::uint32_t m = 0; m < meas.size(); ++m) {
      for (std::uint64_t w = meas[m]; w; w &= w - 1) {
        out[order[begin + static_cast<std::size_t>(std::countr_zero(w))]].meas_flips.push_back(m);
      }
    }
    for (std::uint32_t d = 0; d < circuit.detectors.size(); ++d) {
      std::uint64_t w = 0;
      for (auto m : circuit.detectors[d]) w ^= meas[m];
      for (; w; w &= w - 1) {
        out[order[begin + static_cast<std::size_t>(std::countr_zero(w))]].detectors.push_back(d);
      }
    }
    for (std::size_t k = 0; k < circuit.observables.size(); ++k) {
      std::uint64_t w = 0;
      for (auto m : circuit.observables[k]) w ^= meas[m];
      for (; w; w &= w - 1) {
        out[order[begin + static_cast<std::size_t>(std::countr_zero(w))]].observables |= std::uint64_t{1} << k;
      }
    }
    if (with_final_error) {
      std::vector<std::vector<Qubit>> xs(end - begin);
      std::vector<std::vector<Qubit>> zs(end - begin);
      for (Qubit q = 0; q < circuit.num_data; ++q) {
        for (std::uint64_t w = x[q]; w; w &= w - 1) xs[static_cast<std::size_t>(std::countr_zero(w))].push_back(q);
        for (std::uint64_t w = z[q]; w; w &= w - 1) zs[static_cast<std::size_t>(std::countr_zero(w))].push_back(q);
      }
      for (std::size_t lane = 0; lane < end - begin; ++lane) {
        out[order[begin + lane]].final_error = PauliString(std::move(xs[lane]), std::move(zs[lane]));
      }
    }
  });
  return out;
}

}  // namespace ftsurf
