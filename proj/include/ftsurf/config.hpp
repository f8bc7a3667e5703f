#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ftsurf/analysis.hpp"

namespace ftsurf {

/// Everything that determines a CLI result. Threads are deliberately absent:
/// they change wall time only.
struct RunConfig {
  std::string subcommand;
  CodeKind kind = CodeKind::Unrotated;
  int d = 3;
  std::vector<int> distances;  // grid subcommands
  PauliType basis = PauliType::Z;
  int rounds = 0;  // 0: d
  GateStyle style = GateStyle::CZ;
  std::string ordering;  // empty: default for the style
  NoiseKind noise = NoiseKind::NI;
  std::vector<double> p;
  double lambda_czz = 1.0;
  std::vector<double> lambdas;
  DecoderMethod method = DecoderMethod::PM;
  int bp_iterations = 0;  // 0: default for d
  std::size_t shots = 0;
  std::uint64_t seed = 0;
  int t = 1;           // verify-ft order
  int w_max = 0;       // verify-ft fault-distance bound, 0: skip
  double target = 0;   // resources: logical error target
  double p_eval = 0;   // resources: evaluation point of the fit
  bool decompose = true;
  std::string figure;  // plot-data
  double p_th = 0;     // plot-data collapse
  double nu = 0;
  std::map<std::string, std::string> outputs;
  std::map<std::string, std::string> inputs;

  /// Canonical single-line JSON, keys sorted.
  std::string to_json() const;
  static RunConfig from_json(const std::string& text);
  /// fnv1a64 of to_json(), as 16 hex digits.
  std::string hash() const;

  /// Memory-run view at distance d and rate p.
  MemoryConfig memory(int distance, double rate, int threads) const;
};

}  // namespace ftsurf
