#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ftsurf/circuit.hpp"
#include "ftsurf/layout.hpp"

namespace ftsurf {

enum class DecoderMethod { PM, BM };
std::string to_string(DecoderMethod m);
DecoderMethod parse_decoder_method(const std::string& s);

/// "sewn" for CZ, "24" for CZZ.
std::string default_ordering(GateStyle style);
/// Smallest even count >= d.
int default_bp_iterations(int d);

struct MemoryConfig {
  CodeKind kind = CodeKind::Unrotated;
  int d = 3;
  int rounds = 0;  // 0: d rounds
  GateStyle style = GateStyle::CZ;
  std::string ordering;  // empty: default_ordering(style)
  NoiseKind noise = NoiseKind::NI;
  double p = 0.0;
  double lambda_czz = 1.0;
  PauliType basis = PauliType::Z;
  DecoderMethod method = DecoderMethod::PM;
  int bp_iterations = 0;  // 0: default_bp_iterations(d)
  std::size_t shots = 1000;
  std::uint64_t seed = 0;
  int threads = 1;

  /// Defaults filled in.
  MemoryConfig resolved() const;
  /// Every result-affecting field in a fixed order; threads excluded.
  std::string canonical() const;
  std::uint64_t hash() const;
};

struct MemoryResult {
  MemoryConfig config;
  std::size_t shots = 0;
  std::size_t failures = 0;
  /// Shots whose syndrome the matcher could not pair (counted as failures).
  std::size_t decode_errors = 0;

  double rate() const { return shots ? static_cast<double>(failures) / static_cast<double>(shots) : 0.0; }
  double standard_error() const;
  /// Failures = 3 rule when nothing failed, otherwise the rate.
  double upper_bound_95() const;
};

/// Shots per sampling chunk; chunk seeds depend only on (seed, config hash, chunk).
inline constexpr std::size_t kMemoryChunk = 32 * 1024;

MemoryResult run_memory(const MemoryConfig& config);

std::string memory_csv_header();
std::string to_csv_row(const MemoryResult& r);

/// Both bases, combined assuming independent X and Z failures.
double combine_xz(double p_x, double p_z);

struct CombinedResult {
  MemoryResult x;
  MemoryResult z;
  double p_L = 0.0;
  double error = 0.0;
};

/// The config run in both bases (its own basis field is ignored).
CombinedResult run_both_bases(const MemoryConfig& config);

struct SlopeFit {
  double slope = 0.0;
  double slope_error = 0.0;
  double intercept = 0.0;  // of log p_L at log p = 0
};

/// Least squares of log p_L against log p.
SlopeFit fit_scaling_exponent(const std::vector<std::pair<double, double>>& points);

struct ThresholdPoint {
  double p = 0.0;
  double p_L = 0.0;
  double error = 0.0;
};

struct ThresholdCurve {
  int d = 0;
  std::vector<ThresholdPoint> points;
};

struct ThresholdOptions {
  int bootstrap = 100;
  std::uint64_t seed = 1;
  int master_order = 2;
};

struct ThresholdFit {
  double p_th = 0.0;
  double nu = 0.0;
  double p_th_error = 0.0;
  double nu_error = 0.0;
  double residual = 0.0;
  int master_order = 2;
  bool converged = false;
  bool boundary_pinned = false;
  std::vector<double> master;  // polynomial coefficients, constant first
};

/// Weighted collapse residual for given (p_th, nu) with the master polynomial
/// refitted; coefficients written to `master` when non-null.
double collapse_residual(const std::vector<ThresholdCurve>& curves, double p_th, double nu, int order,
                         std::vector<double>* master = nullptr);

ThresholdFit fit_threshold(const std::vector<ThresholdCurve>& curves, const ThresholdOptions& options = {});

/// Combined-basis runs over distances x error rates; `each` sees every point as
/// it finishes. Curves come back in the order of `distances`.
std::vector<ThresholdCurve> run_threshold_grid(const MemoryConfig& base, const std::vector<int>& distances,
                                               const std::vector<double>& rates,
                                               const std::function<void(const CombinedResult&)>& each = {});

struct ResourcePoint {
  double n = 0.0;  // physical qubits
  double p_L = 0.0;
  double error = 0.0;  // optional; zero gives unit weight in log space
};

struct ResourceFit {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double p = 0.0;
  /// Covariance of (log c0, c2 log(p/c1)) from the linear fit.
  double cov[2][2] = {{0, 0}, {0, 0}};
  double residual = 0.0;

  double predict(double n) const;
};

/// log p_L = log c0 + c2 sqrt(n) log(p / c1). c1 and c2 are only separable with
/// fits at several p; a single-p fit fixes c2 by `c2_hint` (or 1/3 when zero).
ResourceFit fit_resource_curve(const std::vector<ResourcePoint>& points, double p, double c2_hint = 0.0);

/// Joint fit over several physical error rates, sharing c0, c1 and c2.
ResourceFit fit_resource_surface(const std::vector<std::pair<double, std::vector<ResourcePoint>>>& data);

struct QubitTarget {
  int d = 0;
  std::size_t n = 0;
  bool reachable = false;
};

/// Smallest odd distance whose qubit count reaches the target under the fit.
QubitTarget qubits_to_target(const ResourceFit& fit, double p_L_target, CodeKind kind, int d_max = 101);

struct LambdaRow {
  double lambda = 0.0;
  double p_L = 0.0;
  double error = 0.0;
  std::size_t failures = 0;
  std::size_t shots = 0;
};

struct LambdaSweep {
  LambdaRow baseline;  // CZ style at the same p
  std::vector<LambdaRow> rows;
  /// Interpolated lambda where the CZZ rate reaches the baseline; negative if never.
  double crossing = -1.0;
};

/// CZZ runs at each lambda (both bases combined) against the CZ baseline. The
/// seed is shared across lambda values.
LambdaSweep lambda_sweep(const MemoryConfig& base, const std::vector<double>& lambdas);

std::uint64_t fnv1a64(const std::string& s);

}  // namespace ftsurf
