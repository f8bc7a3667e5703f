#include "ftsurf/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "ftsurf/decoder.hpp"
#include "ftsurf/dem.hpp"
#include "ftsurf/parallel.hpp"

namespace ftsurf {

std::string to_string(DecoderMethod m) { return m == DecoderMethod::PM ? "pm" : "bm"; }

DecoderMethod parse_decoder_method(const std::string& s) {
  if (s == "pm") return DecoderMethod::PM;
  if (s == "bm") return DecoderMethod::BM;
  throw std::invalid_argument("decoder method must be pm or bm, got '" + s + "'");
}

std::string default_ordering(GateStyle style) { return style == GateStyle::CZ ? "sewn" : "24"; }

int default_bp_iterations(int d) { return d + (d % 2); }

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

MemoryConfig MemoryConfig::resolved() const {
  MemoryConfig c = *this;
  if (c.rounds == 0) c.rounds = c.d;
  if (c.ordering.empty() || c.ordering == "default") c.ordering = default_ordering(c.style);
  if (c.bp_iterations == 0) c.bp_iterations = default_bp_iterations(c.d);
  if (c.method == DecoderMethod::PM) c.bp_iterations = 0;
  if (c.style == GateStyle::CZ) c.lambda_czz = 1.0;
  return c;
}

namespace {

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Stream identity: everything except shots, threads and lambda, so that longer
// runs extend shorter ones and lambda sweeps share samples where they can.
std::string stream_key(const MemoryConfig& c) {
  std::ostringstream out;
  out << to_string(c.kind) << '|' << c.d << '|' << c.rounds << '|' << to_string(c.style) << '|' << c.ordering
      << '|' << to_string(c.noise) << '|' << fmt_double(c.p) << '|' << to_string(c.basis);
  return out.str();
}

}  // namespace

std::string MemoryConfig::canonical() const {
  const auto c = resolved();
  std::ostringstream out;
  out << stream_key(c) << '|' << fmt_double(c.lambda_czz) << '|' << to_string(c.method) << '|'
      << c.bp_iterations << '|' << c.shots << '|' << c.seed;
  return out.str();
}

std::uint64_t MemoryConfig::hash() const { return fnv1a64(canonical()); }

double MemoryResult::standard_error() const {
  if (!shots) return 0.0;
  const double r = rate();
  return std::sqrt(r * (1 - r) / static_cast<double>(shots));
}

double MemoryResult::upper_bound_95() const {
  if (!shots) return 1.0;
  return failures ? rate() : 3.0 / static_cast<double>(shots);
}

MemoryResult run_memory(const MemoryConfig& config) {
  const auto c = config.resolved();
  if (c.shots < 1000) throw std::invalid_argument("memory runs need at least 1000 shots");
  if (c.p < 0 || c.p > 1) throw std::invalid_argument("physical error rate outside [0, 1]");
  const Layout layout(c.kind, c.d);
  CircuitOptions o;
  o.basis = c.basis;
  o.rounds = c.rounds;
  o.style = c.style;
  o.ordering = parse_ordering(c.style, c.ordering);
  o.allow_non_ft = true;
  const auto circuit = build_memory_circuit(layout, o);
  const auto dem = build_dem(circuit, NoiseModel{c.noise, c.p, c.lambda_czz}, c.threads);
  const auto dd = decompose_dem(dem);
  auto graph = build_matching_graph(dd);
  if (graph.num_detectors <= 4000) precompute_paths(graph);
  std::unique_ptr<BeliefMatcher> bm;
  if (c.method == DecoderMethod::BM) bm = std::make_unique<BeliefMatcher>(dem, dd, c.bp_iterations);

  MemoryResult result;
  result.config = c;
  result.shots = c.shots;
  const std::uint64_t stream = fnv1a64(stream_key(c)) ^ c.seed;
  constexpr std::size_t kSlice = 256;
  for (std::size_t first = 0, chunk = 0; first < c.shots; first += kMemoryChunk, ++chunk) {
    const std::size_t n = std::min(kMemoryChunk, c.shots - first);
    const auto batch = sample(dem, n, block_seed(stream, chunk), c.threads);
    const std::size_t slices = (n + kSlice - 1) / kSlice;
    std::vector<std::size_t> fails(slices, 0), errors(slices, 0);
    parallel_for(slices, c.threads, [&](std::size_t sl) {
      const std::size_t end = std::min(n, (sl + 1) * kSlice);
      for (std::size_t s = sl * kSlice; s < end; ++s) {
        const auto flagged = batch.flagged(s);
        if (flagged.empty()) {
          fails[sl] += batch.observables[s] != 0;
          continue;
        }
        const auto pred = bm ? bm->decode(flagged) : mwpm_decode(graph, flagged);
        if (!pred.ok) {
          ++errors[sl];
          ++fails[sl];
        } else if (pred.observables != batch.observables[s]) {
          ++fails[sl];
        }
      }
    });
    for (std::size_t sl = 0; sl < slices; ++sl) {
      result.failures += fails[sl];
      result.decode_errors += errors[sl];
    }
  }
  return result;
}

std::string memory_csv_header() { return "kind,d,style,ordering,noise,p,lambda,basis,shots,failures,pL,stderr,seed"; }

std::string to_csv_row(const MemoryResult& r) {
  const auto& c = r.config;
  std::ostringstream out;
  out << to_string(c.kind) << ',' << c.d << ',' << to_string(c.style) << ',' << c.ordering << ','
      << to_string(c.noise) << ',' << fmt_double(c.p) << ',' << fmt_double(c.lambda_czz) << ','
      << to_string(c.basis) << ',' << r.shots << ',' << r.failures << ',' << fmt_double(r.rate()) << ','
      << fmt_double(r.standard_error()) << ',' << c.seed;
  return out.str();
}

double combine_xz(double p_x, double p_z) {
  if (p_x < 0 || p_x > 1 || p_z < 0 || p_z > 1) throw std::invalid_argument("logical error rates must lie in [0, 1]");
  return 1 - (1 - p_x) * (1 - p_z);
}

CombinedResult run_both_bases(const MemoryConfig& config) {
  CombinedResult out;
  auto c = config;
  c.basis = PauliType::X;
  out.x = run_memory(c);
  c.basis = PauliType::Z;
  out.z = run_memory(c);
  const double rx = out.x.rate(), rz = out.z.rate();
  out.p_L = combine_xz(rx, rz);
  out.error = std::hypot(out.x.standard_error() * (1 - rz), out.z.standard_error() * (1 - rx));
  return out;
}

std::vector<ThresholdCurve> run_threshold_grid(const MemoryConfig& base, const std::vector<int>& distances,
                                               const std::vector<double>& rates,
                                               const std::function<void(const CombinedResult&)>& each) {
  std::vector<ThresholdCurve> curves;
  for (int d : distances) {
    ThresholdCurve curve;
    curve.d = d;
    for (double p : rates) {
      auto c = base;
      c.d = d;
      c.rounds = 0;
      c.p = p;
      const auto r = run_both_bases(c);
      curve.points.push_back({p, r.p_L, r.error});
      if (each) each(r);
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

LambdaSweep lambda_sweep(const MemoryConfig& base, const std::vector<double>& lambdas) {
  for (double l : lambdas) {
    if (l < 1 || l > 2) throw std::invalid_argument("lambda must lie in [1, 2]");
  }
  auto both = [&](GateStyle style, double lambda) {
    auto c = base;
    c.style = style;
    c.lambda_czz = lambda;
    if (style != base.style) c.ordering.clear();
    const auto r = run_both_bases(c);
    LambdaRow row;
    row.lambda = lambda;
    row.p_L = r.p_L;
    row.error = r.error;
    row.failures = r.x.failures + r.z.failures;
    row.shots = r.x.shots + r.z.shots;
    return row;
  };
  LambdaSweep out;
  out.baseline = both(GateStyle::CZ, 1.0);
  for (double l : lambdas) out.rows.push_back(both(GateStyle::CZZ, l));
  const double base_rate = out.baseline.p_L;
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    if (out.rows[i].p_L < base_rate) continue;
    if (i == 0) {
      out.crossing = out.rows[0].lambda;
    } else {
      const auto& a = out.rows[i - 1];
      const auto& b = out.rows[i];
      out.crossing = a.lambda + (b.lambda - a.lambda) * (base_rate - a.p_L) / (b.p_L - a.p_L);
    }
    break;
  }
  return out;
}

}  // namespace ftsurf
