#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "ftsurf/analysis.hpp"
#include "ftsurf/config.hpp"
#include "ftsurf/decoder.hpp"
#include "ftsurf/dem.hpp"
#include "ftsurf/ft_verify.hpp"
#include "ftsurf/layout.hpp"
#include "ftsurf/parallel.hpp"
#include "json.hpp"

namespace ftsurf {

namespace {

using nlohmann::json;

// Raw flag values; converted into a RunConfig once parsing succeeded.
struct Flags {
  std::string kind = "unrotated";
  int d = 3;
  std::vector<int> distances{3, 5, 7};
  std::string basis = "Z";
  int rounds = 0;
  std::string style = "cz";
  std::string ordering;
  std::string noise = "NI";
  std::vector<double> p;
  double lambda = 1.0;
  std::vector<double> lambdas;
  std::string method = "pm";
  int bp_iterations = 0;
  std::size_t shots = 10000;
  std::uint64_t seed = 0;
  int t = 1;
  int w_max = 0;
  double target = 1e-6;
  double p_eval = 0;
  bool no_decompose = false;
  int threads = 1;
  int bootstrap = 100;
  std::string out, out_det, out_obs, in_det, in_obs;
  std::vector<std::string> in;
  std::string figure = "curves";
  double p_th = 0, nu = 0;
};

class DomainError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
  if (!f) throw DomainError("cannot open '" + path + "' for writing");
  return f;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot open '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

json envelope(const RunConfig& c, json result) {
  json j;
  j["config"] = json::parse(c.to_json());
  j["config_hash"] = c.hash();
  j["result"] = std::move(result);
  return j;
}

std::string text_header(const RunConfig& c) { return "# config " + c.to_json() + "\n# config_hash " + c.hash() + "\n"; }

// JSON goes to --out when given, else to stdout.
void emit_json(const RunConfig& c, const json& result, const std::string& path, std::ostream& out) {
  const auto text = envelope(c, result).dump(2) + "\n";
  if (path.empty()) {
    out << text;
  } else {
    open_out(path) << text;
  }
}

void emit_text(const RunConfig& c, const std::string& body, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text_header(c) << body;
  } else {
    open_out(path) << text_header(c) << body;
  }
}

Circuit make_circuit(const RunConfig& c, int d, PauliType basis) {
  const Layout layout(c.kind, d);
  CircuitOptions o;
  o.basis = basis;
  o.rounds = c.rounds > 0 ? c.rounds : d;
  o.style = c.style;
  o.ordering = parse_ordering(c.style, c.ordering.empty() ? default_ordering(c.style) : c.ordering);
  o.allow_non_ft = true;
  return build_memory_circuit(layout, o);
}

double single_p(const RunConfig& c) {
  if (c.p.size() != 1) throw DomainError("this subcommand takes exactly one --p value");
  return c.p[0];
}

json fault_json(const ElementaryFault& f) {
  return {{"instruction", f.instruction},
          {"slot", f.slot == FaultSlot::Before ? "before" : "after"},
          {"pauli", f.pauli.to_string()}};
}

json layout_json(const Layout& l) {
  json stabs = json::array();
  for (const auto& s : l.stabilizers()) {
    const auto& a = l.coord(s.ancilla);
    stabs.push_back({{"type", to_string(s.type)}, {"ancilla", s.ancilla}, {"at", {a.row, a.col}}, {"data", s.data()}});
  }
  json j{{"kind", to_string(l.kind())},
         {"d", l.distance()},
         {"num_data", l.num_data()},
         {"num_qubits", l.num_qubits()},
         {"total_qubits", total_qubits(l.kind(), l.distance())},
         {"stabilizers", stabs},
         {"logical_x", l.logical_x().support()},
         {"logical_z", l.logical_z().support()}};
  if (l.num_data() <= 16) j["code_distance"] = code_distance_bruteforce(l);
  return j;
}

void write_grid_csv(const std::string& path, const RunConfig& c, const std::vector<CombinedResult>& rows) {
  if (path.empty()) return;
  auto f = open_out(path);
  f << text_header(c) << "kind,d,style,ordering,noise,method,lambda,p,shots_per_basis,failures_x,failures_z,pL,stderr\n";
  for (const auto& r : rows) {
    const auto& m = r.x.config;
    f << to_string(m.kind) << ',' << m.d << ',' << to_string(m.style) << ',' << m.ordering << ','
      << to_string(m.noise) << ',' << to_string(m.method) << ',' << m.lambda_czz << ',' << m.p << ','
      << r.x.shots << ',' << r.x.failures << ',' << r.z.failures << ',' << r.p_L << ',' << r.error << '\n';
  }
}

json curves_json(const std::vector<ThresholdCurve>& curves) {
  json j = json::array();
  for (const auto& c : curves) {
    json pts = json::array();
    for (const auto& p : c.points) pts.push_back({{"p", p.p}, {"pL", p.p_L}, {"stderr", p.error}});
    j.push_back({{"d", c.d}, {"points", pts}});
  }
  return j;
}

// ---- subcommands ----

int cmd_layout(const RunConfig& c, const Flags& f, std::ostream& out) {
  emit_json(c, layout_json(Layout(c.kind, c.d)), f.out, out);
  return 0;
}

int cmd_circuit(const RunConfig& c, const Flags& f, std::ostream& out) {
  emit_text(c, to_text(make_circuit(c, c.d, c.basis)), f.out, out);
  return 0;
}

int cmd_verify(const RunConfig& c, const Flags& f, std::ostream& out) {
  const Layout l(c.kind, c.d);
  const auto ordering = parse_ordering(c.style, c.ordering.empty() ? default_ordering(c.style) : c.ordering);
  FtVerifyOptions o;
  o.threads = f.threads;
  const auto gadget = build_gadget_circuit(l, c.style, ordering, 2, true);
  const auto rep = check_distinguishability(gadget, l, c.t, o);
  json r{{"t", c.t},
         {"largest", rep.largest_distinguishable_order},
         {"complete", rep.complete},
         {"elementary_faults", rep.elementary_faults},
         {"unique_signatures", rep.unique_signatures}};
  if (rep.witness) {
    json a = json::array(), b = json::array();
    for (const auto& x : rep.witness->first) a.push_back(fault_json(x));
    for (const auto& x : rep.witness->second) b.push_back(fault_json(x));
    const auto chk = verify_witness(gadget, l, *rep.witness);
    r["witness"] = {{"first", a},
                    {"second", b},
                    {"replay", {{"same_detectors", chk.same_detectors},
                                {"same_syndrome", chk.same_syndrome},
                                {"inequivalent", chk.inequivalent},
                                {"ok", chk.ok()}}}};
  }
  if (c.w_max > 0) {
    const auto fd = fault_distance(make_circuit(c, c.d, c.basis), c.w_max, o);
    r["fault_distance"] = {{"distance", fd.distance}, {"found", fd.found}, {"complete", fd.complete},
                           {"channels", fd.channels}};
  }
  emit_json(c, r, f.out, out);
  return 0;
}

int cmd_dem(const RunConfig& c, const Flags& f, std::ostream& out) {
  const auto dem = build_dem(make_circuit(c, c.d, c.basis), NoiseModel{c.noise, single_p(c), c.lambda_czz}, f.threads);
  emit_text(c, c.decompose ? to_text(dem, decompose_dem(dem)) : to_text(dem), f.out, out);
  return 0;
}

int cmd_sample(const RunConfig& c, const Flags& f, std::ostream& out) {
  if (c.shots == 0) throw DomainError("--shots must be positive");
  const auto dem = build_dem(make_circuit(c, c.d, c.basis), NoiseModel{c.noise, single_p(c), c.lambda_czz}, f.threads);
  const auto batch = sample(dem, c.shots, c.seed, f.threads);
  write_batch(batch, f.out_det, f.out_obs);
  json side{{"shots", batch.shots},
            {"num_detectors", batch.num_detectors},
            {"num_observables", batch.num_observables},
            {"seed", c.seed},
            {"format", "bit-packed rows, little-endian bit order, ceil(width/8) bytes per shot"},
            {"detectors_file", f.out_det},
            {"observables_file", f.out_obs}};
  const auto doc = envelope(c, side).dump(2) + "\n";
  open_out(f.out_det + ".json") << doc;
  out << doc;
  return 0;
}

int cmd_decode(const RunConfig& c, const Flags& f, std::ostream& out) {
  if (c.shots == 0) throw DomainError("--shots must be positive");
  const auto dem = build_dem(make_circuit(c, c.d, c.basis), NoiseModel{c.noise, single_p(c), c.lambda_czz}, f.threads);
  const auto dd = decompose_dem(dem);
  const bool have_obs = !f.in_obs.empty();
  const auto batch = read_batch(f.in_det, f.in_obs, c.shots, dem.num_detectors, dem.num_observables);
  auto graph = build_matching_graph(dd);
  if (graph.num_detectors <= 4000) precompute_paths(graph);
  std::unique_ptr<BeliefMatcher> bm;
  if (c.method == DecoderMethod::BM) {
    bm = std::make_unique<BeliefMatcher>(dem, dd, c.bp_iterations > 0 ? c.bp_iterations : default_bp_iterations(c.d));
  }
  std::vector<std::uint64_t> predicted(batch.shots, 0);
  std::vector<std::uint8_t> bad(batch.shots, 0);
  parallel_for(batch.shots, f.threads, [&](std::size_t s) {
    const auto flagged = batch.flagged(s);
    if (flagged.empty()) return;
    const auto pr = bm ? bm->decode(flagged) : mwpm_decode(graph, flagged);
    predicted[s] = pr.observables;
    bad[s] = !pr.ok;
  });
  std::size_t failures = 0, errors = 0;
  for (std::size_t s = 0; s < batch.shots; ++s) {
    errors += bad[s];
    if (have_obs) failures += bad[s] || predicted[s] != batch.observables[s];
  }
  if (!f.out.empty()) {
    auto o = open_out(f.out, true);
    const std::size_t row = (dem.num_observables + 7) / 8;
    for (auto w : predicted) {
      for (std::size_t b = 0; b < row; ++b) o.put(static_cast<char>((w >> (8 * b)) & 0xFF));
    }
    open_out(f.out + ".json") << envelope(c, {{"shots", batch.shots}, {"num_observables", dem.num_observables}}).dump(2)
                              << "\n";
  }
  json r{{"shots", batch.shots}, {"decode_errors", errors}};
  if (have_obs) {
    r["failures"] = failures;
    r["pL"] = batch.shots ? static_cast<double>(failures) / static_cast<double>(batch.shots) : 0.0;
  }
  out << envelope(c, r).dump() << "\n";
  return 0;
}

int cmd_memory(const RunConfig& c, const Flags& f, std::ostream& out) {
  const auto r = run_memory(c.memory(c.d, single_p(c), f.threads));
  emit_text(c, memory_csv_header() + "\n" + to_csv_row(r) + "\n", f.out, out);
  return 0;
}

int cmd_threshold(const RunConfig& c, const Flags& f, std::ostream& out) {
  if (c.p.size() < 5) throw DomainError("threshold needs at least 5 --p values");
  std::vector<CombinedResult> rows;
  const auto curves = run_threshold_grid(c.memory(c.d, 0.0, f.threads), c.distances, c.p,
                                         [&](const CombinedResult& r) { rows.push_back(r); });
  write_grid_csv(f.out, c, rows);
  ThresholdOptions o;
  o.bootstrap = f.bootstrap;
  o.seed = c.seed + 1;
  const auto fit = fit_threshold(curves, o);
  json r{{"p_th", fit.p_th},     {"p_th_error", fit.p_th_error},   {"nu", fit.nu},
         {"nu_error", fit.nu_error}, {"residual", fit.residual},    {"converged", fit.converged},
         {"boundary_pinned", fit.boundary_pinned}, {"curves", curves_json(curves)}};
  out << envelope(c, r).dump(2) << "\n";
  return 0;
}

int cmd_resources(const RunConfig& c, const Flags& f, std::ostream& out) {
  if (c.p.empty()) throw DomainError("resources needs at least one --p value");
  std::vector<CombinedResult> rows;
  std::vector<std::pair<double, std::vector<ResourcePoint>>> data;
  json dropped = json::array();
  for (double p : c.p) {
    std::vector<ResourcePoint> pts;
    for (int d : c.distances) {
      const auto r = run_both_bases(c.memory(d, p, f.threads));
      rows.push_back(r);
      if (r.x.failures + r.z.failures == 0) {
        // no log of zero; the point stays in the CSV only
        dropped.push_back({{"d", d}, {"p", p}, {"pL_upper_95", combine_xz(r.x.upper_bound_95(), r.z.upper_bound_95())}});
        continue;
      }
      pts.push_back({static_cast<double>(total_qubits(c.kind, d)), r.p_L, r.error});
    }
    if (!pts.empty()) data.push_back({p, pts});
  }
  if (data.empty()) throw DomainError("no failures at any point; raise --shots");
  write_grid_csv(f.out, c, rows);
  auto fit = data.size() >= 2 ? fit_resource_surface(data) : fit_resource_curve(data[0].second, data[0].first);
  fit.p = c.p_eval > 0 ? c.p_eval : c.p[0];
  const auto q = qubits_to_target(fit, c.target, c.kind);
  json r{{"c0", fit.c0},
         {"c1", fit.c1},
         {"c2", fit.c2},
         {"p_eval", fit.p},
         {"joint_fit", data.size() >= 2},
         {"dropped_zero_failure_points", dropped},
         {"target", c.target},
         {"qubits_to_target", q.reachable ? json(q.n) : json(nullptr)},
         {"distance_to_target", q.reachable ? json(q.d) : json(nullptr)}};
  out << envelope(c, r).dump(2) << "\n";
  return 0;
}

int cmd_sweep(const RunConfig& c, const Flags& f, std::ostream& out) {
  if (c.lambdas.empty()) throw DomainError("sweep-lambda needs --lambdas");
  auto base = c.memory(c.d, single_p(c), f.threads);
  base.style = GateStyle::CZZ;
  const auto s = lambda_sweep(base, c.lambdas);
  auto row = [](const LambdaRow& r) {
    return json{{"lambda", r.lambda}, {"pL", r.p_L}, {"stderr", r.error}, {"failures", r.failures}, {"shots", r.shots}};
  };
  json rows = json::array();
  for (const auto& r : s.rows) rows.push_back(row(r));
  json r{{"cz_baseline", row(s.baseline)}, {"czz", rows}, {"crossing", s.crossing < 0 ? json(nullptr) : json(s.crossing)}};
  if (!f.out.empty()) {
    auto o = open_out(f.out);
    o << text_header(c) << "lambda,pL,stderr,cz_pL,cz_stderr\n";
    for (const auto& x : s.rows) {
      o << x.lambda << ',' << x.p_L << ',' << x.error << ',' << s.baseline.p_L << ',' << s.baseline.error << '\n';
    }
  }
  out << envelope(c, r).dump(2) << "\n";
  return 0;
}

// Result CSVs (comment lines allowed) into gnuplot index blocks separated by two
// blank lines, one block per series, each headed by a "# key" comment.
//   curves:    p pL stderr, series per (kind, style, ordering, noise, method, lambda, basis, d)
//   collapse:  x pL stderr with x = (p - p_th) d^(1/nu), same series
//   resources: n pL stderr with n the physical qubit count, series per (kind, style, ..., p)
int cmd_plot(const RunConfig& c, const Flags& f, std::ostream& out) {
  using Row = std::map<std::string, std::string>;
  std::vector<Row> rows;
  auto split = [](const std::string& s) {
    std::vector<std::string> v;
    std::stringstream ss(s);
    std::string x;
    while (std::getline(ss, x, ',')) v.push_back(x);
    return v;
  };
  for (const auto& path : f.in) {
    std::istringstream in(slurp(path));
    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      if (header.empty()) {
        header = split(line);
        continue;
      }
      const auto cells = split(line);
      if (cells.size() != header.size()) throw DomainError(path + ": ragged CSV row: " + line);
      Row r;
      for (std::size_t i = 0; i < header.size(); ++i) r[header[i]] = cells[i];
      rows.push_back(std::move(r));
    }
  }
  const bool collapse = f.figure == "collapse", resources = f.figure == "resources";
  if (collapse && (f.p_th <= 0 || f.nu <= 0)) throw DomainError("collapse needs positive --p-th and --nu");
  auto need = [](const Row& r, const std::string& k) -> const std::string& {
    const auto it = r.find(k);
    if (it == r.end()) throw DomainError("CSV lacks column '" + k + "'");
    return it->second;
  };
  auto num = [&](const Row& r, const std::string& k) {
    try {
      return std::stod(need(r, k));
    } catch (const std::logic_error&) {
      throw DomainError("column '" + k + "' is not numeric: " + need(r, k));
    }
  };
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::string>> series;
  for (const auto& r : rows) {
    std::string key;
    for (const char* k : {"kind", "style", "ordering", "noise", "method", "lambda", "basis"}) {
      if (r.count(k)) key += std::string(k) + "=" + r.at(k) + " ";
    }
    key += resources ? "p=" + need(r, "p") : "d=" + need(r, "d");
    std::ostringstream line;
    line.precision(10);
    if (resources) {
      line << total_qubits(parse_code_kind(need(r, "kind")), static_cast<int>(num(r, "d")));
    } else if (collapse) {
      line << (num(r, "p") - f.p_th) * std::pow(num(r, "d"), 1 / f.nu);
    } else {
      line << need(r, "p");
    }
    line << ' ' << need(r, "pL") << ' ' << need(r, "stderr");
    if (!series.count(key)) order.push_back(key);
    series[key].push_back(line.str());
  }
  std::ostringstream body;
  body << "# columns: " << (resources ? "n" : collapse ? "x" : "p") << " pL stderr\n";
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i) body << "\n\n";
    body << "# " << order[i] << "\n";
    for (const auto& l : series[order[i]]) body << l << '\n';
  }
  emit_text(c, body.str(), f.out, out);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"surface-code memory experiments with CZ and CZZ syndrome extraction", "ftsurf"};
  app.require_subcommand(1);
  Flags f;
  f.threads = default_threads();

  const auto kinds = CLI::IsMember({"rotated", "unrotated"}, CLI::ignore_case);
  const auto styles = CLI::IsMember({"cz", "czz"}, CLI::ignore_case);
  const auto noises = CLI::IsMember({"SI", "NI"}, CLI::ignore_case);
  const auto bases = CLI::IsMember({"X", "Z"}, CLI::ignore_case);
  const auto methods = CLI::IsMember({"pm", "bm"}, CLI::ignore_case);

  auto code = [&](CLI::App* s) {
    s->add_option("--kind", f.kind, "rotated | unrotated")->transform(kinds);
    s->add_option("--d", f.d, "code distance (odd, >= 3)");
  };
  auto gates = [&](CLI::App* s) {
    s->add_option("--style", f.style, "cz | czz")->transform(styles);
    s->add_option("--ordering", f.ordering, "gate ordering; default sewn (cz) or 24 (czz)");
  };
  auto circuit = [&](CLI::App* s) {
    code(s);
    gates(s);
    s->add_option("--basis", f.basis, "memory basis X | Z")->transform(bases);
    s->add_option("--rounds", f.rounds, "syndrome rounds (default d)");
  };
  auto noise = [&](CLI::App* s, bool list) {
    s->add_option("--noise", f.noise, "SI | NI")->transform(noises);
    auto* o = s->add_option("--p", f.p, list ? "physical error rates (comma separated)" : "physical error rate");
    o->required();
    if (list) o->delimiter(',');
    else o->expected(1);
    s->add_option("--lambda", f.lambda, "CZZ error multiplier in [1, 2]");
  };
  auto decoding = [&](CLI::App* s) {
    s->add_option("--method", f.method, "pm | bm")->transform(methods);
    s->add_option("--bp-iterations", f.bp_iterations, "belief-propagation iterations (default d rounded up to even)");
  };
  auto run = [&](CLI::App* s) {
    s->add_option("--shots", f.shots, "shots (per basis for grid commands)");
    s->add_option("--seed", f.seed, "64-bit seed");
    s->add_option("--threads", f.threads, "worker threads (default FTSURF_THREADS)");
  };
  auto output = [&](CLI::App* s) { s->add_option("--out", f.out, "output file (default stdout)"); };

  auto* layout = app.add_subcommand("layout", "qubit layout, stabilizers and logicals as JSON");
  code(layout);
  output(layout);

  auto* circ = app.add_subcommand("circuit", "memory circuit in text form");
  circuit(circ);
  output(circ);

  auto* verify = app.add_subcommand("verify-ft", "fault-set distinguishability and fault distance");
  circuit(verify);
  verify->add_option("--t", f.t, "largest fault order to check");
  verify->add_option("--w-max", f.w_max, "also search undetected logical fault paths up to this weight");
  verify->add_option("--threads", f.threads, "worker threads (default FTSURF_THREADS)");
  output(verify);

  auto* dem = app.add_subcommand("dem", "detector error model text");
  circuit(dem);
  noise(dem, false);
  dem->add_flag("--no-decompose", f.no_decompose, "print channels without edge decomposition");
  dem->add_option("--threads", f.threads, "worker threads (default FTSURF_THREADS)");
  output(dem);

  auto* samp = app.add_subcommand("sample", "sample detector and observable bits");
  circuit(samp);
  noise(samp, false);
  run(samp);
  samp->add_option("--out-det", f.out_det, "detector bits file")->required();
  samp->add_option("--out-obs", f.out_obs, "observable bits file")->required();

  auto* dec = app.add_subcommand("decode", "decode sampled detector bits");
  circuit(dec);
  noise(dec, false);
  decoding(dec);
  run(dec);
  dec->add_option("--in-det", f.in_det, "detector bits file")->required();
  dec->add_option("--in-obs", f.in_obs, "observable bits file; enables the failure count");
  dec->add_option("--out", f.out, "predicted observable bits file");

  auto* mem = app.add_subcommand("memory", "one memory experiment as a CSV row");
  circuit(mem);
  noise(mem, false);
  decoding(mem);
  run(mem);
  output(mem);

  auto* thr = app.add_subcommand("threshold", "distance x error-rate grid, both bases, with a collapse fit");
  code(thr);
  gates(thr);
  thr->add_option("--distances", f.distances, "code distances")->delimiter(',');
  noise(thr, true);
  decoding(thr);
  run(thr);
  thr->add_option("--bootstrap", f.bootstrap, "bootstrap resamples for fit errors");
  thr->add_option("--out", f.out, "per-point CSV file");

  auto* res = app.add_subcommand("resources", "logical error versus qubit count fit and qubits to target");
  code(res);
  gates(res);
  res->add_option("--distances", f.distances, "code distances")->delimiter(',');
  noise(res, true);
  decoding(res);
  run(res);
  res->add_option("--target", f.target, "target logical error rate");
  res->add_option("--p-eval", f.p_eval, "physical error rate at which to evaluate the fit (default first --p)");
  res->add_option("--out", f.out, "per-point CSV file");

  auto* sweep = app.add_subcommand("sweep-lambda", "CZZ error multiplier sweep against the CZ baseline");
  code(sweep);
  sweep->add_option("--ordering", f.ordering, "CZZ ordering (default 24)");
  sweep->add_option("--basis", f.basis, "ignored; both bases are run")->transform(bases);
  noise(sweep, false);
  sweep->add_option("--lambdas", f.lambdas, "multipliers in [1, 2]")->delimiter(',')->required();
  decoding(sweep);
  run(sweep);
  sweep->add_option("--out", f.out, "CSV file");

  auto* plot = app.add_subcommand("plot-data", "gnuplot-ready blocks from a result CSV");
  plot->add_option("--in", f.in, "CSV files from memory, threshold, resources or sweep runs")->required();
  plot->add_option("--figure", f.figure, "curves | collapse | resources")
      ->transform(CLI::IsMember({"curves", "collapse", "resources"}));
  plot->add_option("--p-th", f.p_th, "threshold for the collapse abscissa");
  plot->add_option("--nu", f.nu, "exponent for the collapse abscissa");
  output(plot);

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::Success&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << "usage error: " << e.what() << "\n" << sub->help();
    return 2;
  }

  auto* active = app.get_subcommands().front();
  const std::string name = active->get_name();
  try {
    RunConfig c;
    c.subcommand = name;
    c.kind = parse_code_kind(f.kind);
    c.d = f.d;
    if (name == "threshold" || name == "resources") c.distances = f.distances;
    c.basis = parse_pauli_type(f.basis);
    c.rounds = f.rounds;
    c.style = name == "sweep-lambda" ? GateStyle::CZZ : parse_gate_style(f.style);
    c.ordering = f.ordering;
    c.noise = parse_noise_kind(f.noise);
    c.p = f.p;
    c.lambda_czz = f.lambda;
    c.lambdas = f.lambdas;
    c.method = parse_decoder_method(f.method);
    c.bp_iterations = f.bp_iterations;
    const bool runs = name == "sample" || name == "decode" || name == "memory" || name == "threshold" ||
                      name == "resources" || name == "sweep-lambda";
    if (runs) c.shots = f.shots;
    c.seed = f.seed;
    c.t = f.t;
    c.w_max = f.w_max;
    if (name == "resources") {
      c.target = f.target;
      c.p_eval = f.p_eval;
    }
    c.decompose = !f.no_decompose;
    if (!f.out.empty()) c.outputs["out"] = f.out;
    if (!f.out_det.empty()) c.outputs["det"] = f.out_det;
    if (!f.out_obs.empty()) c.outputs["obs"] = f.out_obs;
    for (std::size_t i = 0; i < f.in.size(); ++i) c.inputs["in" + std::to_string(i)] = f.in[i];
    if (name == "plot-data") {
      c.figure = f.figure;
      c.p_th = f.p_th;
      c.nu = f.nu;
    }
    if (!f.in_det.empty()) c.inputs["det"] = f.in_det;
    if (!f.in_obs.empty()) c.inputs["obs"] = f.in_obs;
    if (f.threads < 1) throw DomainError("--threads must be at least 1");
    if (c.style == GateStyle::CZ && f.lambda != 1.0) throw DomainError("--lambda applies to czz only");
    if (name == "layout") return cmd_layout(c, f, out);
    if (name == "circuit") return cmd_circuit(c, f, out);
    if (name == "verify-ft") return cmd_verify(c, f, out);
    if (name == "dem") return cmd_dem(c, f, out);
    if (name == "sample") return cmd_sample(c, f, out);
    if (name == "decode") return cmd_decode(c, f, out);
    if (name == "memory") return cmd_memory(c, f, out);
    if (name == "threshold") return cmd_threshold(c, f, out);
    if (name == "resources") return cmd_resources(c, f, out);
    if (name == "sweep-lambda") return cmd_sweep(c, f, out);
    if (name == "plot-data") return cmd_plot(c, f, out);
    throw DomainError("unhandled subcommand " + name);
  } catch (const std::exception& e) {
    err << json{{"error", e.what()}, {"subcommand", name}}.dump() << "\n";
    return 1;
  }
}

}  // namespace ftsurf
