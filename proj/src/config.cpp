#include "ftsurf/config.hpp"

#include <cstdio>
#include <stdexcept>

#include "json.hpp"

namespace ftsurf {

using nlohmann::json;

std::string RunConfig::to_json() const {
  json j;
  j["subcommand"] = subcommand;
  j["kind"] = ftsurf::to_string(kind);
  j["d"] = d;
  j["distances"] = distances;
  j["basis"] = ftsurf::to_string(basis);
  j["rounds"] = rounds;
  j["style"] = ftsurf::to_string(style);
  j["ordering"] = ordering;
  j["noise"] = ftsurf::to_string(noise);
  j["p"] = p;
  j["lambda_czz"] = lambda_czz;
  j["lambdas"] = lambdas;
  j["method"] = ftsurf::to_string(method);
  j["bp_iterations"] = bp_iterations;
  j["shots"] = shots;
  j["seed"] = seed;
  j["t"] = t;
  j["w_max"] = w_max;
  j["target"] = target;
  j["p_eval"] = p_eval;
  j["decompose"] = decompose;
  j["figure"] = figure;
  j["p_th"] = p_th;
  j["nu"] = nu;
  j["outputs"] = outputs;
  j["inputs"] = inputs;
  return j.dump();
}

RunConfig RunConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  try {
    c.subcommand = j.at("subcommand").get<std::string>();
    c.kind = parse_code_kind(j.at("kind").get<std::string>());
    c.d = j.at("d").get<int>();
    c.distances = j.at("distances").get<std::vector<int>>();
    c.basis = parse_pauli_type(j.at("basis").get<std::string>());
    c.rounds = j.at("rounds").get<int>();
    c.style = parse_gate_style(j.at("style").get<std::string>());
    c.ordering = j.at("ordering").get<std::string>();
    c.noise = parse_noise_kind(j.at("noise").get<std::string>());
    c.p = j.at("p").get<std::vector<double>>();
    c.lambda_czz = j.at("lambda_czz").get<double>();
    c.lambdas = j.at("lambdas").get<std::vector<double>>();
    c.method = parse_decoder_method(j.at("method").get<std::string>());
    c.bp_iterations = j.at("bp_iterations").get<int>();
    c.shots = j.at("shots").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.t = j.at("t").get<int>();
    c.w_max = j.at("w_max").get<int>();
    c.target = j.at("target").get<double>();
    c.p_eval = j.at("p_eval").get<double>();
    c.decompose = j.at("decompose").get<bool>();
    c.figure = j.at("figure").get<std::string>();
    c.p_th = j.at("p_th").get<double>();
    c.nu = j.at("nu").get<double>();
    c.outputs = j.at("outputs").get<std::map<std::string, std::string>>();
    c.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config field missing or mistyped: ") + e.what());
  }
  return c;
}

std::string RunConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(to_json())));
  return buf;
}

MemoryConfig RunConfig::memory(int distance, double rate, int threads) const {
  MemoryConfig m;
  m.kind = kind;
  m.d = distance;
  m.rounds = rounds;
  m.style = style;
  m.ordering = ordering;
  m.noise = noise;
  m.p = rate;
  m.lambda_czz = lambda_czz;
  m.basis = basis;
  m.method = method;
  m.bp_iterations = bp_iterations;
  m.shots = shots;
  m.seed = seed;
  m.threads = threads;
  return m;
}

}  // namespace ftsurf
