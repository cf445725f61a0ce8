#include "lfcnorm/io.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lfcnorm {

namespace {

using nlohmann::json;

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ParseError("malformed JSON");
  return j;
}

std::string sig17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Config parse_config_json(const std::string& text) {
  const json j = parse(text);
  if (!j.is_object()) throw ParseError("config: expected a JSON object");
  Config cfg;
  try {
    if (j.contains("p")) cfg.p = j.at("p").get<double>();
    cfg.q = j.contains("q") ? j.at("q").get<double>() : cfg.p / 2.0;
    if (j.contains("epsilon")) cfg.epsilon = j.at("epsilon").get<double>();
    if (j.contains("smoothness_order"))
      cfg.smoothness_order = j.at("smoothness_order").get<int>();
    if (j.contains("k_max")) cfg.k_max = j.at("k_max").get<long>();
    if (j.contains("bisect_tol"))
      cfg.bisect_tol = j.at("bisect_tol").get<double>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return cfg;
}

std::string config_to_json(const Config& cfg) {
  json j;
  j["p"] = cfg.p;
  j["q"] = cfg.q;
  j["epsilon"] = cfg.epsilon;
  j["smoothness_order"] = cfg.smoothness_order;
  j["k_max"] = cfg.k_max;
  j["bisect_tol"] = cfg.bisect_tol;
  j["seed"] = cfg.seed;
  return j.dump(2) + "\n";
}

SparseVector parse_vector_json(const std::string& text) {
  const json j = parse(text);
  if (!j.is_object() || !j.contains("entries") || !j["entries"].is_array())
    throw ParseError("vector: expected {\"entries\": [[label, value], ...]}");
  std::vector<std::pair<std::string, double>> entries;
  for (const auto& e : j["entries"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() ||
        !e[1].is_number())
      throw ParseError("vector: each entry must be [label, value]");
    entries.emplace_back(e[0].get<std::string>(), e[1].get<double>());
  }
  try {
    return SparseVector(entries);
  } catch (const std::invalid_argument& err) {
    throw ParseError(err.what());
  }
}

std::string vector_to_json(const SparseVector& x) {
  json entries = json::array();
  for (const auto& [label, v] : x.entries())
    entries.push_back(json::array({label, v}));
  json j;
  j["entries"] = entries;
  return j.dump(2) + "\n";
}

std::string schedule_to_json(const ParamSchedule& s) {
  json delta = json::array(), theta = json::array();
  for (long k = 0; k <= s.horizon(); ++k) {
    delta.push_back(s.delta(k));
    theta.push_back(s.theta(k));
  }
  json j;
  j["delta"] = delta;
  j["theta"] = theta;
  j["epsilon"] = s.epsilon();
  return j.dump(2) + "\n";
}

std::string report_to_json(const NormReport& rep) {
  json j;
  j["p_norm"] = rep.p_norm;
  j["nu"] = rep.nu;
  if (rep.psi.has_value())
    j["psi"] = *rep.psi;
  else
    j["psi"] = nullptr;
  j["final_norm"] = rep.final_norm;
  j["active_count"] = rep.active_count;
  j["bisect_iters"] = rep.bisect_iters;
  j["schedule_digest"] = rep.schedule_digest;
  json cal = json::array();
  for (const auto& c : rep.calibrations) {
    json e;
    e["k"] = c.k;
    e["mu"] = c.mu;
    e["correction"] = c.correction;
    cal.push_back(e);
  }
  j["calibrations"] = cal;
  return j.dump(2) + "\n";
}

std::string ray_csv(const NormEvaluator& ev, const SparseVector& x,
                    const SparseVector& d, long steps, double t_max) {
  if (steps < 0) throw std::invalid_argument("ray: steps >= 0");
  std::ostringstream out;
  out << "t,p_norm,nu,final_norm\n";
  for (long i = 0; i <= steps; ++i) {
    const double t =
        steps == 0 ? 0.0 : t_max * static_cast<double>(i) /
                               static_cast<double>(steps);
    const SparseVector y = x.plus(d.scaled(t));
    out << sig17(t) << ',' << sig17(p_norm(y, ev.exponent())) << ','
        << sig17(aux_norm(y, ev.schedule(), ev.exponent())) << ','
        << sig17(ev.final_norm(y)) << '\n';
  }
  return out.str();
}

RunManifest RunManifest::make(std::string command, Config config,
                              std::vector<std::string> input_paths,
                              std::string output_path) {
  config.validate();
  RunManifest m;
  m.command = std::move(command);
  m.config = config;
  m.input_paths = std::move(input_paths);
  m.output_path = std::move(output_path);
  m.timestamp = static_cast<long long>(std::time(nullptr));
  return m;
}

void RunManifest::check_inputs() const {
  for (const auto& path : input_paths) {
    std::ifstream probe(path);
    if (!probe) throw ParseError("cannot open file: " + path);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

}  // namespace lfcnorm
