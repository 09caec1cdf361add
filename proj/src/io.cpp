#include "qal/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qal/error.hpp"
#include "qal/format.hpp"

namespace qal::io {

Fields::Fields(const Json& object, std::string path) : object_(&object), path_(std::move(path)) {
  if (!object.is_object()) throw ConfigError((path_.empty() ? std::string("config") : path_) + ": expected an object");
}

std::string Fields::where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

bool Fields::has(const std::string& key) const { return object_->contains(key); }

const Json& Fields::raw(const std::string& key) const {
  if (!has(key)) throw ConfigError(where(key) + ": required field is missing");
  return object_->at(key);
}

Fields Fields::sub(const std::string& key) const {
  const Json& v = raw(key);
  if (!v.is_object()) throw ConfigError(where(key) + ": expected an object");
  return Fields(v, where(key));
}

double Fields::real(const std::string& key) const {
  const Json& v = raw(key);
  if (v.is_string() && v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
  if (!v.is_number()) throw ConfigError(where(key) + ": expected a number");
  return v.get<double>();
}

double Fields::real(const std::string& key, double fallback) const { return has(key) ? real(key) : fallback; }

std::int64_t Fields::integer(const std::string& key) const {
  const Json& v = raw(key);
  if (!v.is_number_integer()) throw ConfigError(where(key) + ": expected an integer");
  return v.get<std::int64_t>();
}

std::int64_t Fields::integer(const std::string& key, std::int64_t fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::uint64_t Fields::seed(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const Json& v = raw(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  throw ConfigError(where(key) + ": expected a nonnegative integer");
}

std::string Fields::text(const std::string& key) const {
  const Json& v = raw(key);
  if (!v.is_string()) throw ConfigError(where(key) + ": expected a string");
  return v.get<std::string>();
}

std::string Fields::text(const std::string& key, const std::string& fallback) const {
  return has(key) ? text(key) : fallback;
}

std::vector<double> Fields::reals(const std::string& key) const {
  const Json& v = raw(key);
  if (!v.is_array()) throw ConfigError(where(key) + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(where(key) + ": expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

SpinState Fields::spins(const std::string& key) const {
  const Json& v = raw(key);
  if (!v.is_array()) throw ConfigError(where(key) + ": expected an array of +1/-1");
  std::vector<int> s;
  for (const auto& x : v) {
    if (!x.is_number_integer() || (x.get<int>() != 1 && x.get<int>() != -1))
      throw ConfigError(where(key) + ": entries must be +1 or -1");
    s.push_back(x.get<int>());
  }
  if (s.empty()) throw ConfigError(where(key) + ": empty spin list");
  return SpinState(std::move(s));
}

void Fields::only(std::initializer_list<const char*> allowed) const {
  for (const auto& [key, value] : object_->items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw ConfigError(where(key) + ": unknown field");
  }
}

ProblemInstance problem_from_json(const Json& j) {
  const Fields f(j, "problem");
  f.only({"n", "h", "J"});
  const auto n = f.integer("n");
  if (n < 1 || n > 64) throw ConfigError("problem.n: must be in [1, 64]");
  std::vector<double> h = f.reals("h");
  if (static_cast<std::int64_t>(h.size()) != n) throw ConfigError("problem.h: expected n entries");
  const Json& couplings = f.raw("J");
  if (!couplings.is_array()) throw ConfigError("problem.J: expected an array of [i, j, value]");
  std::vector<Edge> edges;
  std::vector<double> J;
  for (std::size_t k = 0; k < couplings.size(); ++k) {
    const Json& c = couplings[k];
    const std::string at = "problem.J[" + std::to_string(k) + "]";
    if (!c.is_array() || c.size() != 3 || !c[0].is_number_integer() || !c[1].is_number_integer() || !c[2].is_number())
      throw ConfigError(at + ": expected [i, j, value]");
    const int i = c[0].get<int>();
    const int jj = c[1].get<int>();
    if (!(i < jj)) throw ConfigError(at + ": indices must satisfy i < j");
    if (i < 0 || jj >= n) throw ConfigError(at + ": index out of range");
    edges.push_back({i, jj});
    J.push_back(c[2].get<double>());
  }
  try {
    return ProblemInstance(HardwareGraph(static_cast<int>(n), std::move(edges)), std::move(h), std::move(J));
  } catch (const Error& e) {
    throw ConfigError(std::string("problem: ") + e.what());
  }
}

Json problem_to_json(const ProblemInstance& problem) {
  Json j;
  j["n"] = problem.n();
  j["h"] = problem.h();
  Json couplings = Json::array();
  const auto& edges = problem.graph().edges();
  for (std::size_t k = 0; k < edges.size(); ++k) couplings.push_back(Json::array({edges[k].i, edges[k].j, problem.J()[k]}));
  j["J"] = std::move(couplings);
  return j;
}

std::string problem_text(const ProblemInstance& problem) { return problem_to_json(problem).dump(2) + "\n"; }

Schedule schedule_from_json(const Fields& f) {
  f.only({"family", "gamma", "lambda"});
  const auto family = parse_schedule_family(f.text("family", "linear"));
  try {
    return Schedule(family, f.real("gamma", 1.0), f.real("lambda", 1.0));
  } catch (const Error& e) {
    throw ConfigError(f.path() + ": " + e.what());
  }
}

Json schedule_to_json(const Schedule& schedule) {
  return Json{{"family", to_string(schedule.family())}, {"gamma", schedule.gamma()}, {"lambda", schedule.lambda()}};
}

BathParams bath_from_json(const Fields& f) {
  f.only({"temperature", "eta", "omega_c"});
  BathParams b;
  b.temperature = f.real("temperature", b.temperature);
  b.eta = f.real("eta", b.eta);
  b.omega_c = f.real("omega_c", b.omega_c);
  try {
    b.validate();
  } catch (const Error& e) {
    throw ConfigError(f.path() + ": " + e.what());
  }
  return b;
}

Json bath_to_json(const BathParams& bath) {
  return Json{{"temperature", bath.temperature}, {"eta", bath.eta}, {"omega_c", bath.omega_c}};
}

LocalSearchParams local_search_from_json(const Fields& f) {
  LocalSearchParams p;
  p.s_prime = f.real("s_prime", p.s_prime);
  p.tau = f.real("tau", p.tau);
  p.ramp = f.real("ramp", p.ramp);
  if (f.has("bath")) p.bath = bath_from_json(f.sub("bath"));
  p.samples = f.integer("samples", p.samples);
  p.sampling = parse_sampling_mode(f.text("sampling", to_string(p.sampling)));
  try {
    p.validate();
  } catch (const Error& e) {
    throw ConfigError(f.path() + ": " + e.what());
  }
  return p;
}

Json local_search_to_json(const LocalSearchParams& p) {
  return Json{{"s_prime", p.s_prime}, {"tau", p.tau},         {"ramp", p.ramp},
              {"bath", bath_to_json(p.bath)}, {"samples", p.samples}, {"sampling", to_string(p.sampling)}};
}

CoefficientDelta delta_from_json(const Fields& f, int n) {
  f.only({"dh", "dJ"});
  CoefficientDelta d;
  d.dh = f.has("dh") ? f.reals("dh") : std::vector<double>(static_cast<std::size_t>(n), 0.0);
  if (static_cast<int>(d.dh.size()) != n) throw ConfigError(f.where("dh") + ": expected n entries");
  if (f.has("dJ")) {
    const Json& list = f.raw("dJ");
    if (!list.is_array()) throw ConfigError(f.where("dJ") + ": expected an array of [i, j, delta]");
    for (std::size_t k = 0; k < list.size(); ++k) {
      const Json& c = list[k];
      if (!c.is_array() || c.size() != 3 || !c[0].is_number_integer() || !c[1].is_number_integer() ||
          !c[2].is_number())
        throw ConfigError(f.where("dJ") + "[" + std::to_string(k) + "]: expected [i, j, delta]");
      d.dJ.push_back({{c[0].get<int>(), c[1].get<int>()}, c[2].get<double>()});
    }
  }
  return d;
}

Json delta_to_json(const CoefficientDelta& delta) {
  Json dJ = Json::array();
  for (const auto& [e, v] : delta.dJ) dJ.push_back(Json::array({e.i, e.j, v}));
  return Json{{"dh", delta.dh}, {"dJ", std::move(dJ)}};
}

Json spins_to_json(const SpinState& s) { return Json(s.spins()); }

Json sample_set_to_json(const SampleSet& set, const LocalSearchParams& params) {
  Json records = Json::array();
  const Outcome* best = nullptr;
  for (const auto& o : set.outcomes) {
    records.push_back({{"bitstring", spins_to_json(o.state)}, {"energy", o.energy}, {"hamming", o.hamming},
                       {"count", o.count}});
    if (!best || o.energy < best->energy) best = &o;
  }
  const double total = static_cast<double>(set.total());
  Json out;
  out["header"] = {{"start", spins_to_json(set.start)}, {"params", local_search_to_json(params)}, {"seed", set.seed}};
  out["records"] = std::move(records);
  out["summary"] = {{"samples", set.total()},
                    {"distinct", set.outcomes.size()},
                    {"mean_energy", mean_energy(set)},
                    {"mean_hamming", mean_hamming(set)},
                    {"p_start", probability_of(set, set.start)},
                    {"best_found", best ? spins_to_json(best->state) : Json()},
                    {"best_energy", best ? best->energy : 0.0},
                    {"p_best_found", best ? static_cast<double>(best->count) / total : 0.0}};
  return out;
}

std::string solve_result_csv(const SolveResult& result) {
  std::ostringstream out;
  out << "generation,min_energy,mean_energy,best_energy,unique_ancestors,swaps_attempted,swaps_accepted\n";
  for (const auto& g : result.generations)
    out << g.generation << ',' << format_real(g.min_energy) << ',' << format_real(g.mean_energy) << ','
        << format_real(g.best_energy) << ',' << g.unique_ancestors << ',' << g.swaps_attempted << ','
        << g.swaps_accepted << '\n';
  out << "\nalgorithm,best_state,best_energy,moves\n";
  out << result.algorithm << ',' << result.best_state.to_string() << ',' << format_real(result.best_energy) << ','
      << result.moves << '\n';
  return out.str();
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace qal::io
