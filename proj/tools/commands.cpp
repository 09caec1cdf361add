#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "qal/eff_temp.hpp"
#include "qal/error.hpp"
#include "qal/format.hpp"
#include "qal/kernels.hpp"
#include "qal/oracle.hpp"

namespace qal::cli {

namespace {

using io::Fields;
using io::Json;

const char* const kModeKeys[] = {"local_search", "sweep", "solver", "spectrum", "oracle"};

Mode mode_for_key(const std::string& key) {
  if (key == "local_search") return Mode::local_search;
  if (key == "sweep") return Mode::sweep;
  if (key == "solver") return Mode::solve;
  if (key == "spectrum") return Mode::spectrum;
  return Mode::oracle;
}

std::string key_for_mode(Mode mode) {
  switch (mode) {
    case Mode::local_search: return "local_search";
    case Mode::sweep: return "sweep";
    case Mode::solve: return "solver";
    case Mode::spectrum: return "spectrum";
    case Mode::oracle: return "oracle";
  }
  return "";
}

/// Seeds may sit at the top level or inside the mode block, not both.
void take_block_seed(const Fields& block, ExperimentConfig& c, bool top_level_seed) {
  if (!block.has("seed")) return;
  const auto s = block.seed("seed", 0);
  if (top_level_seed && s != c.seed) throw ConfigError(block.where("seed") + ": conflicts with the top-level seed");
  c.seed = s;
}

void require_nonempty(const std::vector<double>& v, const std::string& where) {
  if (v.empty()) throw ConfigError(where + ": must not be empty");
}

GenerateSpec parse_generate(const Fields& g) {
  g.only({"graph", "n", "distribution", "seed"});
  GenerateSpec spec;
  spec.graph = g.text("graph", spec.graph);
  spec.n = static_cast<int>(g.integer("n", spec.n));
  spec.distribution = parse_distribution(g.text("distribution", to_string(spec.distribution)));
  spec.seed = g.seed("seed", 0);
  try {
    make_graph(spec.graph, spec.n);
  } catch (const Error& e) {
    throw ConfigError(g.path() + ": " + e.what());
  }
  return spec;
}

Json generate_to_json(const GenerateSpec& g) {
  return Json{{"graph", g.graph}, {"n", g.n}, {"distribution", to_string(g.distribution)}, {"seed", g.seed}};
}

void parse_local_search(const Fields& b, ExperimentConfig& c, bool top_seed) {
  b.only({"s_prime", "tau", "ramp", "bath", "samples", "sampling", "start", "prepare", "seed"});
  auto& ls = c.local_search;
  ls.params = io::local_search_from_json(b);
  ls.start = b.spins("start");
  if (b.has("prepare")) {
    const Fields p = b.sub("prepare");
    p.only({"method", "duration"});
    ls.prepare = parse_prepare_method(p.text("method"));
    ls.prepare_duration = p.real("duration", ls.prepare_duration);
    if (!(ls.prepare_duration > 0.0) || !std::isfinite(ls.prepare_duration))
      throw ConfigError(p.where("duration") + ": must be positive");
  }
  take_block_seed(b, c, top_seed);
}

void parse_sweep(const Fields& b, ExperimentConfig& c, bool top_seed) {
  b.only({"s_prime", "tau", "temperature", "ramp", "eta", "omega_c", "samples", "sampling", "start", "perturb",
          "max_points", "seed"});
  auto& sw = c.sweep;
  sw.s_prime = b.reals("s_prime");
  require_nonempty(sw.s_prime, b.where("s_prime"));
  if (b.has("tau")) sw.tau = b.reals("tau");
  require_nonempty(sw.tau, b.where("tau"));
  sw.temperature = b.reals("temperature");
  require_nonempty(sw.temperature, b.where("temperature"));
  sw.ramp = b.real("ramp", sw.ramp);
  sw.eta = b.real("eta", sw.eta);
  sw.omega_c = b.real("omega_c", sw.omega_c);
  sw.samples = b.integer("samples", sw.samples);
  sw.sampling = parse_sampling_mode(b.text("sampling", to_string(sw.sampling)));
  sw.start = b.spins("start");
  sw.max_points = b.integer("max_points", sw.max_points);
  if (sw.max_points < 1) throw ConfigError(b.where("max_points") + ": must be positive");
  for (double s : sw.s_prime)
    if (!(s >= 0.0 && s <= 1.0)) throw ConfigError(b.where("s_prime") + ": values must be in [0, 1]");
  for (double t : sw.tau)
    if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError(b.where("tau") + ": values must be nonnegative");
  for (double T : sw.temperature)
    if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError(b.where("temperature") + ": values must be positive");
  if (!(sw.ramp > 0.0)) throw ConfigError(b.where("ramp") + ": must be positive");
  if (!(sw.eta >= 0.0)) throw ConfigError(b.where("eta") + ": must be nonnegative");
  if (!(sw.omega_c > 0.0)) throw ConfigError(b.where("omega_c") + ": must be positive");
  if (sw.samples < 1) throw ConfigError(b.where("samples") + ": must be positive");
  if (b.has("perturb")) sw.perturb = io::delta_from_json(b.sub("perturb"), sw.start.size());
  take_block_seed(b, c, top_seed);
}

void parse_solver(const Fields& b, ExperimentConfig& c, bool top_seed) {
  b.only({"algorithm", "ladder_s", "population", "sweeps", "seed", "move", "reweight", "classical_temperatures",
          "temperatures"});
  auto& s = c.solver;
  s.algorithm = b.text("algorithm");
  if (s.algorithm != "qpa" && s.algorithm != "qpt" && s.algorithm != "sa" && s.algorithm != "pt")
    throw ConfigError(b.where("algorithm") + ": unknown algorithm '" + s.algorithm +
                      "' (expected qpa, qpt, sa or pt)");
  if (b.has("ladder_s")) s.ladder_s = b.reals("ladder_s");
  s.population = static_cast<int>(b.integer("population", s.population));
  s.sweeps = static_cast<int>(b.integer("sweeps", s.sweeps));
  if (s.population < 1) throw ConfigError(b.where("population") + ": must be at least 1");
  if (s.sweeps < 1) throw ConfigError(b.where("sweeps") + ": must be at least 1");
  s.move = LocalSearchParams{};
  s.move.samples = 1;
  if (b.has("move")) {
    const Fields m = b.sub("move");
    m.only({"tau", "ramp", "bath", "sampling"});
    s.move = io::local_search_from_json(m);
    s.move.samples = 1;
  }
  s.reweight = parse_reweight(b.text("reweight", to_string(s.reweight)));
  if (b.has("classical_temperatures")) s.classical_temperatures = b.reals("classical_temperatures");
  if (b.has("temperatures")) s.temperatures = b.reals("temperatures");

  if (s.algorithm == "qpa" || s.algorithm == "qpt" || (s.algorithm == "pt" && s.temperatures.empty()))
    require_nonempty(s.ladder_s, b.where("ladder_s"));
  if (s.algorithm == "sa") {
    if (s.temperatures.size() != 2 || !(s.temperatures[1] > 0.0) || !(s.temperatures[0] >= s.temperatures[1]))
      throw ConfigError(b.where("temperatures") + ": sa needs [hot, cold] with hot >= cold > 0");
  }
  if (!s.ladder_s.empty()) {
    try {
      ladder(c.schedule, s.ladder_s);
    } catch (const Error& e) {
      throw ConfigError(b.where("ladder_s") + ": " + e.what());
    }
  }
  take_block_seed(b, c, top_seed);
}

MasterOptions master_options(const ExperimentConfig& c, const GlobalOptions& g, bool cache) {
  MasterOptions o;
  o.dt = c.dt;
  o.s_step = c.s_step;
  o.rate_step_limit = c.rate_step_limit;
  o.cache_propagators = cache;
  if (g.max_qubits) o.max_qubits = *g.max_qubits;
  return o;
}

int max_qubits(const GlobalOptions& g) { return g.max_qubits ? *g.max_qubits : default_max_qubits(); }

void check_start(const SpinState& start, const ProblemInstance& problem, const std::string& where) {
  if (start.size() != problem.n())
    throw ConfigError(where + ": length " + std::to_string(start.size()) + " does not match problem n = " +
                      std::to_string(problem.n()));
}

Json base_meta(const std::string& command, const Json& config, std::uint64_t seed) {
  return Json{{"command", command}, {"version", kVersion}, {"config", config}, {"seed", seed}};
}

HybridConfig hybrid_config(const ExperimentConfig& c, const GlobalOptions& g) {
  HybridConfig h;
  h.ladder = ladder(c.schedule, c.solver.ladder_s);
  h.population = c.solver.population;
  h.sweeps = c.solver.sweeps;
  h.move = c.solver.move;
  h.seed = c.seed;
  h.reweight = c.solver.reweight;
  h.classical_temperatures = c.solver.classical_temperatures;
  h.schedule = c.schedule;
  h.integrator = master_options(c, g, true);
  return h;
}

std::string csv_real(double v) { return format_real(v); }

}  // namespace

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::local_search: return "local-search";
    case Mode::sweep: return "sweep";
    case Mode::solve: return "solve";
    case Mode::spectrum: return "spectrum";
    case Mode::oracle: return "oracle";
  }
  return "";
}

HardwareGraph make_graph(const std::string& kind, int n) {
  if (n < 1) throw DomainError("graph size must be positive");
  if (kind == "ring") {
    if (n < 3) throw DomainError("ring needs at least 3 nodes");
    return HardwareGraph::ring(n);
  }
  if (kind == "path") return HardwareGraph::path(n);
  if (kind == "complete") return HardwareGraph::complete(n);
  if (kind == "king") return HardwareGraph::king_subgraph(n);
  throw ConfigError("unknown graph '" + kind + "' (expected ring, path, complete or king)");
}

ProblemInstance generate(const GenerateSpec& spec) {
  return random_instance(make_graph(spec.graph, spec.n), spec.distribution, spec.seed);
}

ExperimentConfig parse_config(const Json& j, const std::string& base_dir) {
  const Fields f(j, "");
  f.only({"problem", "schedule", "integrator", "seed", "output", "local_search", "sweep", "solver", "spectrum",
          "oracle"});
  ExperimentConfig c;
  c.base_dir = base_dir;

  const Fields p = f.sub("problem");
  if (p.has("file")) {
    p.only({"file"});
    c.problem.file = p.text("file");
  } else if (p.has("generate")) {
    p.only({"generate"});
    c.problem.generator = parse_generate(p.sub("generate"));
  } else {
    c.problem.inline_problem = io::problem_from_json(p.json());
  }

  if (f.has("schedule")) c.schedule = io::schedule_from_json(f.sub("schedule"));
  if (f.has("integrator")) {
    const Fields in = f.sub("integrator");
    in.only({"s_step", "dt", "rate_step_limit"});
    c.s_step = in.real("s_step", c.s_step);
    c.dt = in.real("dt", c.dt);
    c.rate_step_limit = in.real("rate_step_limit", c.rate_step_limit);
    if (!(c.s_step > 0.0 && c.s_step <= 1.0)) throw ConfigError("integrator.s_step: must be in (0, 1]");
    if (!(c.dt >= 0.0) || !std::isfinite(c.dt)) throw ConfigError("integrator.dt: must be nonnegative (0 = automatic)");
    if (!(c.rate_step_limit > 0.0 && c.rate_step_limit <= 1.0))
      throw ConfigError("integrator.rate_step_limit: must be in (0, 1]");
  }
  c.seed = f.seed("seed", 0);
  c.output = f.text("output", "");

  std::vector<std::string> present;
  for (const char* key : kModeKeys)
    if (f.has(key)) present.emplace_back(key);
  if (present.size() != 1)
    throw ConfigError("config: exactly one mode block (local_search, sweep, solver, spectrum, oracle) is required, found " +
                      std::to_string(present.size()));
  c.mode = mode_for_key(present.front());
  const bool top_seed = f.has("seed");
  const Fields block = f.sub(present.front());
  switch (c.mode) {
    case Mode::local_search: parse_local_search(block, c, top_seed); break;
    case Mode::sweep: parse_sweep(block, c, top_seed); break;
    case Mode::solve: parse_solver(block, c, top_seed); break;
    case Mode::spectrum: {
      block.only({"s", "levels"});
      c.spectrum.s = block.reals("s");
      require_nonempty(c.spectrum.s, block.where("s"));
      for (double s : c.spectrum.s)
        if (!(s >= 0.0 && s <= 1.0)) throw ConfigError(block.where("s") + ": values must be in [0, 1]");
      c.spectrum.levels = static_cast<int>(block.integer("levels", c.spectrum.levels));
      if (c.spectrum.levels < 1) throw ConfigError(block.where("levels") + ": must be at least 1");
      break;
    }
    case Mode::oracle: {
      block.only({"temperature"});
      if (block.has("temperature")) {
        c.oracle.temperature = block.real("temperature");
        if (!(*c.oracle.temperature > 0.0)) throw ConfigError(block.where("temperature") + ": must be positive");
      }
      break;
    }
  }
  return c;
}

Json config_to_json(const ExperimentConfig& c) {
  Json j;
  if (!c.problem.file.empty())
    j["problem"] = {{"file", c.problem.file}};
  else if (c.problem.generator)
    j["problem"] = {{"generate", generate_to_json(*c.problem.generator)}};
  else
    j["problem"] = io::problem_to_json(*c.problem.inline_problem);
  j["schedule"] = io::schedule_to_json(c.schedule);
  j["integrator"] = {{"s_step", c.s_step}, {"dt", c.dt}, {"rate_step_limit", c.rate_step_limit}};
  j["seed"] = c.seed;
  j["output"] = c.output;
  switch (c.mode) {
    case Mode::local_search: {
      const auto& ls = c.local_search;
      Json b = io::local_search_to_json(ls.params);
      b["start"] = io::spins_to_json(ls.start);
      if (ls.prepare != PrepareMethod::direct)
        b["prepare"] = {{"method", to_string(ls.prepare)}, {"duration", ls.prepare_duration}};
      j["local_search"] = std::move(b);
      break;
    }
    case Mode::sweep: {
      const auto& sw = c.sweep;
      Json b{{"s_prime", sw.s_prime}, {"tau", sw.tau},         {"temperature", sw.temperature},
             {"ramp", sw.ramp},       {"eta", sw.eta},         {"omega_c", sw.omega_c},
             {"samples", sw.samples}, {"sampling", to_string(sw.sampling)}, {"start", io::spins_to_json(sw.start)},
             {"max_points", sw.max_points}};
      if (sw.perturb) b["perturb"] = io::delta_to_json(*sw.perturb);
      j["sweep"] = std::move(b);
      break;
    }
    case Mode::solve: {
      const auto& s = c.solver;
      Json move = io::local_search_to_json(s.move);
      move.erase("s_prime");
      move.erase("samples");
      Json b{{"algorithm", s.algorithm}, {"ladder_s", s.ladder_s}, {"population", s.population},
             {"sweeps", s.sweeps},       {"move", std::move(move)},  {"reweight", to_string(s.reweight)}};
      if (!s.classical_temperatures.empty()) b["classical_temperatures"] = s.classical_temperatures;
      if (!s.temperatures.empty()) b["temperatures"] = s.temperatures;
      j["solver"] = std::move(b);
      break;
    }
    case Mode::spectrum: j["spectrum"] = {{"s", c.spectrum.s}, {"levels", c.spectrum.levels}}; break;
    case Mode::oracle: {
      Json b = Json::object();
      if (c.oracle.temperature) b["temperature"] = *c.oracle.temperature;
      j["oracle"] = std::move(b);
      break;
    }
  }
  return j;
}

ExperimentConfig load_config(const std::string& path) {
  const std::string text = io::read_text(path);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path + ": invalid JSON: " + e.what());
  }
  return parse_config(j, std::filesystem::path(path).parent_path().string());
}

ProblemInstance load_problem(const ExperimentConfig& c) {
  if (c.problem.inline_problem) return *c.problem.inline_problem;
  if (c.problem.generator) return generate(*c.problem.generator);
  std::filesystem::path p(c.problem.file);
  if (p.is_relative() && !c.base_dir.empty()) p = std::filesystem::path(c.base_dir) / p;
  const std::string text = io::read_text(p.string());
  try {
    return io::problem_from_json(Json::parse(text));
  } catch (const Json::parse_error& e) {
    throw ConfigError(p.string() + ": invalid JSON: " + e.what());
  }
}

CommandOutput cmd_generate(const GenerateSpec& spec) {
  const ProblemInstance problem = generate(spec);
  CommandOutput out;
  out.data = io::problem_text(problem);
  out.meta = base_meta("generate", generate_to_json(spec), spec.seed);
  std::ostringstream r;
  r << "n " << problem.n() << " edges " << problem.graph().edges().size() << " checksum " << std::hex
    << io::fnv1a(out.data) << '\n';
  out.report = r.str();
  return out;
}

CommandOutput cmd_local_search(const ExperimentConfig& c, const GlobalOptions& g) {
  if (c.mode != Mode::local_search) throw ConfigError("config: local-search needs a local_search block");
  const ProblemInstance problem = load_problem(c);
  const auto& ls = c.local_search;
  check_start(ls.start, problem, "local_search.start");
  LocalSearchParams params = ls.params;
  params.seed = c.seed;
  const MasterOptions mo = master_options(c, g, false);
  const LocalSearcher searcher(problem, c.schedule, params.bath, mo);

  Json data;
  SampleSet set;
  if (ls.prepare == PrepareMethod::direct) {
    set = searcher.run(ls.start, params);
    data = io::sample_set_to_json(set, params);
  } else {
    const Preparation prep =
        prepare_initial(ls.start, ls.prepare, problem.graph(), c.schedule, ls.prepare_duration, params.bath, mo);
    set = run_prepared(searcher, ls.start, prep, params);
    data = io::sample_set_to_json(set, params);
    data["header"]["preparation"] = {
        {"method", to_string(ls.prepare)}, {"duration", ls.prepare_duration}, {"fidelity", prep.fidelity}};
  }
  CommandOutput out;
  out.data = data.dump(2) + "\n";
  out.meta = base_meta("local-search", config_to_json(c), c.seed);
  std::ostringstream r;
  r << "samples " << set.total() << " distinct " << set.outcomes.size() << " mean_hamming "
    << format_real(mean_hamming(set)) << " mean_energy " << format_real(mean_energy(set)) << " p_start "
    << format_real(probability_of(set, set.start)) << '\n';
  out.report = r.str();
  return out;
}

CommandOutput cmd_sweep(const ExperimentConfig& c, const GlobalOptions& g) {
  if (c.mode != Mode::sweep) throw ConfigError("config: sweep needs a sweep block");
  const ProblemInstance baseline = load_problem(c);
  const auto& sw = c.sweep;
  check_start(sw.start, baseline, "sweep.start");

  auto sorted = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  const auto s_grid = sorted(sw.s_prime);
  const auto tau_grid = sorted(sw.tau);
  const auto T_grid = sorted(sw.temperature);
  std::vector<ProblemInstance> instances{baseline};
  std::vector<std::string> labels{"baseline"};
  if (sw.perturb) {
    try {
      instances.push_back(apply_delta(baseline, *sw.perturb));
    } catch (const Error& e) {
      throw ConfigError(std::string("sweep.perturb: ") + e.what());
    }
    labels.emplace_back("perturbed");
  }
  const double points = static_cast<double>(s_grid.size()) * static_cast<double>(tau_grid.size()) *
                        static_cast<double>(T_grid.size()) * static_cast<double>(instances.size());
  if (points > static_cast<double>(sw.max_points))
    throw ResourceError("sweep grid has " + format_real(points) + " points, above max_points = " +
                        std::to_string(sw.max_points));

  std::optional<oracle::Spectrum> truth;
  if (baseline.n() <= oracle::kEnumerationCap) truth = oracle::brute_force(baseline);
  const MasterOptions mo = master_options(c, g, false);

  struct Row {
    double mean_hamming, mean_energy, p_ground, p_start;
  };
  const std::size_t per_group = s_grid.size() * tau_grid.size();
  const std::size_t groups = instances.size() * T_grid.size();
  std::vector<Row> rows(groups * per_group);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t gi = 0; gi < static_cast<std::ptrdiff_t>(groups); ++gi) {
    try {
      const auto inst = static_cast<std::size_t>(gi) / T_grid.size();
      const auto ti = static_cast<std::size_t>(gi) % T_grid.size();
      BathParams bath;
      bath.temperature = T_grid[ti];
      bath.eta = sw.eta;
      bath.omega_c = sw.omega_c;
      const LocalSearcher searcher(instances[inst], c.schedule, bath, mo);
      for (std::size_t si = 0; si < s_grid.size(); ++si)
        for (std::size_t ui = 0; ui < tau_grid.size(); ++ui) {
          const auto dist = searcher.outcome_distribution(sw.start, s_grid[si], tau_grid[ui], sw.ramp);
          // outcomes are always scored on the baseline instance
          const SampleSet set = sample_outcomes(dist, sw.start, baseline, sw.samples, c.seed, sw.sampling);
          double ground = std::numeric_limits<double>::quiet_NaN();
          if (truth) {
            std::int64_t hits = 0;
            for (const auto& o : set.outcomes)
              if (truth->is_ground(o.state)) hits += o.count;
            ground = static_cast<double>(hits) / static_cast<double>(set.total());
          }
          rows[static_cast<std::size_t>(gi) * per_group + si * tau_grid.size() + ui] = {
              mean_hamming(set), mean_energy(set), ground, probability_of(set, sw.start)};
        }
    } catch (...) {
#pragma omp critical(qal_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::ostringstream data;
  data << "instance,s_prime,tau,T,statistic,value\n";
  for (std::size_t inst = 0; inst < instances.size(); ++inst)
    for (std::size_t si = 0; si < s_grid.size(); ++si)
      for (std::size_t ui = 0; ui < tau_grid.size(); ++ui)
        for (std::size_t ti = 0; ti < T_grid.size(); ++ti) {
          const Row& row = rows[(inst * T_grid.size() + ti) * per_group + si * tau_grid.size() + ui];
          const std::string key = labels[inst] + ',' + csv_real(s_grid[si]) + ',' + csv_real(tau_grid[ui]) + ',' +
                                  csv_real(T_grid[ti]) + ',';
          data << key << "mean_hamming," << csv_real(row.mean_hamming) << '\n';
          data << key << "mean_energy," << csv_real(row.mean_energy) << '\n';
          data << key << "p_ground," << csv_real(row.p_ground) << '\n';
          data << key << "p_start," << csv_real(row.p_start) << '\n';
        }
  CommandOutput out;
  out.data = data.str();
  out.meta = base_meta("sweep", config_to_json(c), c.seed);
  out.report = "grid points " + format_real(points) + "\n";
  return out;
}

CommandOutput cmd_solve(const ExperimentConfig& c, const GlobalOptions& g) {
  if (c.mode != Mode::solve) throw ConfigError("config: solve needs a solver block");
  const ProblemInstance problem = load_problem(c);
  const auto& s = c.solver;
  SolveResult result;
  if (s.algorithm == "qpa" || s.algorithm == "qpt") {
    const HybridConfig h = hybrid_config(c, g);
    result = s.algorithm == "qpa" ? q_population_annealing(problem, h) : q_parallel_tempering(problem, h);
  } else if (s.algorithm == "sa") {
    result = classical_sa(problem, s.temperatures[0], s.temperatures[1], s.sweeps, c.seed);
  } else {
    std::vector<double> temps = s.temperatures;
    if (temps.empty())
      for (const auto& p : ladder(c.schedule, s.ladder_s)) {
        if (p.infinite()) throw ConfigError("solver.ladder_s: pt needs finite T_eff on every rung");
        temps.push_back(p.T_eff);
      }
    try {
      result = classical_pt(problem, temps, s.sweeps, c.seed);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("solver.temperatures: ") + e.what());
    }
  }

  CommandOutput out;
  out.data = io::solve_result_csv(result);
  out.meta = base_meta("solve", config_to_json(c), c.seed);
  std::ostringstream r;
  r << result.algorithm << " best " << result.best_state.to_string() << " energy " << format_real(result.best_energy)
    << " moves " << result.moves << '\n';
  if (g.verify) {
    if (problem.n() > oracle::kEnumerationCap) {
      r << "verify skipped: n = " << problem.n() << " exceeds the enumeration cap\n";
    } else {
      const double truth = oracle::ground_energy(problem);
      const double tol = 1e-9 * std::max(1.0, problem.coefficient_scale() * problem.n());
      out.meta["verify"] = {{"oracle_ground_energy", truth}, {"matched", std::abs(result.best_energy - truth) <= tol}};
      if (std::abs(result.best_energy - truth) <= tol) {
        r << "verify ok: oracle ground energy " << format_real(truth) << '\n';
      } else {
        r << "verify MISMATCH: solver " << format_real(result.best_energy) << " vs oracle " << format_real(truth)
          << " (diff " << format_real(result.best_energy - truth) << ")\n";
        out.exit_code = 3;
      }
    }
  }
  out.report = r.str();
  return out;
}

CommandOutput cmd_spectrum(const ExperimentConfig& c, const GlobalOptions& g) {
  if (c.mode != Mode::spectrum) throw ConfigError("config: spectrum needs a spectrum block");
  const ProblemInstance problem = load_problem(c);
  const auto rows = spectrum_trace(problem, c.schedule, c.spectrum.s, c.spectrum.levels, max_qubits(g));
  std::ostringstream data;
  data << 's';
  for (int k = 0; k < c.spectrum.levels; ++k) data << ",lambda_" << k;
  data << '\n';
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) data << (k ? "," : "") << csv_real(row[k]);
    data << '\n';
  }
  CommandOutput out;
  out.data = data.str();
  out.meta = base_meta("spectrum", config_to_json(c), c.seed);
  out.report = "rows " + std::to_string(rows.size()) + " levels " + std::to_string(c.spectrum.levels) + "\n";
  return out;
}

CommandOutput cmd_oracle(const ExperimentConfig& c, const GlobalOptions&) {
  if (c.mode != Mode::oracle) throw ConfigError("config: oracle needs an oracle block");
  const ProblemInstance problem = load_problem(c);
  const oracle::Spectrum spectrum = oracle::brute_force(problem);
  std::ostringstream data;
  if (c.oracle.temperature) {
    const auto p = oracle::gibbs_classical(problem, *c.oracle.temperature);
    data << "state,energy,probability\n";
    for (const auto& e : spectrum.entries)
      data << SpinState::from_index(spectrum.n, e.index).to_string() << ',' << csv_real(e.energy) << ','
           << csv_real(p[e.index]) << '\n';
  } else {
    data << oracle::spectrum_csv(spectrum);
  }
  CommandOutput out;
  out.data = data.str();
  out.meta = base_meta("oracle", config_to_json(c), c.seed);
  std::ostringstream r;
  r << "ground energy " << format_real(spectrum.ground_energy) << " degeneracy " << spectrum.ground_set.size();
  for (auto idx : spectrum.ground_set) r << ' ' << SpinState::from_index(spectrum.n, idx).to_string();
  r << '\n';
  out.report = r.str();
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum-annealer local-search lab", "qal"};
  GlobalOptions g;
  std::uint64_t seed_value = 0;
  int max_qubits_value = 0;
  app.add_option("--config", g.config, "Experiment config (JSON)");
  app.add_option("--out", g.out, "Output data file; metadata goes to <out>.meta.json");
  auto* seed_opt = app.add_option("--seed", seed_value, "Master seed (overrides the config)");
  app.add_option("--threads", g.threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
  auto* verify_opt = app.add_flag("--verify", g.verify, "Check the solve result against the brute-force oracle");
  auto* cap_opt = app.add_option("--max-qubits", max_qubits_value, "Dense simulation cap (default: QAL_MAX_QUBITS or 12)")
                      ->check(CLI::Range(1, 30));
  app.require_subcommand(1);

  GenerateSpec gen;
  std::string dist = "pm_one";
  auto* generate_cmd = app.add_subcommand("generate", "Write a random instance");
  generate_cmd->add_option("--graph", gen.graph, "ring | path | complete | king")
      ->check(CLI::IsMember({"ring", "path", "complete", "king"}));
  generate_cmd->add_option("--n", gen.n, "Number of spins")->check(CLI::PositiveNumber);
  generate_cmd->add_option("--dist", dist, "pm_one | uniform_range")->check(CLI::IsMember({"pm_one", "uniform_range"}));
  std::vector<std::pair<CLI::App*, Mode>> modes = {
      {app.add_subcommand("local-search", "Run one reverse-anneal local search"), Mode::local_search},
      {app.add_subcommand("sweep", "Grid of local searches over s', tau and T"), Mode::sweep},
      {app.add_subcommand("solve", "Hybrid or classical solver"), Mode::solve},
      {app.add_subcommand("spectrum", "Low-lying spectrum along s"), Mode::spectrum},
      {app.add_subcommand("oracle", "Brute-force classical spectrum"), Mode::oracle}};
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  const auto started = std::chrono::steady_clock::now();
  try {
    if (*seed_opt) g.seed = seed_value;
    if (*cap_opt) g.max_qubits = max_qubits_value;
    if (g.threads > 0) kernels::set_threads(g.threads);

    CommandOutput result;
    std::string out_path = g.out;
    if (generate_cmd->parsed()) {
      if (*verify_opt) throw ConfigError("--verify applies to solve only");
      gen.distribution = parse_distribution(dist);
      if (g.seed) gen.seed = *g.seed;
      make_graph(gen.graph, gen.n);
      result = cmd_generate(gen);
    } else {
      if (g.config.empty()) throw ConfigError("--config is required");
      ExperimentConfig c = load_config(g.config);
      if (g.seed) c.seed = *g.seed;
      if (!g.out.empty()) c.output = g.out;
      out_path = c.output;
      Mode wanted = Mode::local_search;
      for (const auto& [sub, m] : modes)
        if (sub->parsed()) wanted = m;
      if (wanted != c.mode)
        throw ConfigError("config: the " + to_string(wanted) + " command needs a '" + key_for_mode(wanted) +
                          "' block, found '" + key_for_mode(c.mode) + "'");
      if (*verify_opt && wanted != Mode::solve) throw ConfigError("--verify applies to solve only");
      switch (wanted) {
        case Mode::local_search: result = cmd_local_search(c, g); break;
        case Mode::sweep: result = cmd_sweep(c, g); break;
        case Mode::solve: result = cmd_solve(c, g); break;
        case Mode::spectrum: result = cmd_spectrum(c, g); break;
        case Mode::oracle: result = cmd_oracle(c, g); break;
      }
    }
    if (out_path.empty()) throw ConfigError("--out (or config output) is required");
    io::write_text(out_path, result.data);
    result.meta["threads"] = kernels::max_threads();
    result.meta["max_qubits"] = max_qubits(g);
    result.meta["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    io::write_text(out_path + ".meta.json", result.meta.dump(2) + "\n");
    out << result.report;
    return result.exit_code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace qal::cli
