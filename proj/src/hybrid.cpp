#include "qal/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>

#include "qal/error.hpp"
#include "qal/rng.hpp"

namespace qal {

namespace {

constexpr std::uint64_t kInitTag = 0x1a17;
constexpr std::uint64_t kResampleTag = 0x7e5a;
constexpr std::uint64_t kSwapTag = 0x5aa9;

SpinState random_state(int n, Rng& rng) {
  std::vector<int> s(static_cast<std::size_t>(n));
  for (auto& v : s) v = rng.spin();
  return SpinState(std::move(s));
}

struct Neighbour {
  int j;
  double J;
};

std::vector<std::vector<Neighbour>> adjacency(const ProblemInstance& problem) {
  std::vector<std::vector<Neighbour>> adj(static_cast<std::size_t>(problem.n()));
  const auto& edges = problem.graph().edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    adj[static_cast<std::size_t>(edges[k].i)].push_back({edges[k].j, problem.J()[k]});
    adj[static_cast<std::size_t>(edges[k].j)].push_back({edges[k].i, problem.J()[k]});
  }
  return adj;
}

/// Metropolis chain with incremental energy.
class Chain {
 public:
  Chain(const ProblemInstance& problem, const std::vector<std::vector<Neighbour>>& adj, std::uint64_t seed)
      : problem_(problem), adj_(adj), rng_(seed) {
    spins_ = random_state(problem.n(), rng_).spins();
    energy_ = energy(SpinState(spins_), problem);
  }

  void sweep(double temperature) {
    for (int i = 0; i < problem_.n(); ++i) {
      double field = problem_.h()[static_cast<std::size_t>(i)];
      for (const auto& nb : adj_[static_cast<std::size_t>(i)]) field += nb.J * spins_[static_cast<std::size_t>(nb.j)];
      const double dE = 2.0 * spins_[static_cast<std::size_t>(i)] * field;
      if (metropolis_accept(dE, temperature, rng_.uniform())) {
        spins_[static_cast<std::size_t>(i)] = -spins_[static_cast<std::size_t>(i)];
        energy_ += dE;
      }
    }
    // resynchronise to the exact energy so cached values never drift
    energy_ = energy(SpinState(spins_), problem_);
  }

  double energy_value() const { return energy_; }
  SpinState state() const { return SpinState(spins_); }
  void swap_with(Chain& other) {
    std::swap(spins_, other.spins_);
    std::swap(energy_, other.energy_);
  }

 private:
  const ProblemInstance& problem_;
  const std::vector<std::vector<Neighbour>>& adj_;
  Rng rng_;
  std::vector<int> spins_;
  double energy_ = 0.0;
};

struct Tracker {
  SpinState best_state;
  double best_energy = std::numeric_limits<double>::infinity();

  GenerationStats observe(int generation, const std::vector<SpinState>& states, const std::vector<double>& energies) {
    GenerationStats g;
    g.generation = generation;
    g.min_energy = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (std::size_t k = 0; k < energies.size(); ++k) {
      sum += energies[k];
      g.min_energy = std::min(g.min_energy, energies[k]);
      if (energies[k] < best_energy) {
        best_energy = energies[k];
        best_state = states[k];
      }
    }
    g.mean_energy = sum / static_cast<double>(energies.size());
    g.best_energy = best_energy;
    return g;
  }
};

void check_ladder_order(const HybridConfig& c) {
  for (std::size_t r = 1; r < c.ladder.size(); ++r)
    if (!(c.ladder[r].T_eff < c.ladder[r - 1].T_eff))
      throw ConfigError("ladder: T_eff must be strictly decreasing with rung (rung " + std::to_string(r) + ")");
  for (std::size_t r = 1; r < c.ladder.size(); ++r)
    if (c.ladder[r].infinite()) throw ConfigError("ladder: only the first rung may have infinite T_eff");
}

/// Moves every member with one single-sample local search at its rung.
/// Member k uses seed derive_seed(master, {generation, k}).
void move_members(const LocalSearcher& searcher, const HybridConfig& config, const std::vector<int>& rungs,
                  int generation, std::vector<SpinState>& states, std::vector<double>& energies) {
  // fill the caches serially so the parallel loop only reads them
  std::vector<int> distinct(rungs);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  for (int r : distinct)
    searcher.prepare(config.ladder[static_cast<std::size_t>(r)].s_prime, config.move.tau, config.move.ramp);

  std::exception_ptr failure;
  const auto count = static_cast<std::ptrdiff_t>(states.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    try {
      LocalSearchParams params = config.move;
      params.s_prime = config.ladder[static_cast<std::size_t>(rungs[static_cast<std::size_t>(k)])].s_prime;
      params.samples = 1;
      params.seed = derive_seed(config.seed, {static_cast<std::uint64_t>(generation), static_cast<std::uint64_t>(k)});
      const SampleSet set = searcher.run(states[static_cast<std::size_t>(k)], params);
      states[static_cast<std::size_t>(k)] = set.outcomes.front().state;
      energies[static_cast<std::size_t>(k)] = set.outcomes.front().energy;
    } catch (...) {
#pragma omp critical(qal_hybrid_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

Reweight parse_reweight(const std::string& name) {
  if (name == "t_eff") return Reweight::t_eff;
  if (name == "classical") return Reweight::classical;
  throw ConfigError("unknown reweight '" + name + "' (expected t_eff or classical)");
}

std::string to_string(Reweight r) { return r == Reweight::t_eff ? "t_eff" : "classical"; }

void HybridConfig::validate_population_annealing() const {
  if (ladder.empty()) throw ConfigError("ladder: at least one rung is required");
  if (population < 1) throw ConfigError("population: must be at least 1");
  check_ladder_order(*this);
  if (reweight == Reweight::classical) {
    if (classical_temperatures.size() != ladder.size())
      throw ConfigError("classical_temperatures: need one temperature per rung");
    for (std::size_t r = 0; r < classical_temperatures.size(); ++r) {
      const double T = classical_temperatures[r];
      if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("classical_temperatures: must be positive and finite");
      if (r > 0 && !(T < classical_temperatures[r - 1]))
        throw ConfigError("classical_temperatures: must be strictly decreasing");
    }
  }
  try {
    move.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("move: ") + e.what());
  }
}

void HybridConfig::validate_parallel_tempering() const {
  if (ladder.size() < 2) throw ConfigError("ladder: parallel tempering needs at least two rungs");
  if (sweeps < 1) throw ConfigError("sweeps: must be at least 1");
  for (const auto& p : ladder)
    if (p.infinite()) throw ConfigError("ladder: infinite T_eff rung is not allowed for parallel tempering");
  check_ladder_order(*this);
  try {
    move.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("move: ") + e.what());
  }
}

bool metropolis_accept(double dE, double temperature, double u) {
  if (dE <= 0.0) return true;
  return u < std::exp(-dE / temperature);
}

double swap_probability(double beta_i, double E_i, double beta_j, double E_j) {
  const double x = (beta_i - beta_j) * (E_i - E_j);
  return x >= 0.0 ? 1.0 : std::exp(x);
}

std::vector<double> reweight(const std::vector<double>& energies, double d_beta) {
  if (energies.empty()) throw DomainError("reweight: no energies");
  const double e_min = *std::min_element(energies.begin(), energies.end());
  std::vector<double> w(energies.size());
  double z = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) z += w[k] = std::exp(-d_beta * (energies[k] - e_min));
  for (auto& v : w) v /= z;
  return w;
}

std::vector<int> systematic_resample(const std::vector<double>& weights, int count, double u) {
  if (weights.empty() || count < 1) throw DomainError("systematic_resample: empty input");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(count));
  double cumulative = weights[0] / total;
  std::size_t k = 0;
  for (int m = 0; m < count; ++m) {
    const double point = (m + u) / count;
    while (point >= cumulative && k + 1 < weights.size()) cumulative += weights[++k] / total;
    out.push_back(static_cast<int>(k));
  }
  return out;
}

std::vector<double> geometric_temperatures(double hot, double cold, int count) {
  if (!(hot > 0.0) || !(cold > 0.0) || !(cold <= hot)) throw DomainError("geometric_temperatures: need hot >= cold > 0");
  if (count < 1) throw DomainError("geometric_temperatures: count must be positive");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k)
    out[static_cast<std::size_t>(k)] = count == 1 ? cold : hot * std::pow(cold / hot, static_cast<double>(k) / (count - 1));
  return out;
}

SolveResult q_population_annealing(const ProblemInstance& problem, const HybridConfig& config) {
  config.validate_population_annealing();
  return q_population_annealing(LocalSearcher(problem, config.schedule, config.move.bath, config.integrator), config);
}

SolveResult q_population_annealing(const LocalSearcher& searcher, const HybridConfig& config) {
  config.validate_population_annealing();
  if (!(searcher.engine().bath() == config.move.bath)) throw ConfigError("move.bath: differs from the searcher's bath");
  const ProblemInstance& problem = searcher.problem();
  const auto pop = static_cast<std::size_t>(config.population);

  Rng init(derive_seed(config.seed, {kInitTag}));
  std::vector<SpinState> states;
  for (std::size_t k = 0; k < pop; ++k) states.push_back(random_state(problem.n(), init));
  std::vector<double> energies(pop);

  auto beta = [&](std::size_t r) {
    if (config.reweight == Reweight::classical) return 1.0 / config.classical_temperatures[r];
    return config.ladder[r].beta();
  };

  SolveResult result;
  result.algorithm = "qpa";
  Tracker tracker;
  for (std::size_t r = 0; r < config.ladder.size(); ++r) {
    move_members(searcher, config, std::vector<int>(pop, static_cast<int>(r)), static_cast<int>(r), states, energies);
    result.moves += static_cast<std::int64_t>(pop);
    GenerationStats g = tracker.observe(static_cast<int>(r), states, energies);
    g.unique_ancestors = static_cast<int>(pop);
    if (r + 1 < config.ladder.size()) {
      const auto w = reweight(energies, beta(r + 1) - beta(r));
      Rng u(derive_seed(config.seed, {kResampleTag, r}));
      const auto parents = systematic_resample(w, config.population, u.uniform());
      std::vector<SpinState> next;
      std::vector<double> next_e;
      for (int p : parents) {
        next.push_back(states[static_cast<std::size_t>(p)]);
        next_e.push_back(energies[static_cast<std::size_t>(p)]);
      }
      g.unique_ancestors = 1;
      for (std::size_t k = 1; k < parents.size(); ++k)
        if (parents[k] != parents[k - 1]) ++g.unique_ancestors;
      states = std::move(next);
      energies = std::move(next_e);
    }
    result.generations.push_back(g);
  }
  result.best_state = tracker.best_state;
  result.best_energy = tracker.best_energy;
  result.final_states = states;
  return result;
}

SolveResult q_parallel_tempering(const ProblemInstance& problem, const HybridConfig& config) {
  config.validate_parallel_tempering();
  return q_parallel_tempering(LocalSearcher(problem, config.schedule, config.move.bath, config.integrator), config);
}

SolveResult q_parallel_tempering(const LocalSearcher& searcher, const HybridConfig& config) {
  config.validate_parallel_tempering();
  if (!(searcher.engine().bath() == config.move.bath)) throw ConfigError("move.bath: differs from the searcher's bath");
  const ProblemInstance& problem = searcher.problem();
  const std::size_t R = config.ladder.size();

  Rng init(derive_seed(config.seed, {kInitTag}));
  std::vector<SpinState> states;
  for (std::size_t k = 0; k < R; ++k) states.push_back(random_state(problem.n(), init));
  std::vector<double> energies(R);
  std::vector<int> rungs(R);
  std::iota(rungs.begin(), rungs.end(), 0);

  SolveResult result;
  result.algorithm = "qpt";
  Tracker tracker;
  for (int sweep = 0; sweep < config.sweeps; ++sweep) {
    move_members(searcher, config, rungs, sweep, states, energies);
    result.moves += static_cast<std::int64_t>(R);
    GenerationStats g = tracker.observe(sweep, states, energies);
    Rng rng(derive_seed(config.seed, {kSwapTag, static_cast<std::uint64_t>(sweep)}));
    for (std::size_t i = static_cast<std::size_t>(sweep % 2); i + 1 < R; i += 2) {
      const double p = swap_probability(config.ladder[i].beta(), energies[i], config.ladder[i + 1].beta(),
                                        energies[i + 1]);
      ++g.swaps_attempted;
      if (rng.uniform() < p) {
        ++g.swaps_accepted;
        std::swap(states[i], states[i + 1]);
        std::swap(energies[i], energies[i + 1]);
      }
    }
    result.generations.push_back(g);
  }
  result.best_state = tracker.best_state;
  result.best_energy = tracker.best_energy;
  result.final_states = states;
  return result;
}

SolveResult classical_sa(const ProblemInstance& problem, const std::vector<double>& temperatures,
                         std::uint64_t seed) {
  if (temperatures.empty()) throw DomainError("classical_sa: empty temperature schedule");
  for (std::size_t k = 0; k < temperatures.size(); ++k) {
    if (!(temperatures[k] > 0.0)) throw DomainError("classical_sa: temperatures must be positive");
    if (k > 0 && temperatures[k] > temperatures[k - 1]) throw DomainError("classical_sa: schedule must not heat up");
  }
  const auto adj = adjacency(problem);
  Chain chain(problem, adj, derive_seed(seed, {kInitTag}));
  SolveResult result;
  result.algorithm = "sa";
  Tracker tracker;
  for (std::size_t k = 0; k < temperatures.size(); ++k) {
    chain.sweep(temperatures[k]);
    ++result.moves;
    result.generations.push_back(tracker.observe(static_cast<int>(k), {chain.state()}, {chain.energy_value()}));
  }
  result.best_state = tracker.best_state;
  result.best_energy = tracker.best_energy;
  result.final_states = {chain.state()};
  return result;
}

SolveResult classical_sa(const ProblemInstance& problem, double hot, double cold, int sweeps, std::uint64_t seed) {
  return classical_sa(problem, geometric_temperatures(hot, cold, sweeps), seed);
}

SolveResult classical_pt(const ProblemInstance& problem, const std::vector<double>& temperatures, int sweeps,
                         std::uint64_t seed, bool swaps) {
  if (temperatures.size() < 2) throw DomainError("classical_pt: need at least two temperatures");
  for (std::size_t k = 0; k < temperatures.size(); ++k) {
    if (!(temperatures[k] > 0.0) || !std::isfinite(temperatures[k]))
      throw DomainError("classical_pt: temperatures must be positive and finite");
    if (k > 0 && !(temperatures[k] < temperatures[k - 1]))
      throw DomainError("classical_pt: temperatures must be strictly decreasing");
  }
  if (sweeps < 1) throw DomainError("classical_pt: sweeps must be positive");
  const auto adj = adjacency(problem);
  const std::size_t R = temperatures.size();
  std::vector<Chain> chains;
  for (std::size_t r = 0; r < R; ++r) chains.emplace_back(problem, adj, derive_seed(seed, {kInitTag, r}));

  SolveResult result;
  result.algorithm = "pt";
  Tracker tracker;
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    std::vector<SpinState> states;
    std::vector<double> energies;
    for (std::size_t r = 0; r < R; ++r) {
      chains[r].sweep(temperatures[r]);
      states.push_back(chains[r].state());
      energies.push_back(chains[r].energy_value());
    }
    result.moves += static_cast<std::int64_t>(R);
    GenerationStats g = tracker.observe(sweep, states, energies);
    if (swaps) {
      Rng rng(derive_seed(seed, {kSwapTag, static_cast<std::uint64_t>(sweep)}));
      for (std::size_t i = static_cast<std::size_t>(sweep % 2); i + 1 < R; i += 2) {
        const double p = swap_probability(1.0 / temperatures[i], chains[i].energy_value(), 1.0 / temperatures[i + 1],
                                          chains[i + 1].energy_value());
        ++g.swaps_attempted;
        if (rng.uniform() < p) {
          ++g.swaps_accepted;
          chains[i].swap_with(chains[i + 1]);
        }
      }
    }
    result.generations.push_back(g);
  }
  result.best_state = tracker.best_state;
  result.best_energy = tracker.best_energy;
  for (const auto& c : chains) result.final_states.push_back(c.state());
  return result;
}

}  // namespace qal
