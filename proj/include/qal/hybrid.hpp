#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qal/eff_temp.hpp"
#include "qal/ising.hpp"
#include "qal/local_search.hpp"
#include "qal/master_equation.hpp"
#include "qal/schedule.hpp"

namespace qal {

/// Temperatures used by population-annealing reweighting.
enum class Reweight {
  t_eff,      ///< the ladder's effective temperatures
  classical,  ///< HybridConfig::classical_temperatures, one per rung
};

Reweight parse_reweight(const std::string& name);
std::string to_string(Reweight r);

struct Replica {
  SpinState state;
  int rung = 0;
  double energy = 0.0;
};

struct HybridConfig {
  std::vector<EffTempPoint> ladder;  ///< hot to cold
  int population = 64;               ///< population annealing only
  int sweeps = 50;                   ///< parallel tempering only
  LocalSearchParams move;            ///< s_prime, samples and seed are set per move
  std::uint64_t seed = 0;
  Reweight reweight = Reweight::t_eff;
  std::vector<double> classical_temperatures;
  Schedule schedule;
  MasterOptions integrator;

  /// ConfigError with a field-level message.
  void validate_population_annealing() const;
  void validate_parallel_tempering() const;
};

struct GenerationStats {
  int generation = 0;
  double min_energy = 0.0;
  double mean_energy = 0.0;
  double best_energy = 0.0;  ///< best seen so far
  int unique_ancestors = 0;  ///< population annealing: distinct parents kept by resampling
  int swaps_attempted = 0;   ///< tempering
  int swaps_accepted = 0;
};

struct SolveResult {
  std::string algorithm;
  SpinState best_state;
  double best_energy = 0.0;
  std::vector<GenerationStats> generations;
  std::int64_t moves = 0;  ///< local-search invocations, or Metropolis sweeps for baselines
  std::vector<SpinState> final_states;
};

/// Metropolis rule: accept if dE <= 0, else if u < exp(-dE / T).
bool metropolis_accept(double dE, double temperature, double u);

/// min(1, exp((beta_i - beta_j)(E_i - E_j))). Symmetric in (i, j).
double swap_probability(double beta_i, double E_i, double beta_j, double E_j);

/// Normalised weights exp(-d_beta (E - E_min)).
std::vector<double> reweight(const std::vector<double>& energies, double d_beta);

/// Systematic resampling of `count` ancestors with a single uniform u in
/// [0, 1). Returns ascending ancestor indices.
std::vector<int> systematic_resample(const std::vector<double>& weights, int count, double u);

/// Geometric ladder from hot to cold, inclusive, `count` >= 1 points.
std::vector<double> geometric_temperatures(double hot, double cold, int count);

SolveResult q_population_annealing(const ProblemInstance& problem, const HybridConfig& config);
SolveResult q_parallel_tempering(const ProblemInstance& problem, const HybridConfig& config);

/// Same, reusing a searcher's caches (its bath must match config.move.bath;
/// config.schedule and config.integrator are ignored).
SolveResult q_population_annealing(const LocalSearcher& searcher, const HybridConfig& config);
SolveResult q_parallel_tempering(const LocalSearcher& searcher, const HybridConfig& config);

/// One Metropolis sweep (sites in order) per temperature in the list, which
/// must be positive and non-increasing.
SolveResult classical_sa(const ProblemInstance& problem, const std::vector<double>& temperatures,
                         std::uint64_t seed);
/// Geometric schedule from `hot` to `cold` over `sweeps` sweeps.
SolveResult classical_sa(const ProblemInstance& problem, double hot, double cold, int sweeps, std::uint64_t seed);

/// One replica per temperature (>= 2, finite, positive, strictly
/// decreasing). Swap passes alternate even/odd pairs.
SolveResult classical_pt(const ProblemInstance& problem, const std::vector<double>& temperatures, int sweeps,
                         std::uint64_t seed, bool swaps = true);

}  // namespace qal
