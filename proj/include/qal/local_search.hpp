#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qal/ising.hpp"
#include "qal/master_equation.hpp"
#include "qal/quantum_sim.hpp"
#include "qal/schedule.hpp"

namespace qal {

enum class SamplingMode {
  multinomial,  ///< i.i.d. draws from the exact outcome distribution
  apportion,    ///< deterministic largest-remainder counts, seed unused
};

SamplingMode parse_sampling_mode(const std::string& name);
std::string to_string(SamplingMode mode);

struct LocalSearchParams {
  double s_prime = 0.7;
  double tau = 0.0;
  double ramp = 10.0;  ///< time per unit of s
  BathParams bath;
  std::int64_t samples = 1000;
  std::uint64_t seed = 0;
  SamplingMode sampling = SamplingMode::multinomial;

  void validate() const;
};

struct Outcome {
  SpinState state;
  double energy = 0.0;
  int hamming = 0;  ///< from the start state
  std::int64_t count = 0;
};

/// Distinct outcomes in ascending basis-index order.
struct SampleSet {
  SpinState start;
  std::vector<Outcome> outcomes;
  std::uint64_t seed = 0;

  std::int64_t total() const;
};

double mean_hamming(const SampleSet& set);
double mean_energy(const SampleSet& set);
/// Fraction of samples equal to `state`.
double probability_of(const SampleSet& set, const SpinState& state);

/// Draws from a distribution over basis states and records energies under
/// `scoring` (normally the problem the search ran on).
SampleSet sample_outcomes(const std::vector<double>& distribution, const SpinState& start,
                          const ProblemInstance& scoring, std::int64_t samples, std::uint64_t seed,
                          SamplingMode mode);

/// Reverse-anneal cycles on one problem under one bath, sharing the cached
/// spectral data across calls.
class LocalSearcher {
 public:
  LocalSearcher(ProblemInstance problem, Schedule schedule, BathParams bath, MasterOptions options = {});

  const ProblemInstance& problem() const noexcept { return engine_.problem(); }
  const MasterEquation& engine() const noexcept { return engine_; }

  /// Classical readout distribution after one cycle from `start`.
  std::vector<double> outcome_distribution(const SpinState& start, double s_prime, double tau, double ramp) const;

  /// params.bath must equal the searcher's bath (ContractError otherwise).
  SampleSet run(const SpinState& start, const LocalSearchParams& params) const;

  /// Fills the caches for one cycle shape.
  void prepare(double s_prime, double tau, double ramp) const;

 private:
  MasterEquation engine_;
};

SampleSet run(const ProblemInstance& problem, const SpinState& start, const LocalSearchParams& params,
              const Schedule& schedule = Schedule::linear(), const MasterOptions& options = {});

enum class PrepareMethod { direct, qaa_on_h_init };
PrepareMethod parse_prepare_method(const std::string& name);
std::string to_string(PrepareMethod method);

struct Preparation {
  std::vector<double> distribution;  ///< over basis states
  double fidelity = 1.0;             ///< probability of the target
};

/// direct: point mass on y. qaa_on_h_init: forward anneal from the ground
/// state of the transverse field under init_hamiltonian(y, graph), read out
/// at s = 1.
Preparation prepare_initial(const SpinState& y, PrepareMethod method, const HardwareGraph& graph,
                            const Schedule& schedule, double duration, const BathParams& bath,
                            const MasterOptions& options = {});

/// Preparation followed by a search cycle. The prepared state is read out
/// and the cycle restarts from that bitstring, so the outcome is the
/// preparation-weighted mixture of single-start cycles. Hamming distances
/// are measured from y.
SampleSet run_prepared(const LocalSearcher& searcher, const SpinState& y, const Preparation& preparation,
                       const LocalSearchParams& params);

}  // namespace qal
