#include "qal/local_search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qal/error.hpp"
#include "qal/rng.hpp"

namespace qal {

SamplingMode parse_sampling_mode(const std::string& name) {
  if (name == "multinomial") return SamplingMode::multinomial;
  if (name == "apportion") return SamplingMode::apportion;
  throw ConfigError("unknown sampling mode '" + name + "' (expected multinomial or apportion)");
}

std::string to_string(SamplingMode mode) { return mode == SamplingMode::multinomial ? "multinomial" : "apportion"; }

void LocalSearchParams::validate() const {
  if (!(s_prime >= 0.0 && s_prime <= 1.0)) throw DomainError("s_prime must be in [0, 1]");
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw DomainError("tau must be nonnegative");
  if (!(ramp > 0.0) || !std::isfinite(ramp)) throw DomainError("ramp must be positive");
  if (samples <= 0) throw DomainError("samples must be positive");
  bath.validate();
}

std::int64_t SampleSet::total() const {
  std::int64_t t = 0;
  for (const auto& o : outcomes) t += o.count;
  return t;
}

double mean_hamming(const SampleSet& set) {
  const auto total = set.total();
  if (total == 0) throw DomainError("mean_hamming of an empty sample set");
  double acc = 0.0;
  for (const auto& o : set.outcomes) acc += static_cast<double>(o.hamming) * static_cast<double>(o.count);
  return acc / static_cast<double>(total);
}

double mean_energy(const SampleSet& set) {
  const auto total = set.total();
  if (total == 0) throw DomainError("mean_energy of an empty sample set");
  double acc = 0.0;
  for (const auto& o : set.outcomes) acc += o.energy * static_cast<double>(o.count);
  return acc / static_cast<double>(total);
}

double probability_of(const SampleSet& set, const SpinState& state) {
  const auto total = set.total();
  if (total == 0) throw DomainError("probability_of on an empty sample set");
  for (const auto& o : set.outcomes)
    if (o.state == state) return static_cast<double>(o.count) / static_cast<double>(total);
  return 0.0;
}

SampleSet sample_outcomes(const std::vector<double>& distribution, const SpinState& start,
                          const ProblemInstance& scoring, std::int64_t samples, std::uint64_t seed,
                          SamplingMode mode) {
  const std::size_t dim = distribution.size();
  if (dim != (std::size_t{1} << start.size())) throw DimensionError("distribution does not match the start state");
  if (samples <= 0) throw DomainError("samples must be positive");
  const double mass = std::accumulate(distribution.begin(), distribution.end(), 0.0);
  if (!(mass > 0.0)) throw DomainError("outcome distribution has no mass");

  std::vector<std::int64_t> counts(dim, 0);
  if (mode == SamplingMode::multinomial) {
    std::vector<double> cumulative(dim);
    double run = 0.0;
    for (std::size_t x = 0; x < dim; ++x) cumulative[x] = run += distribution[x] / mass;
    Rng rng(derive_seed(seed, {0x5a3b}));
    for (std::int64_t k = 0; k < samples; ++k) {
      const double u = rng.uniform() * run;
      auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      auto x = static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cumulative.begin(), static_cast<std::ptrdiff_t>(dim - 1)));
      while (distribution[x] <= 0.0 && x > 0) --x;  // never land on a zero-probability state
      ++counts[x];
    }
  } else {
    std::vector<std::pair<double, std::size_t>> remainders;
    std::int64_t assigned = 0;
    for (std::size_t x = 0; x < dim; ++x) {
      const double exact = static_cast<double>(samples) * distribution[x] / mass;
      counts[x] = static_cast<std::int64_t>(std::floor(exact));
      assigned += counts[x];
      remainders.emplace_back(exact - std::floor(exact), x);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; assigned < samples; ++k, ++assigned) ++counts[remainders[k % dim].second];
  }

  SampleSet set{start, {}, seed};
  for (std::size_t x = 0; x < dim; ++x) {
    if (counts[x] == 0) continue;
    SpinState state = SpinState::from_index(start.size(), x);
    const double e = energy(state, scoring);
    const int d = hamming_distance(state, start);
    set.outcomes.push_back({std::move(state), e, d, counts[x]});
  }
  return set;
}

LocalSearcher::LocalSearcher(ProblemInstance problem, Schedule schedule, BathParams bath, MasterOptions options)
    : engine_(std::move(problem), schedule, bath, options) {}

std::vector<double> LocalSearcher::outcome_distribution(const SpinState& start, double s_prime, double tau,
                                                        double ramp) const {
  if (start.size() != problem().n()) throw DimensionError("start state length does not match the problem");
  const AnnealPath path = local_search_path(s_prime, tau, ramp);
  const PopulationVector final = engine_.evolve(path, start);
  return measure(final, *engine_.eigensystem(1.0));
}

SampleSet LocalSearcher::run(const SpinState& start, const LocalSearchParams& params) const {
  params.validate();
  if (!(params.bath == engine_.bath())) throw ContractError("local search bath differs from the searcher's bath");
  const auto dist = outcome_distribution(start, params.s_prime, params.tau, params.ramp);
  return sample_outcomes(dist, start, problem(), params.samples, params.seed, params.sampling);
}

void LocalSearcher::prepare(double s_prime, double tau, double ramp) const {
  engine_.prepare(local_search_path(s_prime, tau, ramp));
}

SampleSet run(const ProblemInstance& problem, const SpinState& start, const LocalSearchParams& params,
              const Schedule& schedule, const MasterOptions& options) {
  params.validate();
  return LocalSearcher(problem, schedule, params.bath, options).run(start, params);
}

PrepareMethod parse_prepare_method(const std::string& name) {
  if (name == "direct") return PrepareMethod::direct;
  if (name == "qaa_on_h_init") return PrepareMethod::qaa_on_h_init;
  throw ConfigError("unknown preparation method '" + name + "' (expected direct or qaa_on_h_init)");
}

std::string to_string(PrepareMethod method) { return method == PrepareMethod::direct ? "direct" : "qaa_on_h_init"; }

Preparation prepare_initial(const SpinState& y, PrepareMethod method, const HardwareGraph& graph,
                            const Schedule& schedule, double duration, const BathParams& bath,
                            const MasterOptions& options) {
  if (y.size() != graph.n()) throw DimensionError("preparation target length does not match the graph");
  const std::size_t dim = std::size_t{1} << y.size();
  Preparation out;
  if (method == PrepareMethod::direct) {
    out.distribution.assign(dim, 0.0);
    out.distribution[y.index()] = 1.0;
    out.fidelity = 1.0;
    return out;
  }
  const MasterEquation engine(init_hamiltonian(y, graph), schedule, bath, options);
  const AnnealPath path = forward_path(duration);
  // standard anneal: start in the ground state of the transverse field
  PopulationVector ground{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim)), path.start_s()};
  ground.p(0) = 1.0;
  const PopulationVector final = engine.evolve(path, ground);
  out.distribution = measure(final, *engine.eigensystem(1.0));
  out.fidelity = out.distribution[y.index()];
  return out;
}

SampleSet run_prepared(const LocalSearcher& searcher, const SpinState& y, const Preparation& preparation,
                       const LocalSearchParams& params) {
  params.validate();
  const std::size_t dim = preparation.distribution.size();
  if (dim != (std::size_t{1} << y.size())) throw DimensionError("preparation does not match the target");
  std::vector<double> mixture(dim, 0.0);
  for (std::size_t x = 0; x < dim; ++x) {
    const double w = preparation.distribution[x];
    if (w < 1e-15) continue;
    const auto part = searcher.outcome_distribution(SpinState::from_index(y.size(), x), params.s_prime, params.tau,
                                                    params.ramp);
    for (std::size_t k = 0; k < dim; ++k) mixture[k] += w * part[k];
  }
  return sample_outcomes(mixture, y, searcher.problem(), params.samples, params.seed, params.sampling);
}

}  // namespace qal
