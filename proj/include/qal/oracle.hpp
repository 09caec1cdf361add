#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qal/ising.hpp"
#include "qal/quantum_sim.hpp"

namespace qal::oracle {

inline constexpr int kEnumerationCap = 20;

struct SpectrumEntry {
  std::uint64_t index = 0;
  double energy = 0.0;
};

/// Every classical state with its energy, sorted ascending (ties by index).
struct Spectrum {
  int n = 0;
  std::vector<SpectrumEntry> entries;
  /// Exact energy() of the first ground state.
  double ground_energy = 0.0;
  /// Indices within 1e-9 (scaled) of the minimum, ascending.
  std::vector<std::uint64_t> ground_set;

  SpinState ground_state() const { return SpinState::from_index(n, ground_set.front()); }
  bool is_ground(const SpinState& s) const;
};

/// Exhaustive enumeration (Gray-code kernel). ResourceError for n > 20.
Spectrum brute_force(const ProblemInstance& problem);

/// Minimum energy only, without sorting.
double ground_energy(const ProblemInstance& problem);

/// p(x) proportional to exp(-E(x)/T) over all 2^n basis states.
std::vector<double> gibbs_classical(const ProblemInstance& problem, double temperature);

/// p_k proportional to exp(-lambda_k/T).
PopulationVector gibbs_over_eigenvalues(const EigenSystem& eigs, double temperature);

/// Total-variation distance 0.5 sum |p - q|.
double total_variation(const std::vector<double>& p, const std::vector<double>& q);

/// CSV rows "state,energy" with the state as a +/- string.
std::string spectrum_csv(const Spectrum& spectrum);

}  // namespace qal::oracle
