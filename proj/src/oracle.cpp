#include "qal/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qal/error.hpp"
#include "qal/format.hpp"
#include "qal/kernels.hpp"

namespace qal::oracle {

namespace {

std::vector<double> all_energies(const ProblemInstance& problem) {
  if (problem.n() > kEnumerationCap)
    throw ResourceError(std::to_string(problem.n()) + " qubits exceeds the enumeration cap of " +
                        std::to_string(kEnumerationCap));
  std::vector<double> e(std::size_t{1} << problem.n());
  kernels::omp::classical_energies(problem, e);
  return e;
}

double ground_tolerance(const ProblemInstance& problem) {
  return 1e-9 * std::max(1.0, problem.coefficient_scale() * problem.n());
}

std::vector<double> boltzmann(const std::vector<double>& energies, double temperature) {
  if (!(temperature > 0.0)) throw DomainError("temperature must be positive");
  const double e_min = *std::min_element(energies.begin(), energies.end());
  std::vector<double> p(energies.size());
  double z = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) z += p[k] = std::exp(-(energies[k] - e_min) / temperature);
  for (auto& v : p) v /= z;
  return p;
}

}  // namespace

bool Spectrum::is_ground(const SpinState& s) const {
  return std::binary_search(ground_set.begin(), ground_set.end(), s.index());
}

Spectrum brute_force(const ProblemInstance& problem) {
  const auto energies = all_energies(problem);
  Spectrum out;
  out.n = problem.n();
  out.entries.resize(energies.size());
  for (std::size_t x = 0; x < energies.size(); ++x) out.entries[x] = {x, energies[x]};
  std::stable_sort(out.entries.begin(), out.entries.end(),
                   [](const SpectrumEntry& a, const SpectrumEntry& b) { return a.energy < b.energy; });
  const double tol = ground_tolerance(problem);
  for (const auto& e : out.entries) {
    if (e.energy > out.entries.front().energy + tol) break;
    out.ground_set.push_back(e.index);
  }
  std::sort(out.ground_set.begin(), out.ground_set.end());
  out.ground_energy = energy_of_index(out.entries.front().index, problem);
  return out;
}

double ground_energy(const ProblemInstance& problem) {
  const auto energies = all_energies(problem);
  const auto it = std::min_element(energies.begin(), energies.end());
  return energy_of_index(static_cast<std::uint64_t>(it - energies.begin()), problem);
}

std::vector<double> gibbs_classical(const ProblemInstance& problem, double temperature) {
  if (!(temperature > 0.0)) throw DomainError("temperature must be positive");
  return boltzmann(all_energies(problem), temperature);
}

PopulationVector gibbs_over_eigenvalues(const EigenSystem& eigs, double temperature) {
  if (!(temperature > 0.0)) throw DomainError("temperature must be positive");
  const std::vector<double> values(eigs.values.data(), eigs.values.data() + eigs.values.size());
  const auto p = boltzmann(values, temperature);
  return {Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size())), eigs.s};
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw DimensionError("total_variation: length mismatch");
  double d = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) d += std::abs(p[k] - q[k]);
  return 0.5 * d;
}

std::string spectrum_csv(const Spectrum& spectrum) {
  std::ostringstream out;
  out << "state,energy\n";
  for (const auto& e : spectrum.entries)
    out << SpinState::from_index(spectrum.n, e.index).to_string() << ',' << format_real(e.energy) << '\n';
  return out.str();
}

}  // namespace qal::oracle
