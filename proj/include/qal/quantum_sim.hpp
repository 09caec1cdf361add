#pragma once

#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "qal/ising.hpp"
#include "qal/schedule.hpp"

namespace qal {

/// Dense qubit cap for 2^n simulations: QAL_MAX_QUBITS if set, else 12.
int default_max_qubits();

/// H(s) = -A(s) sum_i X_i + B(s) H_problem in the computational basis.
struct DenseHamiltonian {
  Eigen::MatrixXd matrix;
  double s = std::numeric_limits<double>::quiet_NaN();
};

/// Ascending eigenvalues with orthonormal eigenvector columns. `s` records
/// the annealing parameter the system was built at (NaN if unknown).
struct EigenSystem {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  double s = std::numeric_limits<double>::quiet_NaN();

  Eigen::Index dim() const { return values.size(); }
};

/// Ohmic bath acting through independent sigma^z couplings.
struct BathParams {
  double temperature = 0.1;
  double eta = 0.01;
  double omega_c = 10.0;

  /// Throws DomainError unless T > 0, eta >= 0, omega_c > 0.
  void validate() const;
  friend bool operator==(const BathParams&, const BathParams&) = default;
};

/// Probability per instantaneous eigenstate (ascending energy order) of
/// H(s).
struct PopulationVector {
  Eigen::VectorXd p;
  double s = std::numeric_limits<double>::quiet_NaN();
};

/// Throws ResourceError when n exceeds max_qubits.
DenseHamiltonian build_hamiltonian(const ProblemInstance& problem, const Schedule& schedule, double s,
                                   int max_qubits = default_max_qubits());

/// Full symmetric eigendecomposition. Exactly diagonal input (A = 0) is
/// resolved without the iterative solver, so the eigenvectors are exact
/// basis vectors (stable order within degenerate levels). Each eigenvector
/// is signed so its largest-magnitude component is positive.
EigenSystem eigendecompose(const DenseHamiltonian& H);

/// eigendecompose(build_hamiltonian(...)).
EigenSystem spectrum_at(const ProblemInstance& problem, const Schedule& schedule, double s,
                        int max_qubits = default_max_qubits());

/// gamma(omega) = 2 pi eta omega / (1 - exp(-omega/T)) * exp(-|omega|/omega_c),
/// gamma(0) = 2 pi eta T. omega > 0 is energy released to the bath.
double ohmic_rate(double omega, const BathParams& bath);

/// Rate matrix W with W(b, a) = gamma(E_a - E_b) sum_i |<b|Z_i|a>|^2 for
/// a != b and W(a, a) = -sum_b W(b, a).
Eigen::MatrixXd transition_rates(const EigenSystem& eigs, const BathParams& bath, int n_qubits);

/// Populations |<k|x>|^2 of basis state x in the eigenbasis.
PopulationVector initial_populations(const EigenSystem& eigs, const SpinState& state);

/// Probability per classical bitstring of the incoherent mixture
/// sum_k p_k |k><k|. Requires eigs.s == 1 and populations.s == 1
/// (ContractError otherwise).
std::vector<double> measure(const PopulationVector& populations, const EigenSystem& eigs_at_one);

/// |psi_x|^2 for a computational-basis state vector defined at s = 1.
std::vector<double> measure(const Eigen::VectorXcd& amplitudes, const EigenSystem& eigs_at_one);

/// Closed-system evolution: each step of length <= dt applies
/// exp(-i H(s_mid) h) through the eigendecomposition at the step midpoint.
/// Throws IntegrationError on norm drift beyond 1e-6.
Eigen::VectorXcd evolve_schrodinger(const ProblemInstance& problem, const Schedule& schedule,
                                    const AnnealPath& path, const Eigen::VectorXcd& initial, double dt,
                                    int max_qubits = default_max_qubits());
Eigen::VectorXcd evolve_schrodinger(const ProblemInstance& problem, const Schedule& schedule,
                                    const AnnealPath& path, const SpinState& initial, double dt,
                                    int max_qubits = default_max_qubits());

/// One row per s: (s, lambda_0, ..., lambda_{k-1}). DomainError if k > 2^n.
std::vector<std::vector<double>> spectrum_trace(const ProblemInstance& problem, const Schedule& schedule,
                                                const std::vector<double>& s_grid, int k,
                                                int max_qubits = default_max_qubits());

}  // namespace qal
