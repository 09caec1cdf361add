#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qal/ising.hpp"
#include "qal/quantum_sim.hpp"
#include "qal/schedule.hpp"

namespace qal {

/// Exact eigenvector of H(s) continuously connected to a classical basis
/// state at s = 1.
struct DressedState {
  SpinState origin;
  double s = 1.0;
  Eigen::VectorXd amplitudes;
  double energy = 0.0;  ///< eigenvalue of H(s)
  int level = 0;        ///< rank in the spectrum of H(s)
};

struct ContinuationOptions {
  int steps = 200;
  int densify = 10;
  double refine_below = 0.9;  ///< overlap that triggers densification
  double lost_below = 0.5;    ///< overlap that aborts tracking
  int max_qubits = default_max_qubits();
};

/// Follows the origin's basis state from s = 1 down to s on a uniform grid,
/// choosing at each step the eigenvector of maximal overlap with the
/// previous one. DomainError if a Hamming-1 neighbour of the origin has the
/// same classical energy; ContinuationError if tracking is lost or the
/// origin stops being the dominant component.
DressedState dressed_state(const ProblemInstance& problem, const Schedule& schedule, double s,
                           const SpinState& origin, const ContinuationOptions& options = {});

/// |<C_a(s)| sum_i Z_i |C_b(s)>|.
double tunneling_element(const DressedState& a, const DressedState& b);
double tunneling_element(const ProblemInstance& problem, const Schedule& schedule, double s,
                         const SpinState& origin_a, const SpinState& origin_b,
                         const ContinuationOptions& options = {});

/// Least-squares fit of ln(element) against Hamming distance.
struct ScalingFit {
  std::vector<int> distances;
  std::vector<double> elements;
  std::vector<double> log_elements;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double predicted_slope = 0.0;  ///< ln(A(s)/B(s))
  std::vector<int> excluded;     ///< distances dropped at the 1e-14 floor
  std::vector<std::string> warnings;
};

/// Targets must sit at distinct nonzero Hamming distances from the origin.
/// FitError if fewer than two elements clear the numerical floor.
ScalingFit scaling_fit(const ProblemInstance& problem, const Schedule& schedule, double s, const SpinState& origin,
                       const std::vector<SpinState>& targets, const ContinuationOptions& options = {});

/// CSV rows (hamming_distance, element, log_element) followed by a summary
/// block (slope, predicted_ln_ratio, r_squared).
std::string scaling_csv(const ScalingFit& fit);

/// Tr(rho_q^2) of the single-qubit reduced density matrix of a real state.
double reduced_purity(const Eigen::VectorXd& amplitudes, int n_qubits, int qubit);

}  // namespace qal
