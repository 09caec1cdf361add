#pragma once

#include <span>

#include <Eigen/Dense>

#include "qal/ising.hpp"

/// Data-parallel inner loops of the simulator. Each kernel has a plain serial
/// implementation, kept as the reference the tests compare against, and an
/// OpenMP implementation used by the library. The OpenMP variants partition
/// work into fixed-size chunks and reduce in a fixed order, so results do
/// not depend on the thread count.
namespace qal::kernels {

namespace serial {

/// out[x] = energy of basis state x, by direct evaluation.
void classical_energies(const ProblemInstance& problem, std::span<double> out);

/// out(a, b) = sum_i (sum_k V(k, a) V(k, b) z_i(k))^2 for a != b, zero on the
/// diagonal. z_i(k) is the sigma^z_i eigenvalue of basis state k.
void dephasing_overlaps(const Eigen::MatrixXd& eigenvectors, int n_qubits, Eigen::MatrixXd& out);

}  // namespace serial

namespace omp {

/// Gray-code enumeration within chunks of 2^10 states, one full evaluation
/// per chunk, O(degree) updates in between.
void classical_energies(const ProblemInstance& problem, std::span<double> out);

/// Uses <a|z_i|b> = -2 (V_i^T V_i)(a, b) for a != b, where V_i holds the rows
/// of basis states with bit i set; one symmetric rank-k update per qubit.
/// The result is exactly symmetric.
void dephasing_overlaps(const Eigen::MatrixXd& eigenvectors, int n_qubits, Eigen::MatrixXd& out);

}  // namespace omp

/// Sets the OpenMP thread count (no-op if n <= 0).
void set_threads(int n);
int max_threads();

}  // namespace qal::kernels
