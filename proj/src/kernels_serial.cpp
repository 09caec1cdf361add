#include "qal/error.hpp"
#include "qal/kernels.hpp"

namespace qal::kernels::serial {

void classical_energies(const ProblemInstance& problem, std::span<double> out) {
  const std::uint64_t dim = std::uint64_t{1} << problem.n();
  if (out.size() != dim) throw DimensionError("classical_energies: output size must be 2^n");
  for (std::uint64_t x = 0; x < dim; ++x) out[x] = energy_of_index(x, problem);
}

void dephasing_overlaps(const Eigen::MatrixXd& V, int n_qubits, Eigen::MatrixXd& out) {
  const Eigen::Index dim = V.rows();
  if (V.cols() != dim || dim != (Eigen::Index{1} << n_qubits))
    throw DimensionError("dephasing_overlaps: eigenvector matrix must be 2^n square");
  out.setZero(dim, dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    for (Eigen::Index b = a + 1; b < dim; ++b) {
      double total = 0.0;
      for (int i = 0; i < n_qubits; ++i) {
        double m = 0.0;
        for (Eigen::Index k = 0; k < dim; ++k) {
          const double z = ((k >> i) & 1) ? -1.0 : 1.0;
          m += V(k, a) * V(k, b) * z;
        }
        total += m * m;
      }
      out(a, b) = total;
      out(b, a) = total;
    }
  }
}

}  // namespace qal::kernels::serial
