#include <omp.h>

#include <algorithm>
#include <bit>
#include <vector>

#include "qal/error.hpp"
#include "qal/kernels.hpp"

namespace qal::kernels {

namespace omp {

void classical_energies(const ProblemInstance& problem, std::span<double> out) {
  const int n = problem.n();
  const std::uint64_t dim = std::uint64_t{1} << n;
  if (out.size() != dim) throw DimensionError("classical_energies: output size must be 2^n");

  std::vector<std::vector<std::pair<int, double>>> adjacency(static_cast<std::size_t>(n));
  const auto& edges = problem.graph().edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    adjacency[static_cast<std::size_t>(edges[k].i)].emplace_back(edges[k].j, problem.J()[k]);
    adjacency[static_cast<std::size_t>(edges[k].j)].emplace_back(edges[k].i, problem.J()[k]);
  }

  const int chunk_bits = std::min(n, 10);
  const std::uint64_t chunk = std::uint64_t{1} << chunk_bits;
  const auto chunks = static_cast<std::int64_t>(dim >> chunk_bits);

#pragma omp parallel for schedule(static)
  for (std::int64_t q = 0; q < chunks; ++q) {
    const std::uint64_t base = static_cast<std::uint64_t>(q) << chunk_bits;
    std::vector<int> spin(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) spin[static_cast<std::size_t>(i)] = ((base >> i) & 1U) ? -1 : 1;
    double e = energy_of_index(base, problem);
    out[base] = e;
    for (std::uint64_t j = 1; j < chunk; ++j) {
      const int bit = std::countr_zero(j);
      const auto b = static_cast<std::size_t>(bit);
      double local = problem.h()[b];
      for (const auto& [nbr, coupling] : adjacency[b]) local += coupling * spin[static_cast<std::size_t>(nbr)];
      e += 2.0 * spin[b] * local;
      spin[b] = -spin[b];
      out[base | (j ^ (j >> 1))] = e;
    }
  }
}

void dephasing_overlaps(const Eigen::MatrixXd& V, int n_qubits, Eigen::MatrixXd& out) {
  const Eigen::Index dim = V.rows();
  if (V.cols() != dim || dim != (Eigen::Index{1} << n_qubits))
    throw DimensionError("dephasing_overlaps: eigenvector matrix must be 2^n square");
  out.setZero(dim, dim);
  if (dim < 2) return;

  // Qubits are processed in batches sized to the thread count; squares are
  // accumulated into `out` strictly in qubit order.
  const int batch = std::max(1, std::min(n_qubits, omp_get_max_threads()));
  std::vector<Eigen::MatrixXd> gram(static_cast<std::size_t>(batch));
  for (int first = 0; first < n_qubits; first += batch) {
    const int count = std::min(batch, n_qubits - first);
#pragma omp parallel for schedule(static, 1)
    for (int slot = 0; slot < count; ++slot) {
      const int qubit = first + slot;
      Eigen::MatrixXd rows(dim / 2, dim);
      Eigen::Index r = 0;
      for (Eigen::Index k = 0; k < dim; ++k)
        if ((k >> qubit) & 1) rows.row(r++) = V.row(k);
      auto& g = gram[static_cast<std::size_t>(slot)];
      g.setZero(dim, dim);
      g.selfadjointView<Eigen::Lower>().rankUpdate(rows.transpose());
    }
    for (int slot = 0; slot < count; ++slot) {
      const auto& g = gram[static_cast<std::size_t>(slot)];
#pragma omp parallel for schedule(static)
      for (Eigen::Index b = 0; b < dim; ++b)
        for (Eigen::Index a = b + 1; a < dim; ++a) out(a, b) += 4.0 * g(a, b) * g(a, b);
    }
  }
  for (Eigen::Index b = 0; b < dim; ++b)
    for (Eigen::Index a = b + 1; a < dim; ++a) out(b, a) = out(a, b);
}

}  // namespace omp

void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace qal::kernels
