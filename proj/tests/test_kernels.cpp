#include <doctest.h>

#include <vector>

#include "qal/kernels.hpp"
#include "qal/quantum_sim.hpp"

using namespace qal;

TEST_CASE("classical energies: omp matches serial") {
  for (int n : {1, 3, 8, 12, 14}) {
    const auto p = random_instance(HardwareGraph::king_subgraph(n), CoefficientDistribution::uniform_range,
                                   static_cast<std::uint64_t>(n));
    const std::size_t dim = std::size_t{1} << n;
    std::vector<double> a(dim), b(dim);
    kernels::serial::classical_energies(p, a);
    kernels::omp::classical_energies(p, b);
    for (std::size_t x = 0; x < dim; ++x) CHECK(b[x] == doctest::Approx(a[x]).epsilon(1e-12));
    for (std::size_t x = 0; x < dim; x += 97) CHECK(a[x] == energy_of_index(x, p));
  }
}

TEST_CASE("dephasing overlaps: omp matches serial") {
  for (int n : {1, 2, 4, 6}) {
    const auto p = random_instance(HardwareGraph::path(n), CoefficientDistribution::uniform_range, 17);
    const auto eigs = spectrum_at(p, Schedule::linear(), 0.45);
    Eigen::MatrixXd a, b;
    kernels::serial::dephasing_overlaps(eigs.vectors, n, a);
    kernels::omp::dephasing_overlaps(eigs.vectors, n, b);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(b == b.transpose());
    CHECK(a.diagonal().cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("thread count does not change results") {
  const auto p = random_instance(HardwareGraph::king_subgraph(12), CoefficientDistribution::pm_one, 3);
  std::vector<double> a(4096), b(4096);
  kernels::set_threads(1);
  kernels::omp::classical_energies(p, a);
  kernels::set_threads(4);
  kernels::omp::classical_energies(p, b);
  CHECK(a == b);
  CHECK(kernels::max_threads() >= 1);
}
