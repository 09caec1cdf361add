#include "qal/quantum_sim.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <numeric>
#include <string>

#include "qal/error.hpp"
#include "qal/kernels.hpp"

namespace qal {

int default_max_qubits() {
  if (const char* env = std::getenv("QAL_MAX_QUBITS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v < 31) return static_cast<int>(v);
  }
  return 12;
}

void BathParams::validate() const {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) throw DomainError("bath temperature must be positive");
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw DomainError("bath coupling eta must be nonnegative");
  if (!(omega_c > 0.0)) throw DomainError("bath cutoff omega_c must be positive");
}

DenseHamiltonian build_hamiltonian(const ProblemInstance& problem, const Schedule& schedule, double s,
                                   int max_qubits) {
  const int n = problem.n();
  if (n > max_qubits)
    throw ResourceError(std::to_string(n) + " qubits exceeds the dense simulation cap of " +
                        std::to_string(max_qubits) + " (raise with --max-qubits or QAL_MAX_QUBITS)");
  const auto [A, B] = schedule.eval(s);
  const Eigen::Index dim = Eigen::Index{1} << n;

  std::vector<double> diag(static_cast<std::size_t>(dim));
  kernels::omp::classical_energies(problem, diag);

  DenseHamiltonian H{Eigen::MatrixXd::Zero(dim, dim), s};
  for (Eigen::Index x = 0; x < dim; ++x) {
    H.matrix(x, x) = B * diag[static_cast<std::size_t>(x)];
    if (A != 0.0)
      for (int i = 0; i < n; ++i) H.matrix(x ^ (Eigen::Index{1} << i), x) = -A;
  }
  return H;
}

namespace {

void fix_signs(Eigen::MatrixXd& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      const double m = std::abs(vectors(r, c));
      if (m > best + 1e-14 * std::max(1.0, best)) {
        best = m;
        arg = r;
      }
    }
    if (vectors(arg, c) < 0.0) vectors.col(c) *= -1.0;
  }
}

}  // namespace

EigenSystem eigendecompose(const DenseHamiltonian& H) {
  const Eigen::MatrixXd& M = H.matrix;
  const Eigen::Index dim = M.rows();
  if (M.cols() != dim) throw DimensionError("eigendecompose: matrix is not square");
  EigenSystem out;
  out.s = H.s;
  if (dim == 0) return out;

  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  bool diagonal = true;
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index r = 0; r < dim; ++r) {
      if (r == c) continue;
      if (std::abs(M(r, c) - M(c, r)) > 1e-12 * scale)
        throw ContractError("eigendecompose: matrix is not symmetric");
      if (M(r, c) != 0.0) diagonal = false;
    }
  }

  if (diagonal) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return M(a, a) < M(b, b); });
    out.values.resize(dim);
    out.vectors = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
      const Eigen::Index x = order[static_cast<std::size_t>(k)];
      out.values(k) = M(x, x);
      out.vectors(x, k) = 1.0;
    }
    return out;
  }

  out.vectors = M;
  out.values.resize(dim);
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(dim),
                                         out.vectors.data(), static_cast<lapack_int>(dim), out.values.data());
  if (info != 0)
    throw NumericalError("dsyevd failed with info=" + std::to_string(info) + " (dimension " +
                         std::to_string(dim) + ", max |H| = " + std::to_string(scale) + ")");
  fix_signs(out.vectors);
  return out;
}

EigenSystem spectrum_at(const ProblemInstance& problem, const Schedule& schedule, double s, int max_qubits) {
  return eigendecompose(build_hamiltonian(problem, schedule, s, max_qubits));
}

double ohmic_rate(double omega, const BathParams& bath) {
  const double two_pi_eta = 2.0 * std::numbers::pi * bath.eta;
  if (omega == 0.0) return two_pi_eta * bath.temperature;
  const double cutoff = std::exp(-std::abs(omega) / bath.omega_c);
  // omega / (1 - exp(-omega/T)), written to stay finite for large |omega|/T
  const double x = omega / bath.temperature;
  double thermal;
  if (x > 0.0) {
    thermal = omega / -std::expm1(-x);
  } else {
    thermal = -omega * std::exp(x) / -std::expm1(x);
  }
  return two_pi_eta * thermal * cutoff;
}

Eigen::MatrixXd transition_rates(const EigenSystem& eigs, const BathParams& bath, int n_qubits) {
  bath.validate();
  const Eigen::Index dim = eigs.dim();
  if (dim != (Eigen::Index{1} << n_qubits)) throw DimensionError("transition_rates: eigensystem is not 2^n");
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(dim, dim);
  if (bath.eta == 0.0) return W;

  Eigen::MatrixXd overlap;
  kernels::omp::dephasing_overlaps(eigs.vectors, n_qubits, overlap);
  for (Eigen::Index a = 0; a < dim; ++a) {
    double out = 0.0;
    for (Eigen::Index b = 0; b < dim; ++b) {
      if (a == b || overlap(b, a) == 0.0) continue;
      const double rate = ohmic_rate(eigs.values(a) - eigs.values(b), bath) * overlap(b, a);
      W(b, a) = rate;
      out += rate;
    }
    W(a, a) = -out;
  }
  return W;
}

PopulationVector initial_populations(const EigenSystem& eigs, const SpinState& state) {
  const auto x = static_cast<Eigen::Index>(state.index());
  if (eigs.dim() != (Eigen::Index{1} << state.size()))
    throw DimensionError("initial_populations: state does not match eigensystem dimension");
  PopulationVector p{eigs.vectors.row(x).transpose().cwiseAbs2(), eigs.s};
  return p;
}

namespace {

void require_classical_readout(double s, const char* what) {
  if (s != 1.0)
    throw ContractError(std::string("measure: ") + what + " must be defined at s = 1 (got s = " +
                        std::to_string(s) + ")");
}

}  // namespace

std::vector<double> measure(const PopulationVector& populations, const EigenSystem& eigs_at_one) {
  require_classical_readout(eigs_at_one.s, "eigensystem");
  require_classical_readout(populations.s, "populations");
  if (populations.p.size() != eigs_at_one.dim()) throw DimensionError("measure: population length mismatch");
  const Eigen::VectorXd probs = eigs_at_one.vectors.cwiseAbs2() * populations.p;
  return {probs.data(), probs.data() + probs.size()};
}

std::vector<double> measure(const Eigen::VectorXcd& amplitudes, const EigenSystem& eigs_at_one) {
  require_classical_readout(eigs_at_one.s, "eigensystem");
  if (amplitudes.size() != eigs_at_one.dim()) throw DimensionError("measure: amplitude length mismatch");
  std::vector<double> probs(static_cast<std::size_t>(amplitudes.size()));
  for (Eigen::Index x = 0; x < amplitudes.size(); ++x) probs[static_cast<std::size_t>(x)] = std::norm(amplitudes(x));
  return probs;
}

Eigen::VectorXcd evolve_schrodinger(const ProblemInstance& problem, const Schedule& schedule,
                                    const AnnealPath& path, const Eigen::VectorXcd& initial, double dt,
                                    int max_qubits) {
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  if (initial.size() != (Eigen::Index{1} << problem.n()))
    throw DimensionError("evolve_schrodinger: initial state has the wrong dimension");

  std::map<double, EigenSystem> cache;  // hold segments reuse one decomposition
  auto system = [&](double s) -> const EigenSystem& {
    auto it = cache.find(s);
    if (it == cache.end()) {
      if (cache.size() > 64) cache.clear();
      it = cache.emplace(s, spectrum_at(problem, schedule, s, max_qubits)).first;
    }
    return it->second;
  };

  Eigen::VectorXcd psi = initial;
  const auto& w = path.waypoints();
  for (std::size_t seg = 0; seg + 1 < w.size(); ++seg) {
    const double length = w[seg + 1].t - w[seg].t;
    const auto steps = static_cast<long long>(std::ceil(length / dt - 1e-12));
    const double h = length / static_cast<double>(std::max(1LL, steps));
    for (long long k = 0; k < std::max(1LL, steps); ++k) {
      const double f = (static_cast<double>(k) + 0.5) / static_cast<double>(std::max(1LL, steps));
      const double s = w[seg].s + f * (w[seg + 1].s - w[seg].s);
      const EigenSystem& eig = system(s);
      Eigen::VectorXcd coeff = eig.vectors.transpose() * psi;
      for (Eigen::Index j = 0; j < coeff.size(); ++j) coeff(j) *= std::polar(1.0, -eig.values(j) * h);
      psi = eig.vectors * coeff;
    }
  }
  const double drift = std::abs(psi.norm() - initial.norm());
  if (drift > 1e-6) throw IntegrationError("norm drift " + std::to_string(drift) + " exceeds 1e-6; reduce dt");
  return psi;
}

Eigen::VectorXcd evolve_schrodinger(const ProblemInstance& problem, const Schedule& schedule,
                                    const AnnealPath& path, const SpinState& initial, double dt,
                                    int max_qubits) {
  if (initial.size() != problem.n()) throw DimensionError("evolve_schrodinger: state length mismatch");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(Eigen::Index{1} << problem.n());
  psi(static_cast<Eigen::Index>(initial.index())) = 1.0;
  return evolve_schrodinger(problem, schedule, path, psi, dt, max_qubits);
}

std::vector<std::vector<double>> spectrum_trace(const ProblemInstance& problem, const Schedule& schedule,
                                                const std::vector<double>& s_grid, int k, int max_qubits) {
  if (problem.n() > max_qubits)
    throw ResourceError(std::to_string(problem.n()) + " qubits exceeds the dense simulation cap of " +
                        std::to_string(max_qubits));
  const long long dim = 1LL << problem.n();
  if (k < 1 || k > dim)
    throw DomainError("requested " + std::to_string(k) + " levels but the spectrum has " + std::to_string(dim));
  std::vector<std::vector<double>> rows;
  rows.reserve(s_grid.size());
  for (double s : s_grid) {
    const auto eig = spectrum_at(problem, schedule, s, max_qubits);
    std::vector<double> row{s};
    for (int j = 0; j < k; ++j) row.push_back(eig.values(j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace qal
