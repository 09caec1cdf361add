#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <Eigen/Dense>

#include "qal/ising.hpp"
#include "qal/quantum_sim.hpp"
#include "qal/schedule.hpp"

namespace qal {

struct MasterOptions {
  /// RK4 step; 0 selects h = rate_step_limit / max|W| per piece.
  double dt = 0.0;
  /// The rate matrix is rebuilt on this grid of s; ramps are split at
  /// multiples of s_step and W is evaluated at each piece's midpoint.
  double s_step = 0.01;
  double rate_step_limit = 0.1;
  /// Keep RK4 step propagators for reuse across evolutions (many runs on one
  /// problem). Otherwise a propagator is only built when it is cheaper than
  /// stepping the vector.
  bool cache_propagators = false;
  int max_qubits = default_max_qubits();
};

/// Portion of a path with a single rate matrix.
struct PathPiece {
  double s = 0.0;         ///< where W is evaluated
  double duration = 0.0;
};

/// Splits a path into constant-W pieces: holds become one piece, ramps are
/// cut at multiples of s_step. Ramp-down and ramp-up over the same s range
/// produce bitwise-identical pieces.
std::vector<PathPiece> split_path(const AnnealPath& path, double s_step);

/// Pauli master equation dp/dt = W(s(t)) p in the instantaneous eigenbasis,
/// with populations carried by eigenvalue rank between rate rebuilds.
///
/// Spectral data and step propagators are cached per s. All public members
/// are safe to call concurrently; call prepare() first so concurrent calls
/// only read the caches.
class MasterEquation {
 public:
  MasterEquation(ProblemInstance problem, Schedule schedule, BathParams bath, MasterOptions options = {});

  const ProblemInstance& problem() const noexcept { return problem_; }
  const Schedule& schedule() const noexcept { return schedule_; }
  const BathParams& bath() const noexcept { return bath_; }
  const MasterOptions& options() const noexcept { return options_; }

  /// Eigensystem of H(s) (cached).
  std::shared_ptr<const EigenSystem> eigensystem(double s) const;
  /// Rate matrix at s (cached).
  std::shared_ptr<const Eigen::MatrixXd> rates(double s) const;

  PopulationVector initial(const SpinState& state, double s) const;

  /// Evolves along the path. Populations must be defined at path.start_s();
  /// the result is defined at path.end_s(). IntegrationError if a
  /// population drops below -1e-9.
  PopulationVector evolve(const AnnealPath& path, const PopulationVector& initial) const;
  PopulationVector evolve(const AnnealPath& path, const SpinState& initial) const;

  /// Same discretisation as evolve(), stepping the vector through every RK4
  /// stage with no propagator matrices. Reference route for tests.
  PopulationVector evolve_reference(const AnnealPath& path, const PopulationVector& initial) const;

  /// Builds every cache entry evolve(path) will touch.
  void prepare(const AnnealPath& path) const;

  void clear_cache() const;

 private:
  struct StepPlan {
    std::uint64_t steps = 1;
    double h = 0.0;
  };
  struct RateEntry {
    std::shared_ptr<const Eigen::MatrixXd> W;
    double max_rate = 0.0;
  };
  using Matrix = std::shared_ptr<const Eigen::MatrixXd>;

  RateEntry rate_entry(double s) const;
  StepPlan plan(const RateEntry& entry, double duration) const;
  Matrix cached_propagator(const PathPiece& piece) const;
  Matrix build_propagator(const PathPiece& piece, const RateEntry& entry, const StepPlan& plan) const;
  bool worth_building(const StepPlan& plan) const;
  void trim_caches() const;
  void check_and_clamp(Eigen::VectorXd& p, double s) const;

  ProblemInstance problem_;
  Schedule schedule_;
  BathParams bath_;
  MasterOptions options_;

  mutable std::mutex mutex_;
  mutable std::map<double, RateEntry> rates_;
  mutable std::map<double, std::shared_ptr<const EigenSystem>> eigensystems_;
  mutable std::map<std::pair<double, double>, Matrix> propagators_;
};

/// One-shot evolution from a classical state; dt = 0 selects the automatic
/// step.
PopulationVector evolve_master(const ProblemInstance& problem, const Schedule& schedule, const AnnealPath& path,
                               const BathParams& bath, const SpinState& initial, double dt = 0.0);

/// Single RK4 step matrix I + X + X^2/2 + X^3/6 + X^4/24 with X = hW.
Eigen::MatrixXd rk4_step_matrix(const Eigen::MatrixXd& W, double h);

}  // namespace qal
