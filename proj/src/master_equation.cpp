#include "qal/master_equation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qal/error.hpp"

namespace qal {

namespace {

constexpr double kNegativeTolerance = 1e-9;
constexpr double kCacheBytes = 2.0e9;

// Columns of a stochastic matrix sum to one; restoring that after each
// product keeps long binary powers from drifting.
void restore_column_sums(Eigen::MatrixXd& M) {
  for (Eigen::Index a = 0; a < M.cols(); ++a) M(a, a) += 1.0 - M.col(a).sum();
}

}  // namespace

std::vector<PathPiece> split_path(const AnnealPath& path, double s_step) {
  if (!(s_step > 0.0)) throw DomainError("s_step must be positive");
  std::vector<PathPiece> pieces;
  struct Ramp {
    double lo, hi, length;
  };
  std::vector<Ramp> seen;
  const auto& w = path.waypoints();
  for (std::size_t seg = 0; seg + 1 < w.size(); ++seg) {
    const double length = w[seg + 1].t - w[seg].t;
    const double s0 = w[seg].s;
    const double s1 = w[seg + 1].s;
    if (s0 == s1) {
      pieces.push_back({s0, length});
      continue;
    }
    const double lo = std::min(s0, s1);
    const double hi = std::max(s0, s1);
    const double eps = 1e-12;
    // a ramp back over the same range reuses the first ramp's length, so
    // waypoint-time rounding cannot split the cache keys
    double length_used = length;
    for (const auto& r : seen)
      if (r.lo == lo && r.hi == hi && std::abs(r.length - length) <= 1e-12 * r.length) length_used = r.length;
    seen.push_back({lo, hi, length_used});
    std::vector<double> cuts{lo};
    for (auto k = static_cast<long long>(std::floor(lo / s_step)) + 1;; ++k) {
      const double g = static_cast<double>(k) * s_step;
      if (g >= hi - eps) break;
      if (g > lo + eps) cuts.push_back(g);
    }
    cuts.push_back(hi);

    std::vector<PathPiece> ascending;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
      ascending.push_back({0.5 * (cuts[k] + cuts[k + 1]), length_used * (cuts[k + 1] - cuts[k]) / (hi - lo)});
    if (s1 < s0) std::reverse(ascending.begin(), ascending.end());
    pieces.insert(pieces.end(), ascending.begin(), ascending.end());
  }
  return pieces;
}

Eigen::MatrixXd rk4_step_matrix(const Eigen::MatrixXd& W, double h) {
  const Eigen::Index dim = W.rows();
  const Eigen::MatrixXd X = h * W;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(dim, dim);
  // Horner form of the degree-4 Taylor polynomial
  Eigen::MatrixXd R = I + X / 4.0;
  R = I + (X * R) / 3.0;
  R = I + (X * R) / 2.0;
  R = I + X * R;
  return R;
}

MasterEquation::MasterEquation(ProblemInstance problem, Schedule schedule, BathParams bath, MasterOptions options)
    : problem_(std::move(problem)), schedule_(schedule), bath_(bath), options_(options) {
  bath_.validate();
  if (problem_.n() > options_.max_qubits)
    throw ResourceError(std::to_string(problem_.n()) + " qubits exceeds the dense simulation cap of " +
                        std::to_string(options_.max_qubits) + " (raise with --max-qubits or QAL_MAX_QUBITS)");
  if (!(options_.dt >= 0.0)) throw DomainError("dt must be nonnegative (0 selects the automatic step)");
  if (!(options_.s_step > 0.0 && options_.s_step <= 1.0)) throw DomainError("s_step must be in (0, 1]");
  if (!(options_.rate_step_limit > 0.0)) throw DomainError("rate_step_limit must be positive");
}

std::shared_ptr<const EigenSystem> MasterEquation::eigensystem(double s) const {
  {
    std::lock_guard lock(mutex_);
    if (auto it = eigensystems_.find(s); it != eigensystems_.end()) return it->second;
  }
  auto eig = std::make_shared<const EigenSystem>(spectrum_at(problem_, schedule_, s, options_.max_qubits));
  std::lock_guard lock(mutex_);
  return eigensystems_.emplace(s, std::move(eig)).first->second;
}

MasterEquation::RateEntry MasterEquation::rate_entry(double s) const {
  {
    std::lock_guard lock(mutex_);
    if (auto it = rates_.find(s); it != rates_.end()) return it->second;
  }
  const EigenSystem eig = spectrum_at(problem_, schedule_, s, options_.max_qubits);
  auto W = std::make_shared<const Eigen::MatrixXd>(transition_rates(eig, bath_, problem_.n()));
  RateEntry entry{W, W->size() ? W->diagonal().cwiseAbs().maxCoeff() : 0.0};
  std::lock_guard lock(mutex_);
  trim_caches();
  return rates_.emplace(s, std::move(entry)).first->second;
}

std::shared_ptr<const Eigen::MatrixXd> MasterEquation::rates(double s) const { return rate_entry(s).W; }

void MasterEquation::trim_caches() const {
  const double dim = std::ldexp(1.0, problem_.n());
  const double bytes = 8.0 * dim * dim * static_cast<double>(rates_.size() + propagators_.size());
  if (bytes > kCacheBytes) {
    rates_.clear();
    propagators_.clear();
  }
}

MasterEquation::StepPlan MasterEquation::plan(const RateEntry& entry, double duration) const {
  if (entry.max_rate == 0.0) return {1, duration};
  const double target = options_.dt > 0.0 ? options_.dt : options_.rate_step_limit / entry.max_rate;
  const double steps = std::max(1.0, std::ceil(duration / target - 1e-9));
  if (steps > 0x1.0p62)
    throw IntegrationError("piece of duration " + std::to_string(duration) + " needs more than 2^62 RK4 steps");
  const auto count = static_cast<std::uint64_t>(steps);
  return {count, duration / static_cast<double>(count)};
}

bool MasterEquation::worth_building(const StepPlan& plan) const {
  if (options_.cache_propagators) return true;
  // vector route: 4 matvecs per step; matrix route: ~3 + 2 log2(steps)
  // products, each worth roughly dim/8 matvecs in practice
  const double dim = std::ldexp(1.0, problem_.n());
  const double vector_cost = 4.0 * static_cast<double>(plan.steps);
  const double matrix_cost = (3.0 + 2.0 * std::log2(static_cast<double>(plan.steps))) * dim / 8.0;
  return matrix_cost < vector_cost;
}

MasterEquation::Matrix MasterEquation::cached_propagator(const PathPiece& piece) const {
  std::lock_guard lock(mutex_);
  auto it = propagators_.find({piece.s, piece.duration});
  return it == propagators_.end() ? nullptr : it->second;
}

MasterEquation::Matrix MasterEquation::build_propagator(const PathPiece& piece, const RateEntry& entry,
                                                        const StepPlan& plan) const {
  Eigen::MatrixXd base = rk4_step_matrix(*entry.W, plan.h);
  restore_column_sums(base);
  Eigen::MatrixXd result;
  bool have = false;
  for (std::uint64_t e = plan.steps; e != 0; e >>= 1) {
    if (e & 1U) {
      result = have ? Eigen::MatrixXd(base * result) : base;
      restore_column_sums(result);
      have = true;
    }
    if (e > 1) {
      base = base * base;
      restore_column_sums(base);
    }
  }
  auto G = std::make_shared<const Eigen::MatrixXd>(std::move(result));
  std::lock_guard lock(mutex_);
  trim_caches();
  return propagators_.emplace(std::make_pair(piece.s, piece.duration), std::move(G)).first->second;
}

void MasterEquation::check_and_clamp(Eigen::VectorXd& p, double s) const {
  const double worst = p.size() ? p.minCoeff() : 0.0;
  if (!std::isfinite(p.sum()) || worst < -kNegativeTolerance)
    throw IntegrationError("population " + std::to_string(worst) + " at s = " + std::to_string(s) +
                           " is negative beyond tolerance; use a smaller dt");
  p = p.cwiseMax(0.0);
  p /= p.sum();
}

PopulationVector MasterEquation::initial(const SpinState& state, double s) const {
  if (state.size() != problem_.n()) throw DimensionError("initial state length does not match the problem");
  return initial_populations(*eigensystem(s), state);
}

PopulationVector MasterEquation::evolve(const AnnealPath& path, const SpinState& initial_state) const {
  return evolve(path, initial(initial_state, path.start_s()));
}

PopulationVector MasterEquation::evolve(const AnnealPath& path, const PopulationVector& initial) const {
  if (initial.s != path.start_s())
    throw ContractError("initial populations are defined at s = " + std::to_string(initial.s) +
                        " but the path starts at s = " + std::to_string(path.start_s()));
  if (initial.p.size() != (Eigen::Index{1} << problem_.n()))
    throw DimensionError("population vector has the wrong dimension");

  Eigen::VectorXd p = initial.p;
  for (const auto& piece : split_path(path, options_.s_step)) {
    if (auto G = cached_propagator(piece)) {
      p = (*G) * p;
      check_and_clamp(p, piece.s);
      continue;
    }
    const RateEntry entry = rate_entry(piece.s);
    if (entry.max_rate == 0.0) continue;
    const StepPlan steps = plan(entry, piece.duration);
    if (worth_building(steps)) {
      p = (*build_propagator(piece, entry, steps)) * p;
    } else {
      const Eigen::MatrixXd& W = *entry.W;
      const double h = steps.h;
      Eigen::VectorXd k1, k2, k3, k4;
      for (std::uint64_t k = 0; k < steps.steps; ++k) {
        k1.noalias() = W * p;
        k2.noalias() = W * (p + 0.5 * h * k1);
        k3.noalias() = W * (p + 0.5 * h * k2);
        k4.noalias() = W * (p + h * k3);
        p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
    }
    check_and_clamp(p, piece.s);
  }
  return {std::move(p), path.end_s()};
}

PopulationVector MasterEquation::evolve_reference(const AnnealPath& path, const PopulationVector& initial) const {
  if (initial.s != path.start_s())
    throw ContractError("initial populations are not defined at the path start");
  Eigen::VectorXd p = initial.p;
  for (const auto& piece : split_path(path, options_.s_step)) {
    const RateEntry entry = rate_entry(piece.s);
    const StepPlan steps = plan(entry, piece.duration);
    const Eigen::MatrixXd& W = *entry.W;
    const double h = steps.h;
    for (std::uint64_t k = 0; k < steps.steps; ++k) {
      const Eigen::VectorXd k1 = W * p;
      const Eigen::VectorXd k2 = W * (p + 0.5 * h * k1);
      const Eigen::VectorXd k3 = W * (p + 0.5 * h * k2);
      const Eigen::VectorXd k4 = W * (p + h * k3);
      p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    check_and_clamp(p, piece.s);
  }
  return {std::move(p), path.end_s()};
}

void MasterEquation::prepare(const AnnealPath& path) const {
  eigensystem(path.start_s());
  eigensystem(path.end_s());
  for (const auto& piece : split_path(path, options_.s_step)) {
    if (cached_propagator(piece)) continue;
    const RateEntry entry = rate_entry(piece.s);
    if (entry.max_rate == 0.0) continue;
    const StepPlan steps = plan(entry, piece.duration);
    if (worth_building(steps)) build_propagator(piece, entry, steps);
  }
}

void MasterEquation::clear_cache() const {
  std::lock_guard lock(mutex_);
  rates_.clear();
  eigensystems_.clear();
  propagators_.clear();
}

PopulationVector evolve_master(const ProblemInstance& problem, const Schedule& schedule, const AnnealPath& path,
                               const BathParams& bath, const SpinState& initial, double dt) {
  MasterOptions options;
  options.dt = dt;
  MasterEquation engine(problem, schedule, bath, options);
  return engine.evolve(path, initial);
}

}  // namespace qal
