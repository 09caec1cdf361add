#pragma once

#include <string>
#include <vector>

namespace qal {

struct ScheduleValues {
  double A = 0.0;  ///< transverse-field scale
  double B = 0.0;  ///< problem scale
};

/// Annealing schedule A(s), B(s) on s in [0, 1].
///
///   linear:    A = gamma (1 - s),    B = lambda s
///   quadratic: A = gamma (1 - s)^2,  B = lambda s^2
class Schedule {
 public:
  enum class Family { linear, quadratic };

  Schedule() = default;
  /// gamma and lambda must be positive.
  Schedule(Family family, double gamma = 1.0, double lambda = 1.0);

  static Schedule linear(double gamma = 1.0, double lambda = 1.0) { return {Family::linear, gamma, lambda}; }
  static Schedule quadratic(double gamma = 1.0, double lambda = 1.0) {
    return {Family::quadratic, gamma, lambda};
  }

  /// Throws DomainError for s outside [0, 1].
  ScheduleValues eval(double s) const;

  /// The s at which A(s)/B(s) equals `ratio` (> 0). A/B is strictly
  /// decreasing on (0, 1) for both families.
  double s_for_ratio(double ratio) const;

  Family family() const noexcept { return family_; }
  double gamma() const noexcept { return gamma_; }
  double lambda() const noexcept { return lambda_; }

  friend bool operator==(const Schedule&, const Schedule&) = default;

 private:
  Family family_ = Family::linear;
  double gamma_ = 1.0;
  double lambda_ = 1.0;
};

Schedule::Family parse_schedule_family(const std::string& name);
std::string to_string(Schedule::Family family);

struct Waypoint {
  double t = 0.0;
  double s = 0.0;
  friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

/// Piecewise-linear trajectory s(t) through waypoints with strictly
/// increasing times, starting at t = 0. A single waypoint is a zero-length
/// path.
class AnnealPath {
 public:
  AnnealPath() = default;
  explicit AnnealPath(std::vector<Waypoint> waypoints);

  const std::vector<Waypoint>& waypoints() const noexcept { return waypoints_; }
  double duration() const { return waypoints_.back().t; }
  double start_s() const { return waypoints_.front().s; }
  double end_s() const { return waypoints_.back().s; }
  double min_s() const;

  /// Linear interpolation; exact at waypoint times. DomainError outside
  /// [0, duration].
  double s_at(double t) const;

 private:
  std::vector<Waypoint> waypoints_;
};

/// (0, 0) -> (duration, 1).
AnnealPath forward_path(double duration);

/// Reverse-anneal cycle: 1 -> s_prime over ramp (1 - s_prime), hold tau,
/// back to 1 over the same ramp. `ramp` is time per unit of s. Zero-length
/// segments are dropped, so s_prime = 1 gives a constant path of length tau.
AnnealPath local_search_path(double s_prime, double tau, double ramp);

/// Constant s for `duration` (a pure hold).
AnnealPath hold_path(double s, double duration);

}  // namespace qal
