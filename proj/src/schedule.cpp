#include "qal/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "qal/error.hpp"

namespace qal {

namespace {

void check_unit(double s, const char* what) {
  if (!(s >= 0.0 && s <= 1.0))
    throw DomainError(std::string(what) + " = " + std::to_string(s) + " outside [0, 1]");
}

}  // namespace

Schedule::Schedule(Family family, double gamma, double lambda)
    : family_(family), gamma_(gamma), lambda_(lambda) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("schedule gamma must be positive");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("schedule lambda must be positive");
}

ScheduleValues Schedule::eval(double s) const {
  check_unit(s, "s");
  const double u = 1.0 - s;
  switch (family_) {
    case Family::linear:
      return {gamma_ * u, lambda_ * s};
    case Family::quadratic:
      return {gamma_ * u * u, lambda_ * s * s};
  }
  return {};
}

double Schedule::s_for_ratio(double ratio) const {
  if (!(ratio > 0.0) || !std::isfinite(ratio)) throw DomainError("A/B ratio must be positive and finite");
  // linear: gamma (1-s) / (lambda s) = r  ->  s = gamma / (gamma + r lambda)
  // quadratic: same with sqrt(r lambda / gamma) in place of r lambda / gamma
  const double q = ratio * lambda_ / gamma_;
  if (family_ == Family::linear) return 1.0 / (1.0 + q);
  return 1.0 / (1.0 + std::sqrt(q));
}

Schedule::Family parse_schedule_family(const std::string& name) {
  if (name == "linear") return Schedule::Family::linear;
  if (name == "quadratic") return Schedule::Family::quadratic;
  throw ConfigError("unknown schedule family '" + name + "' (expected linear or quadratic)");
}

std::string to_string(Schedule::Family family) {
  return family == Schedule::Family::linear ? "linear" : "quadratic";
}

AnnealPath::AnnealPath(std::vector<Waypoint> waypoints) : waypoints_(std::move(waypoints)) {
  if (waypoints_.empty()) throw DomainError("anneal path needs at least one waypoint");
  if (waypoints_.front().t != 0.0) throw DomainError("anneal path must start at t = 0");
  for (std::size_t k = 0; k < waypoints_.size(); ++k) {
    check_unit(waypoints_[k].s, "waypoint s");
    if (!std::isfinite(waypoints_[k].t)) throw DomainError("non-finite waypoint time");
    if (k > 0 && !(waypoints_[k].t > waypoints_[k - 1].t))
      throw DomainError("waypoint times must be strictly increasing");
  }
}

double AnnealPath::min_s() const {
  double m = waypoints_.front().s;
  for (const auto& w : waypoints_) m = std::min(m, w.s);
  return m;
}

double AnnealPath::s_at(double t) const {
  if (!(t >= 0.0 && t <= duration()))
    throw DomainError("t = " + std::to_string(t) + " outside [0, " + std::to_string(duration()) + "]");
  auto it = std::lower_bound(waypoints_.begin(), waypoints_.end(), t,
                             [](const Waypoint& w, double value) { return w.t < value; });
  if (it->t == t) return it->s;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double f = (t - lo.t) / (hi.t - lo.t);
  return lo.s + f * (hi.s - lo.s);
}

AnnealPath forward_path(double duration) {
  if (!(duration > 0.0) || !std::isfinite(duration)) throw DomainError("forward path duration must be positive");
  return AnnealPath({{0.0, 0.0}, {duration, 1.0}});
}

AnnealPath local_search_path(double s_prime, double tau, double ramp) {
  check_unit(s_prime, "s_prime");
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw DomainError("hold time tau must be nonnegative");
  if (!(ramp > 0.0) || !std::isfinite(ramp)) throw DomainError("ramp (time per unit s) must be positive");

  std::vector<Waypoint> w{{0.0, 1.0}};
  const double down = ramp * (1.0 - s_prime);
  double t = 0.0;
  if (down > 0.0) {
    t += down;
    w.push_back({t, s_prime});
  }
  if (tau > 0.0) {
    t += tau;
    w.push_back({t, s_prime});
  }
  if (down > 0.0) {
    t += down;
    w.push_back({t, 1.0});
  }
  return AnnealPath(std::move(w));
}

AnnealPath hold_path(double s, double duration) {
  if (!(duration > 0.0) || !std::isfinite(duration)) throw DomainError("hold duration must be positive");
  return AnnealPath({{0.0, s}, {duration, s}});
}

}  // namespace qal
