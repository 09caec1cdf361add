#pragma once

#include <limits>
#include <string>
#include <vector>

#include "qal/schedule.hpp"

namespace qal {

inline constexpr double kInfiniteTemperature = std::numeric_limits<double>::infinity();

/// Effective temperature assigned to one value of the annealing parameter
/// through the single-qubit ground state of -A X + B Z.
struct EffTempPoint {
  double s_prime = 0.0;
  double A = 0.0;
  double B = 0.0;
  double ratio = 1.0;
  double T_eff = kInfiniteTemperature;

  bool infinite() const noexcept { return T_eff == kInfiniteTemperature; }
  /// 1 / T_eff, exactly 0 for the infinite-temperature point.
  double beta() const noexcept { return infinite() ? 0.0 : 1.0 / T_eff; }
};

/// Ground-state amplitude ratio (sqrt(A^2 + B^2) + B) / A of -A X + B Z.
/// Depends only on B/A. DomainError unless A > 0 and B >= 0.
double amplitude_ratio(double A, double B);

/// 2 / ln(ratio^2), which simplifies to 1 / asinh(B/A). Returns
/// kInfiniteTemperature exactly when B = 0.
double effective_temperature(double A, double B);

/// One point per s (ascending, each in [0, 1) with A(s) > 0).
std::vector<EffTempPoint> ladder(const Schedule& schedule, const std::vector<double>& s_values);

/// "inf" for infinite temperature, shortest round-trip decimal otherwise.
std::string format_temperature(double T);
double parse_temperature(const std::string& text);

/// CSV with header s_prime,A,B,ratio,T_eff.
std::string ladder_csv(const std::vector<EffTempPoint>& points);

}  // namespace qal
