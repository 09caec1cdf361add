#include "qal/eff_temp.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "qal/error.hpp"
#include "qal/format.hpp"

namespace qal {

namespace {

void check_args(double A, double B) {
  if (!(A > 0.0) || !std::isfinite(A))
    throw DomainError("transverse scale A must be positive (got " + std::to_string(A) + ")");
  if (!(B >= 0.0) || !std::isfinite(B))
    throw DomainError("longitudinal scale B must be nonnegative (got " + std::to_string(B) + ")");
}

}  // namespace

double amplitude_ratio(double A, double B) {
  check_args(A, B);
  return (std::hypot(A, B) + B) / A;
}

double effective_temperature(double A, double B) {
  check_args(A, B);
  if (B == 0.0) return kInfiniteTemperature;
  // ln(ratio) = asinh(B/A), so 2 / ln(ratio^2) = 1 / asinh(B/A)
  return 1.0 / std::asinh(B / A);
}

std::vector<EffTempPoint> ladder(const Schedule& schedule, const std::vector<double>& s_values) {
  std::vector<EffTempPoint> out;
  out.reserve(s_values.size());
  for (std::size_t k = 0; k < s_values.size(); ++k) {
    const double s = s_values[k];
    if (!(s >= 0.0 && s < 1.0)) throw DomainError("ladder s = " + std::to_string(s) + " outside [0, 1)");
    if (k > 0 && !(s > s_values[k - 1])) throw DomainError("ladder s values must be strictly ascending");
    const auto [A, B] = schedule.eval(s);
    if (!(A > 0.0)) throw DomainError("A(s) = 0 at ladder s = " + std::to_string(s));
    out.push_back({s, A, B, amplitude_ratio(A, B), effective_temperature(A, B)});
  }
  return out;
}

std::string format_temperature(double T) {
  if (T == kInfiniteTemperature) return "inf";
  return format_real(T);
}

double parse_temperature(const std::string& text) {
  if (text == "inf") return kInfiniteTemperature;
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw DomainError("cannot parse temperature '" + text + "'");
  return v;
}

std::string ladder_csv(const std::vector<EffTempPoint>& points) {
  std::ostringstream out;
  out << "s_prime,A,B,ratio,T_eff\n";
  for (const auto& p : points)
    out << format_real(p.s_prime) << ',' << format_real(p.A) << ',' << format_real(p.B) << ',' << format_real(p.ratio)
        << ',' << format_temperature(p.T_eff) << '\n';
  return out.str();
}

}  // namespace qal
