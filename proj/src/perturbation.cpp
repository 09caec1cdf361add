#include "qal/perturbation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qal/format.hpp"
#include "qal/error.hpp"

namespace qal {

namespace {

struct Pick {
  Eigen::Index column = 0;
  double overlap = 0.0;
};

Pick best_overlap(const EigenSystem& eig, const Eigen::VectorXd& previous) {
  const Eigen::VectorXd overlaps = eig.vectors.transpose() * previous;
  Eigen::Index arg = 0;
  overlaps.cwiseAbs().maxCoeff(&arg);
  return {arg, overlaps(arg)};
}

}  // namespace

DressedState dressed_state(const ProblemInstance& problem, const Schedule& schedule, double s,
                           const SpinState& origin, const ContinuationOptions& options) {
  if (origin.size() != problem.n()) throw DimensionError("dressed_state: origin length does not match the problem");
  if (!(s > 0.0 && s <= 1.0)) throw DomainError("dressed_state: s must be in (0, 1]");
  const double e0 = energy(origin, problem);
  const double tol = 1e-12 * std::max(1.0, problem.coefficient_scale());
  for (int i = 0; i < problem.n(); ++i)
    if (std::abs(energy(origin.flipped(i), problem) - e0) <= tol)
      throw DomainError("origin " + origin.to_string() + " is degenerate with its neighbour across qubit " +
                        std::to_string(i));

  const Eigen::Index dim = Eigen::Index{1} << problem.n();
  const auto home = static_cast<Eigen::Index>(origin.index());
  DressedState out{origin, 1.0, Eigen::VectorXd::Zero(dim), 0.0, 0};
  out.amplitudes(home) = 1.0;

  auto advance = [&](double target, double accept_below) -> bool {
    const EigenSystem eig = spectrum_at(problem, schedule, target, options.max_qubits);
    const Pick pick = best_overlap(eig, out.amplitudes);
    if (std::abs(pick.overlap) < accept_below) return false;
    out.amplitudes = eig.vectors.col(pick.column) * (pick.overlap < 0.0 ? -1.0 : 1.0);
    out.energy = eig.values(pick.column);
    out.level = static_cast<int>(pick.column);
    out.s = target;
    return true;
  };

  if (s == 1.0) {
    // the eigenvector at A = 0 is the basis state itself
    const EigenSystem eig = spectrum_at(problem, schedule, 1.0, options.max_qubits);
    out.energy = schedule.eval(1.0).B * e0;
    for (Eigen::Index k = 0; k < eig.dim(); ++k)
      if (eig.vectors(home, k) == 1.0) out.level = static_cast<int>(k);
    return out;
  }

  const double step = (1.0 - s) / options.steps;
  for (int k = 1; k <= options.steps; ++k) {
    const double target = k == options.steps ? s : 1.0 - k * step;
    const double from = out.s;
    const DressedState saved = out;
    if (advance(target, options.refine_below)) continue;
    out = saved;
    for (int j = 1; j <= options.densify; ++j) {
      const double sub = j == options.densify ? target : from + (target - from) * j / options.densify;
      if (!advance(sub, options.lost_below))
        throw ContinuationError("tracking of " + origin.to_string() + " lost at s = " + std::to_string(sub), sub);
    }
  }

  Eigen::Index dominant = 0;
  out.amplitudes.cwiseAbs().maxCoeff(&dominant);
  if (dominant != home)
    throw ContinuationError("dressed state of " + origin.to_string() + " is no longer dominated by its origin at s = " +
                                std::to_string(s),
                            s);
  return out;
}

double tunneling_element(const DressedState& a, const DressedState& b) {
  if (a.amplitudes.size() != b.amplitudes.size()) throw DimensionError("tunneling_element: dimension mismatch");
  const int n = a.origin.size();
  double sum = 0.0;
  for (Eigen::Index x = 0; x < a.amplitudes.size(); ++x) {
    const int down = std::popcount(static_cast<std::uint64_t>(x));
    sum += a.amplitudes(x) * b.amplitudes(x) * static_cast<double>(n - 2 * down);
  }
  return std::abs(sum);
}

double tunneling_element(const ProblemInstance& problem, const Schedule& schedule, double s,
                         const SpinState& origin_a, const SpinState& origin_b, const ContinuationOptions& options) {
  const auto a = dressed_state(problem, schedule, s, origin_a, options);
  const auto b = origin_a == origin_b ? a : dressed_state(problem, schedule, s, origin_b, options);
  return tunneling_element(a, b);
}

ScalingFit scaling_fit(const ProblemInstance& problem, const Schedule& schedule, double s, const SpinState& origin,
                       const std::vector<SpinState>& targets, const ContinuationOptions& options) {
  std::vector<std::pair<int, SpinState>> by_distance;
  for (const auto& t : targets) by_distance.emplace_back(hamming_distance(origin, t), t);
  std::sort(by_distance.begin(), by_distance.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t k = 0; k < by_distance.size(); ++k) {
    if (by_distance[k].first == 0) throw DomainError("scaling_fit: target coincides with the origin");
    if (k > 0 && by_distance[k].first == by_distance[k - 1].first)
      throw DomainError("scaling_fit: two targets at Hamming distance " + std::to_string(by_distance[k].first));
  }

  const auto [A, B] = schedule.eval(s);
  ScalingFit fit;
  fit.predicted_slope = std::log(A / B);
  const auto home = dressed_state(problem, schedule, s, origin, options);
  for (const auto& [d, t] : by_distance) {
    const double element = tunneling_element(home, dressed_state(problem, schedule, s, t, options));
    if (element < 1e-14) {
      fit.excluded.push_back(d);
      fit.warnings.push_back("element at distance " + std::to_string(d) + " is below the 1e-14 floor; excluded");
      continue;
    }
    fit.distances.push_back(d);
    fit.elements.push_back(element);
    fit.log_elements.push_back(std::log(element));
  }
  const std::size_t m = fit.distances.size();
  if (m < 2) throw FitError("scaling_fit needs at least two usable points, have " + std::to_string(m));

  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    mx += fit.distances[k];
    my += fit.log_elements[k];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double dx = fit.distances[k] - mx;
    const double dy = fit.log_elements[k] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

std::string scaling_csv(const ScalingFit& fit) {
  std::ostringstream out;
  out << "hamming_distance,element,log_element\n";
  for (std::size_t k = 0; k < fit.distances.size(); ++k)
    out << fit.distances[k] << ',' << format_real(fit.elements[k]) << ','
        << format_real(fit.log_elements[k]) << '\n';
  out << "\nslope,predicted_ln_ratio,r_squared\n";
  out << format_real(fit.slope) << ',' << format_real(fit.predicted_slope) << ','
      << format_real(fit.r_squared) << '\n';
  return out.str();
}

double reduced_purity(const Eigen::VectorXd& amplitudes, int n_qubits, int qubit) {
  if (amplitudes.size() != (Eigen::Index{1} << n_qubits)) throw DimensionError("reduced_purity: dimension mismatch");
  if (qubit < 0 || qubit >= n_qubits) throw DimensionError("reduced_purity: qubit out of range");
  const Eigen::Index bit = Eigen::Index{1} << qubit;
  double r00 = 0.0, r11 = 0.0, r01 = 0.0;
  for (Eigen::Index x = 0; x < amplitudes.size(); ++x) {
    if (x & bit) continue;
    const double a0 = amplitudes(x);
    const double a1 = amplitudes(x | bit);
    r00 += a0 * a0;
    r11 += a1 * a1;
    r01 += a0 * a1;
  }
  const double norm = r00 + r11;
  return (r00 * r00 + r11 * r11 + 2.0 * r01 * r01) / (norm * norm);
}

}  // namespace qal
