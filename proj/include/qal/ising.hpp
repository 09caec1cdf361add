#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qal {

/// Classical spin configuration with entries in {-1, +1}.
///
/// Basis index convention used everywhere in the library: qubit i maps to
/// bit i of the index, with bit value 0 -> spin +1 and 1 -> spin -1. The
/// all-up state is index 0.
class SpinState {
 public:
  SpinState() = default;
  /// Throws DomainError if any entry is not exactly -1 or +1.
  explicit SpinState(std::vector<int> spins);

  static SpinState all_up(int n);
  static SpinState from_index(int n, std::uint64_t index);

  std::uint64_t index() const;
  int size() const noexcept { return static_cast<int>(spins_.size()); }
  int operator[](int i) const { return spins_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& spins() const noexcept { return spins_; }

  /// Copy with spin i negated.
  SpinState flipped(int i) const;

  /// "+-+-" style rendering.
  std::string to_string() const;

  friend bool operator==(const SpinState&, const SpinState&) = default;
  friend auto operator<=>(const SpinState&, const SpinState&) = default;

 private:
  std::vector<int> spins_;
};

struct Edge {
  int i = 0;
  int j = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected simple graph over qubits 0..n-1. Edges are stored with i < j
/// in insertion order.
class HardwareGraph {
 public:
  HardwareGraph() = default;
  /// Rejects self-loops, out-of-range endpoints and duplicate edges.
  HardwareGraph(int n, std::vector<Edge> edges);

  static HardwareGraph path(int n);
  static HardwareGraph ring(int n);
  static HardwareGraph complete(int n);
  /// King's graph on a rows x cols grid (row-major numbering).
  static HardwareGraph king(int rows, int cols);
  /// First n sites (row-major) of the smallest near-square king's graph
  /// with ceil(sqrt(n)) columns.
  static HardwareGraph king_subgraph(int n);

  int n() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  /// Index of edge (i, j) in edges(), or -1.
  int find_edge(int i, int j) const;
  bool connected() const;

  friend bool operator==(const HardwareGraph&, const HardwareGraph&) = default;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
};

/// Classical Ising problem H = -sum h_i s_i - sum J_ij s_i s_j.
class ProblemInstance {
 public:
  ProblemInstance() = default;
  /// h must have graph.n() entries and J one entry per graph edge.
  ProblemInstance(HardwareGraph graph, std::vector<double> h, std::vector<double> J);

  const HardwareGraph& graph() const noexcept { return graph_; }
  int n() const noexcept { return graph_.n(); }
  const std::vector<double>& h() const noexcept { return h_; }
  const std::vector<double>& J() const noexcept { return J_; }

  /// Largest |h_i| + sum |J_ij|, a bound on |energy|.
  double coefficient_scale() const;

  friend bool operator==(const ProblemInstance&, const ProblemInstance&) = default;

 private:
  HardwareGraph graph_;
  std::vector<double> h_;
  std::vector<double> J_;
};

/// Bare problem energy (B = 1).
double energy(const SpinState& state, const ProblemInstance& problem);

/// Energy of basis state `index` without building a SpinState.
double energy_of_index(std::uint64_t index, const ProblemInstance& problem);

int hamming_distance(const SpinState& a, const SpinState& b);

/// Element-wise product (y o s)_i = y_i s_i.
SpinState compose(const SpinState& y, const SpinState& s);

/// Gauge-transformed ferromagnet whose unique ground state is y:
/// h_i = y_i, J_ij = y_i y_j.
ProblemInstance init_hamiltonian(const SpinState& y, const HardwareGraph& graph);

/// h'_i = y_i h_i, J'_ij = y_i y_j J_ij.
ProblemInstance gauge_transform(const ProblemInstance& problem, const SpinState& y);

enum class CoefficientDistribution { pm_one, uniform_range };

/// Parses "pm_one" / "uniform_range"; throws ConfigError otherwise.
CoefficientDistribution parse_distribution(const std::string& name);
std::string to_string(CoefficientDistribution d);

/// Deterministic for a given (graph, distribution, seed). uniform_range
/// draws from [-1, 1].
ProblemInstance random_instance(const HardwareGraph& graph, CoefficientDistribution distribution,
                                std::uint64_t seed);

/// Adds coefficient deltas to a problem; couplings on absent edges are
/// appended to the graph.
struct CoefficientDelta {
  std::vector<double> dh;
  std::vector<std::pair<Edge, double>> dJ;
};
ProblemInstance apply_delta(const ProblemInstance& problem, const CoefficientDelta& delta);

}  // namespace qal
