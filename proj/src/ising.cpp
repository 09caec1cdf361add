#include "qal/ising.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "qal/error.hpp"
#include "qal/rng.hpp"

namespace qal {

SpinState::SpinState(std::vector<int> spins) : spins_(std::move(spins)) {
  for (std::size_t i = 0; i < spins_.size(); ++i) {
    if (spins_[i] != 1 && spins_[i] != -1)
      throw DomainError("spin " + std::to_string(i) + " is " + std::to_string(spins_[i]) +
                        ", expected -1 or +1");
  }
}

SpinState SpinState::all_up(int n) { return SpinState(std::vector<int>(static_cast<std::size_t>(n), 1)); }

SpinState SpinState::from_index(int n, std::uint64_t index) {
  if (n < 0 || n > 63) throw DimensionError("qubit count out of range for a basis index");
  std::vector<int> s(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = ((index >> i) & 1U) ? -1 : 1;
  return SpinState(std::move(s));
}

std::uint64_t SpinState::index() const {
  if (spins_.size() > 63) throw DimensionError("state too long for a basis index");
  std::uint64_t x = 0;
  for (std::size_t i = 0; i < spins_.size(); ++i)
    if (spins_[i] < 0) x |= std::uint64_t{1} << i;
  return x;
}

SpinState SpinState::flipped(int i) const {
  SpinState copy = *this;
  copy.spins_.at(static_cast<std::size_t>(i)) *= -1;
  return copy;
}

std::string SpinState::to_string() const {
  std::string out;
  out.reserve(spins_.size());
  for (int s : spins_) out.push_back(s > 0 ? '+' : '-');
  return out;
}

HardwareGraph::HardwareGraph(int n, std::vector<Edge> edges) : n_(n) {
  if (n < 0) throw DimensionError("negative qubit count");
  std::set<std::pair<int, int>> seen;
  edges_.reserve(edges.size());
  for (auto e : edges) {
    if (e.i == e.j) throw DomainError("self-loop on qubit " + std::to_string(e.i));
    if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n)
      throw DimensionError("edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                           ") outside 0.." + std::to_string(n - 1));
    if (e.i > e.j) std::swap(e.i, e.j);
    if (!seen.emplace(e.i, e.j).second)
      throw DomainError("duplicate edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) + ")");
    edges_.push_back(e);
  }
}

HardwareGraph HardwareGraph::path(int n) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return {n, std::move(e)};
}

HardwareGraph HardwareGraph::ring(int n) {
  if (n < 3) return path(n);
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  e.push_back({0, n - 1});
  return {n, std::move(e)};
}

HardwareGraph HardwareGraph::complete(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.push_back({i, j});
  return {n, std::move(e)};
}

HardwareGraph HardwareGraph::king(int rows, int cols) {
  if (rows < 0 || cols < 0) throw DimensionError("negative grid size");
  std::vector<Edge> e;
  auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) e.push_back({id(r, c), id(r, c + 1)});
      if (r + 1 < rows) {
        e.push_back({id(r, c), id(r + 1, c)});
        if (c + 1 < cols) e.push_back({id(r, c), id(r + 1, c + 1)});
        if (c > 0) e.push_back({id(r, c), id(r + 1, c - 1)});
      }
    }
  }
  return {rows * cols, std::move(e)};
}

HardwareGraph HardwareGraph::king_subgraph(int n) {
  if (n <= 0) return {0, {}};
  const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  const int rows = (n + cols - 1) / cols;
  const auto full = king(rows, cols);
  std::vector<Edge> e;
  for (const auto& edge : full.edges())
    if (edge.i < n && edge.j < n) e.push_back(edge);
  return {n, std::move(e)};
}

int HardwareGraph::find_edge(int i, int j) const {
  if (i > j) std::swap(i, j);
  for (std::size_t k = 0; k < edges_.size(); ++k)
    if (edges_[k].i == i && edges_[k].j == j) return static_cast<int>(k);
  return -1;
}

bool HardwareGraph::connected() const {
  if (n_ <= 1) return true;
  std::vector<int> parent(static_cast<std::size_t>(n_));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  int components = n_;
  for (const auto& e : edges_) {
    int a = find(e.i), b = find(e.j);
    if (a != b) {
      parent[static_cast<std::size_t>(a)] = b;
      --components;
    }
  }
  return components == 1;
}

ProblemInstance::ProblemInstance(HardwareGraph graph, std::vector<double> h, std::vector<double> J)
    : graph_(std::move(graph)), h_(std::move(h)), J_(std::move(J)) {
  if (h_.size() != static_cast<std::size_t>(graph_.n()))
    throw DimensionError("h has " + std::to_string(h_.size()) + " entries, expected " +
                         std::to_string(graph_.n()));
  if (J_.size() != graph_.edges().size())
    throw DimensionError("J has " + std::to_string(J_.size()) + " entries, expected one per edge (" +
                         std::to_string(graph_.edges().size()) + ")");
  for (double v : h_)
    if (!std::isfinite(v)) throw DomainError("non-finite field coefficient");
  for (double v : J_)
    if (!std::isfinite(v)) throw DomainError("non-finite coupling coefficient");
}

double ProblemInstance::coefficient_scale() const {
  std::vector<double> local(h_.size());
  for (std::size_t i = 0; i < h_.size(); ++i) local[i] = std::abs(h_[i]);
  for (std::size_t k = 0; k < J_.size(); ++k) {
    local[static_cast<std::size_t>(graph_.edges()[k].i)] += std::abs(J_[k]);
    local[static_cast<std::size_t>(graph_.edges()[k].j)] += std::abs(J_[k]);
  }
  double m = 0.0;
  for (double v : local) m = std::max(m, v);
  return m;
}

double energy(const SpinState& state, const ProblemInstance& problem) {
  if (state.size() != problem.n())
    throw DimensionError("state has " + std::to_string(state.size()) + " spins, problem has " +
                         std::to_string(problem.n()) + " qubits");
  double e = 0.0;
  for (int i = 0; i < problem.n(); ++i) e -= problem.h()[static_cast<std::size_t>(i)] * state[i];
  const auto& edges = problem.graph().edges();
  for (std::size_t k = 0; k < edges.size(); ++k) e -= problem.J()[k] * state[edges[k].i] * state[edges[k].j];
  return e;
}

double energy_of_index(std::uint64_t index, const ProblemInstance& problem) {
  auto spin = [index](int i) { return ((index >> i) & 1U) ? -1.0 : 1.0; };
  double e = 0.0;
  for (int i = 0; i < problem.n(); ++i) e -= problem.h()[static_cast<std::size_t>(i)] * spin(i);
  const auto& edges = problem.graph().edges();
  for (std::size_t k = 0; k < edges.size(); ++k) e -= problem.J()[k] * spin(edges[k].i) * spin(edges[k].j);
  return e;
}

int hamming_distance(const SpinState& a, const SpinState& b) {
  if (a.size() != b.size())
    throw DimensionError("hamming_distance: lengths " + std::to_string(a.size()) + " and " +
                         std::to_string(b.size()));
  int d = 0;
  for (int i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

SpinState compose(const SpinState& y, const SpinState& s) {
  if (y.size() != s.size()) throw DimensionError("compose: length mismatch");
  std::vector<int> out(static_cast<std::size_t>(y.size()));
  for (int i = 0; i < y.size(); ++i) out[static_cast<std::size_t>(i)] = y[i] * s[i];
  return SpinState(std::move(out));
}

ProblemInstance init_hamiltonian(const SpinState& y, const HardwareGraph& graph) {
  if (y.size() != graph.n()) throw DimensionError("init_hamiltonian: state length does not match graph");
  std::vector<double> h(static_cast<std::size_t>(graph.n()));
  for (int i = 0; i < graph.n(); ++i) h[static_cast<std::size_t>(i)] = y[i];
  std::vector<double> J;
  J.reserve(graph.edges().size());
  for (const auto& e : graph.edges()) J.push_back(static_cast<double>(y[e.i] * y[e.j]));
  return {graph, std::move(h), std::move(J)};
}

ProblemInstance gauge_transform(const ProblemInstance& problem, const SpinState& y) {
  if (y.size() != problem.n()) throw DimensionError("gauge_transform: state length does not match problem");
  std::vector<double> h = problem.h();
  for (int i = 0; i < problem.n(); ++i) h[static_cast<std::size_t>(i)] *= y[i];
  std::vector<double> J = problem.J();
  const auto& edges = problem.graph().edges();
  for (std::size_t k = 0; k < edges.size(); ++k) J[k] *= y[edges[k].i] * y[edges[k].j];
  return {problem.graph(), std::move(h), std::move(J)};
}

CoefficientDistribution parse_distribution(const std::string& name) {
  if (name == "pm_one") return CoefficientDistribution::pm_one;
  if (name == "uniform_range" || name == "uniform") return CoefficientDistribution::uniform_range;
  throw ConfigError("unknown distribution '" + name + "' (expected pm_one or uniform_range)");
}

std::string to_string(CoefficientDistribution d) {
  return d == CoefficientDistribution::pm_one ? "pm_one" : "uniform_range";
}

ProblemInstance random_instance(const HardwareGraph& graph, CoefficientDistribution distribution,
                                std::uint64_t seed) {
  Rng rng(derive_seed(seed, {0x1517}));
  auto draw = [&]() -> double {
    if (distribution == CoefficientDistribution::pm_one) return static_cast<double>(rng.spin());
    return 2.0 * rng.uniform() - 1.0;
  };
  std::vector<double> h(static_cast<std::size_t>(graph.n()));
  for (auto& v : h) v = draw();
  std::vector<double> J(graph.edges().size());
  for (auto& v : J) v = draw();
  return {graph, std::move(h), std::move(J)};
}

ProblemInstance apply_delta(const ProblemInstance& problem, const CoefficientDelta& delta) {
  if (!delta.dh.empty() && delta.dh.size() != static_cast<std::size_t>(problem.n()))
    throw DimensionError("dh has " + std::to_string(delta.dh.size()) + " entries, expected " +
                         std::to_string(problem.n()));
  std::vector<double> h = problem.h();
  for (std::size_t i = 0; i < delta.dh.size(); ++i) h[i] += delta.dh[i];
  std::vector<Edge> edges = problem.graph().edges();
  std::vector<double> J = problem.J();
  for (const auto& [edge, d] : delta.dJ) {
    HardwareGraph probe(problem.n(), {edge});  // validates the pair
    const Edge e = probe.edges().front();
    auto it = std::find(edges.begin(), edges.end(), e);
    if (it == edges.end()) {
      edges.push_back(e);
      J.push_back(d);
    } else {
      J[static_cast<std::size_t>(it - edges.begin())] += d;
    }
  }
  return {HardwareGraph(problem.n(), std::move(edges)), std::move(h), std::move(J)};
}

}  // namespace qal
