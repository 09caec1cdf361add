// Acceptance suite: one line per criterion. Usage: acceptance [ids...]
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "qal/eff_temp.hpp"
#include "qal/error.hpp"
#include "qal/hybrid.hpp"
#include "qal/local_search.hpp"
#include "qal/master_equation.hpp"
#include "qal/oracle.hpp"
#include "qal/perturbation.hpp"
#include "qal/rng.hpp"

using namespace qal;
using io::Json;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

// average ranks, ties shared
std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = 0.5 * static_cast<double>(i + j) + 1.0;
    i = j + 1;
  }
  return r;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = ranks(x), ry = ranks(y);
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / static_cast<double>(rx.size());
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / static_cast<double>(ry.size());
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t k = 0; k < rx.size(); ++k) {
    sxy += (rx[k] - mx) * (ry[k] - my);
    sxx += (rx[k] - mx) * (rx[k] - mx);
    syy += (ry[k] - my) * (ry[k] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("qal_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

int invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "qal");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

Verdict detailed_balance() {
  Rng rng(1);
  double worst_ratio = 0.0, worst_stationary = 0.0;
  int pairs = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(6));
    const auto graph = n >= 3 ? HardwareGraph::king_subgraph(n) : HardwareGraph::path(n);
    const auto p = random_instance(graph, CoefficientDistribution::uniform_range, rng.next());
    const double s = 0.05 + 0.9 * rng.uniform();
    const BathParams bath{0.05 + 0.95 * rng.uniform(), 0.001 + 0.1 * rng.uniform(), 1.0 + 19.0 * rng.uniform()};
    const auto eigs = spectrum_at(p, Schedule::linear(), s);
    const auto W = transition_rates(eigs, bath, n);
    for (Eigen::Index a = 0; a < W.cols(); ++a)
      for (Eigen::Index b = 0; b < a; ++b) {
        // pairs without sigma^z coupling (or with an underflowed rate) carry no ratio
        if (!(W(b, a) > 1e-290 && W(a, b) > 1e-290)) continue;
        ++pairs;
        const double expect = std::exp(-(eigs.values(b) - eigs.values(a)) / bath.temperature);
        worst_ratio = std::max(worst_ratio, std::abs(W(b, a) / W(a, b) / expect - 1.0));
      }
    const auto gibbs = oracle::gibbs_over_eigenvalues(eigs, bath.temperature);
    worst_stationary = std::max(worst_stationary, (W * gibbs.p).cwiseAbs().maxCoeff());
  }
  return {worst_ratio <= 1e-10 && worst_stationary <= 1e-10,
          std::to_string(pairs) + " pairs, max rel ratio error " + fmt(worst_ratio) + ", max |W p_gibbs| " +
              fmt(worst_stationary)};
}

Verdict gibbs_convergence() {
  const auto p = random_instance(HardwareGraph::ring(4), CoefficientDistribution::uniform_range, 2);
  const BathParams bath{0.2, 0.01, 10.0};
  const double s = 0.6;
  const MasterEquation me(p, Schedule::linear(), bath);
  const auto W = *me.rates(s);
  double slowest = INFINITY;
  for (Eigen::Index a = 0; a < W.cols(); ++a)
    for (Eigen::Index b = 0; b < W.rows(); ++b)
      if (a != b && W(b, a) > 0.0) slowest = std::min(slowest, W(b, a));
  const double hold = 50.0 / slowest;
  PopulationVector start{Eigen::VectorXd::Zero(16), s};
  start.p(15) = 1.0;  // top eigenstate
  const auto out = me.evolve(hold_path(s, hold), start);
  const auto gibbs = oracle::gibbs_over_eigenvalues(*me.eigensystem(s), bath.temperature);
  const double tv = 0.5 * (out.p - gibbs.p).cwiseAbs().sum();
  return {tv < 1e-3, "hold " + fmt(hold) + ", TV " + fmt(tv)};
}

Verdict suppression_slope() {
  const ProblemInstance chain(HardwareGraph::path(6), {0.69, 0.68, 1.46, 0.51, 1.16, 0.79}, {1, 1, 1, 1, 1});
  const auto lin = Schedule::linear();
  const auto origin = SpinState::all_up(6);
  std::vector<SpinState> targets;
  auto t = origin;
  for (int d = 0; d < 3; ++d) targets.push_back(t = t.flipped(d));
  bool ok = true;
  std::string detail;
  std::vector<double> slopes;
  for (double ratio : {0.05, 0.1}) {
    const auto fit = scaling_fit(chain, lin, lin.s_for_ratio(ratio), origin, targets);
    const double predicted = std::log(ratio);
    const double rel = std::abs(fit.slope - predicted) / std::abs(predicted);
    ok = ok && rel <= 0.25 && fit.r_squared > 0.95 && fit.excluded.empty();
    slopes.push_back(fit.slope);
    detail += "A/B=" + fmt(ratio) + " slope " + fmt(fit.slope) + " (ln " + fmt(predicted) + ", rel " + fmt(rel) +
              ") r2 " + fmt(fit.r_squared) + "; ";
  }
  ok = ok && slopes[0] < slopes[1];
  return {ok, detail + "slope(0.05) < slope(0.1): " + (slopes[0] < slopes[1] ? "yes" : "no")};
}

Verdict eff_temp_cross_check() {
  double worst = 0.0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      const double A = 0.05 + 0.25 * i;
      const double B = 0.3 * j;
      Eigen::MatrixXd H(2, 2);
      H << B, -A, -A, -B;  // -A X + B Z with Z|up> = +|up>
      const auto eigs = eigendecompose({H});
      const double big = std::max(std::abs(eigs.vectors(0, 0)), std::abs(eigs.vectors(1, 0)));
      const double small = std::min(std::abs(eigs.vectors(0, 0)), std::abs(eigs.vectors(1, 0)));
      const double expect = amplitude_ratio(A, B);
      worst = std::max(worst, std::abs(big / small - expect) / expect);
    }
  const double T11 = effective_temperature(1.0, 1.0);
  const double err = std::abs(T11 - 1.0 / std::log(1.0 + std::sqrt(2.0)));
  return {worst <= 1e-12 && err <= 1e-9 && std::abs(T11 - 1.134593) < 5e-7,
          "max rel ratio error " + fmt(worst) + ", T_eff(1,1) = " + fmt(T11)};
}

Verdict locality() {
  Scratch scratch;
  const std::vector<double> s_values{0.95, 0.9, 0.8, 0.7, 0.6, 0.5};
  const Json cfg{{"problem", {{"generate", {{"graph", "ring"}, {"n", 6}, {"seed", 1}, {"distribution", "uniform_range"}}}}},
                 {"seed", 5},
                 {"sweep",
                  {{"s_prime", s_values},
                   {"tau", {10.0}},
                   {"temperature", {0.1}},
                   {"samples", 100000},
                   {"start", {1, -1, 1, 1, -1, -1}}}}};
  io::write_text(scratch.path("sweep.json"), cfg.dump(2));
  if (invoke({"--config", scratch.path("sweep.json"), "--out", scratch.path("sweep.csv"), "sweep"}) != 0)
    return {false, "sweep command failed"};
  std::istringstream in(io::read_text(scratch.path("sweep.csv")));
  std::string line;
  std::getline(in, line);
  std::vector<double> s_col, hamming;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() == 6 && cells[0] == "baseline" && cells[4] == "mean_hamming") {
      s_col.push_back(std::stod(cells[1]));
      hamming.push_back(std::stod(cells[5]));
    }
  }
  if (s_col.size() != s_values.size()) return {false, "unexpected sweep table"};
  // rows come sorted by ascending s'; walk them from s' = 0.95 down
  bool monotone = true;
  std::string detail;
  for (std::size_t k = s_col.size(); k-- > 0;) {
    if (k + 1 < s_col.size() && hamming[k] < hamming[k + 1]) monotone = false;
    detail += fmt(s_col[k]) + ":" + fmt(hamming[k]) + " ";
  }
  std::vector<double> minus_s;
  for (double s : s_col) minus_s.push_back(-s);
  const double rho = spearman(minus_s, hamming);
  return {monotone && rho >= 0.8, detail + "rho " + fmt(rho) + (monotone ? ", non-decreasing" : ", NOT monotone")};
}

Verdict preparation() {
  const auto ring = HardwareGraph::ring(4);
  const BathParams bath{0.05, 0.01, 10.0};
  Rng rng(6);
  std::set<std::uint64_t> chosen;
  while (chosen.size() < 5) chosen.insert(rng.below(16));
  double worst = 1.0;
  std::string detail;
  for (auto y : chosen) {
    const auto prep =
        prepare_initial(SpinState::from_index(4, y), PrepareMethod::qaa_on_h_init, ring, Schedule::linear(), 200.0, bath);
    worst = std::min(worst, prep.fidelity);
    detail += SpinState::from_index(4, y).to_string() + ":" + fmt(prep.fidelity) + " ";
  }
  return {worst >= 0.99, detail + "min " + fmt(worst)};
}

Verdict hybrid_vs_oracle() {
  const auto lin = Schedule::linear();
  HybridConfig pa;
  pa.ladder = ladder(lin, {0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9});
  pa.population = 64;
  pa.move.tau = 10.0;
  pa.move.ramp = 10.0;
  pa.move.bath = {0.2, 0.01, 10.0};
  pa.integrator.cache_propagators = true;
  pa.integrator.s_step = 0.025;
  HybridConfig pt = pa;
  pt.ladder = ladder(lin, {0.6, 0.7, 0.8, 0.9});
  pt.sweeps = 50;

  int pa_hits = 0, pt_hits = 0, sa_hits = 0, cpt_hits = 0;
  for (int k = 0; k < 10; ++k) {
    const auto p = random_instance(HardwareGraph::king_subgraph(10), CoefficientDistribution::pm_one,
                                   static_cast<std::uint64_t>(1000 + k));
    const double truth = oracle::ground_energy(p);
    pa.seed = pt.seed = static_cast<std::uint64_t>(k);
    const LocalSearcher searcher(p, lin, pa.move.bath, pa.integrator);
    const auto a = q_population_annealing(searcher, pa);
    const auto b = q_parallel_tempering(searcher, pt);
    // classical baselines with the same move counts: 512 sweeps and 4 x 50 sweeps
    const auto c = classical_sa(p, 3.0, 0.1, static_cast<int>(a.moves), static_cast<std::uint64_t>(k));
    const auto d = classical_pt(p, {3.0, 1.5, 0.8, 0.4}, 50, static_cast<std::uint64_t>(k));
    const double tol = 1e-9 * std::max(1.0, std::abs(truth));
    pa_hits += std::abs(a.best_energy - truth) <= tol;
    pt_hits += std::abs(b.best_energy - truth) <= tol;
    sa_hits += std::abs(c.best_energy - truth) <= tol;
    cpt_hits += std::abs(d.best_energy - truth) <= tol;
    std::cout << "    instance " << k << ": ground " << truth << " | qpa " << a.best_energy << " (" << a.moves
              << " moves) | qpt " << b.best_energy << " (" << b.moves << ") | sa " << c.best_energy << " ("
              << c.moves << ") | pt " << d.best_energy << " (" << d.moves << ")\n";
  }
  return {pa_hits >= 9 && pt_hits >= 9, "qpa " + std::to_string(pa_hits) + "/10, qpt " + std::to_string(pt_hits) +
                                            "/10; baselines sa " + std::to_string(sa_hits) + "/10, pt " +
                                            std::to_string(cpt_hits) + "/10"};
}

Verdict identity_and_determinism() {
  // s' = 1 cycles
  bool identity = true;
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(5));
    const auto p = random_instance(HardwareGraph::path(n), CoefficientDistribution::uniform_range, rng.next());
    const LocalSearcher searcher(p, Schedule::linear(), {0.3, 0.05, 10.0});
    const auto start = SpinState::from_index(n, rng.below(std::uint64_t{1} << n));
    const auto dist = searcher.outcome_distribution(start, 1.0, 20.0 * rng.uniform(), 10.0);
    identity = identity && std::abs(dist[start.index()] - 1.0) <= 1e-12;
    LocalSearchParams params;
    params.s_prime = 1.0;
    params.bath = {0.3, 0.05, 10.0};
    params.samples = 200;
    const auto set = searcher.run(start, params);
    identity = identity && set.outcomes.size() == 1 && set.outcomes[0].state == start;
  }

  Scratch scratch;
  const Json problem{{"generate", {{"graph", "king"}, {"n", 6}, {"seed", 4}}}};
  const Json move{{"tau", 5.0}};
  const std::vector<std::pair<std::string, Json>> runs = {
      {"local-search",
       {{"problem", problem}, {"seed", 1}, {"local_search", {{"s_prime", 0.7}, {"tau", 3.0}, {"start", {1, -1, 1, 1, -1, 1}}}}}},
      {"sweep",
       {{"problem", problem},
        {"seed", 2},
        {"sweep",
         {{"s_prime", {0.6, 0.8}}, {"tau", {0.0, 5.0}}, {"temperature", {0.1, 0.3}}, {"start", {1, 1, 1, -1, -1, 1}}}}}},
      {"solve",
       {{"problem", problem},
        {"seed", 3},
        {"solver", {{"algorithm", "qpa"}, {"ladder_s", {0.5, 0.7, 0.85}}, {"population", 16}, {"move", move}}}}},
      {"solve",
       {{"problem", problem},
        {"seed", 3},
        {"solver", {{"algorithm", "qpt"}, {"ladder_s", {0.6, 0.8}}, {"sweeps", 10}, {"move", move}}}}},
      {"solve", {{"problem", problem}, {"seed", 3}, {"solver", {{"algorithm", "sa"}, {"sweeps", 100}, {"temperatures", {3.0, 0.1}}}}}},
      {"solve", {{"problem", problem}, {"seed", 3}, {"solver", {{"algorithm", "pt"}, {"sweeps", 50}, {"temperatures", {2.0, 1.0, 0.3}}}}}},
      {"spectrum", {{"problem", problem}, {"spectrum", {{"s", {0.1, 0.5, 0.9, 1.0}}, {"levels", 4}}}}},
      {"oracle", {{"problem", problem}, {"oracle", {{"temperature", 0.5}}}}},
  };
  int identical = 0, total = 0;
  std::string failures;
  const std::vector<std::string> gen{"generate", "--graph", "king", "--n", "9", "--seed", "11"};
  for (int rep = 0; rep < 2; ++rep) {
    auto args = gen;
    args.insert(args.end(), {"--out", scratch.path("gen" + std::to_string(rep))});
    invoke(args);
  }
  ++total;
  if (io::read_text(scratch.path("gen0")) == io::read_text(scratch.path("gen1"))) ++identical;
  else failures += " generate";
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto cfg = scratch.path("cfg" + std::to_string(k) + ".json");
    io::write_text(cfg, runs[k].second.dump(2));
    std::string first;
    bool same = true;
    for (int rep = 0; rep < 2; ++rep) {
      const auto out = scratch.path("out" + std::to_string(k) + "_" + std::to_string(rep));
      if (invoke({"--config", cfg, "--out", out, runs[k].first}) != 0) same = false;
      const auto text = fs::exists(out) ? io::read_text(out) : std::string();
      if (rep == 0) first = text;
      else same = same && !text.empty() && text == first;
    }
    ++total;
    if (same) ++identical;
    else failures += " " + runs[k].first + "#" + std::to_string(k);
  }
  return {identity && identical == total, std::string("s'=1 identity ") + (identity ? "holds" : "BROKEN") + ", " +
                                              std::to_string(identical) + "/" + std::to_string(total) +
                                              " commands byte-identical" + failures};
}

Verdict entanglement() {
  const ProblemInstance p(HardwareGraph(2, {{0, 1}}), {0.3, -0.2}, {1.0});
  const auto lin = Schedule::linear();
  const auto d = dressed_state(p, lin, lin.s_for_ratio(0.3), oracle::brute_force(p).ground_state());
  const double purity = reduced_purity(d.amplitudes, 2, 0);
  return {d.level == 0 && purity < 1.0 - 1e-6, "level " + std::to_string(d.level) + ", purity " + fmt(purity)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"detailed balance identity", detailed_balance},
      {"gibbs convergence", gibbs_convergence},
      {"tunneling suppression slope", suppression_slope},
      {"effective temperature cross-check", eff_temp_cross_check},
      {"locality control", locality},
      {"initial-state preparation", preparation},
      {"hybrid solvers vs oracle", hybrid_vs_oracle},
      {"identity and determinism", identity_and_determinism},
      {"entanglement sanity", entanglement},
  };
  std::set<int> wanted;
  for (int k = 1; k < argc; ++k) wanted.insert(std::atoi(argv[k]));

  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!wanted.empty() && !wanted.count(id)) continue;
    const auto started = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << id << " " << criteria[k].first << ": " << v.detail << " ("
              << fmt(secs) << " s)" << std::endl;
    if (!v.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
