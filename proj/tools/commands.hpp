#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qal/hybrid.hpp"
#include "qal/io.hpp"
#include "qal/local_search.hpp"
#include "qal/master_equation.hpp"

namespace qal::cli {

inline constexpr const char* kVersion = "0.1.0";

enum class Mode { local_search, sweep, solve, spectrum, oracle };
std::string to_string(Mode mode);

struct GenerateSpec {
  std::string graph = "ring";  ///< ring | path | complete | king
  int n = 6;
  CoefficientDistribution distribution = CoefficientDistribution::pm_one;
  std::uint64_t seed = 0;
};

HardwareGraph make_graph(const std::string& kind, int n);
ProblemInstance generate(const GenerateSpec& spec);

struct ProblemSource {
  std::string file;  ///< as written in the config
  std::optional<GenerateSpec> generator;
  std::optional<ProblemInstance> inline_problem;
};

struct LocalSearchBlock {
  LocalSearchParams params;
  SpinState start;
  PrepareMethod prepare = PrepareMethod::direct;
  double prepare_duration = 100.0;
};

struct SweepBlock {
  std::vector<double> s_prime;
  std::vector<double> tau{0.0};
  std::vector<double> temperature;
  double ramp = 10.0;
  double eta = BathParams{}.eta;
  double omega_c = BathParams{}.omega_c;
  std::int64_t samples = 1000;
  SamplingMode sampling = SamplingMode::multinomial;
  SpinState start;
  std::optional<CoefficientDelta> perturb;
  std::int64_t max_points = 4096;
};

struct SolverBlock {
  std::string algorithm;  ///< qpa | qpt | sa | pt
  std::vector<double> ladder_s;
  int population = 64;
  int sweeps = 50;
  LocalSearchParams move;
  Reweight reweight = Reweight::t_eff;
  std::vector<double> classical_temperatures;
  /// sa: [hot, cold]; pt: one per replica (defaults to the ladder's T_eff).
  std::vector<double> temperatures;
};

struct SpectrumBlock {
  std::vector<double> s;
  int levels = 4;
};

struct OracleBlock {
  std::optional<double> temperature;  ///< adds a Gibbs probability column
};

struct ExperimentConfig {
  ProblemSource problem;
  Schedule schedule;
  double s_step = MasterOptions{}.s_step;
  double dt = 0.0;
  double rate_step_limit = MasterOptions{}.rate_step_limit;
  std::uint64_t seed = 0;
  std::string output;
  Mode mode = Mode::local_search;
  LocalSearchBlock local_search;
  SweepBlock sweep;
  SolverBlock solver;
  SpectrumBlock spectrum;
  OracleBlock oracle;
  std::string base_dir;  ///< resolves relative problem paths; not echoed
};

/// ConfigError with field-level messages on any problem.
ExperimentConfig parse_config(const io::Json& j, const std::string& base_dir = "");
/// Effective config after defaults; parse_config(config_to_json(c)) == c.
io::Json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::string& path);

ProblemInstance load_problem(const ExperimentConfig& config);

struct GlobalOptions {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  bool verify = false;
  std::optional<int> max_qubits;
};

/// Outcome of one command: the data file contents, the metadata sidecar,
/// human-readable report lines and the exit code.
struct CommandOutput {
  std::string data;
  io::Json meta;
  std::string report;
  int exit_code = 0;
};

CommandOutput cmd_generate(const GenerateSpec& spec);
CommandOutput cmd_local_search(const ExperimentConfig& config, const GlobalOptions& options);
CommandOutput cmd_sweep(const ExperimentConfig& config, const GlobalOptions& options);
CommandOutput cmd_solve(const ExperimentConfig& config, const GlobalOptions& options);
CommandOutput cmd_spectrum(const ExperimentConfig& config, const GlobalOptions& options);
CommandOutput cmd_oracle(const ExperimentConfig& config, const GlobalOptions& options);

/// Full command line entry point. Writes <out> and <out>.meta.json and
/// returns the process exit code (0 ok, 1 runtime, 2 usage/config,
/// 3 verification mismatch).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qal::cli
