#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "qal/hybrid.hpp"
#include "qal/ising.hpp"
#include "qal/local_search.hpp"
#include "qal/quantum_sim.hpp"
#include "qal/schedule.hpp"

namespace qal::io {

using Json = nlohmann::ordered_json;

/// Field accessor that reports the dotted path of a bad field as a
/// ConfigError.
class Fields {
 public:
  Fields(const Json& object, std::string path);

  bool has(const std::string& key) const;
  Fields sub(const std::string& key) const;
  const Json& raw(const std::string& key) const;
  std::string where(const std::string& key) const;

  double real(const std::string& key) const;
  double real(const std::string& key, double fallback) const;
  std::int64_t integer(const std::string& key) const;
  std::int64_t integer(const std::string& key, std::int64_t fallback) const;
  std::uint64_t seed(const std::string& key, std::uint64_t fallback) const;
  std::string text(const std::string& key) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  std::vector<double> reals(const std::string& key) const;
  SpinState spins(const std::string& key) const;

  /// ConfigError for any key not in `allowed`.
  void only(std::initializer_list<const char*> allowed) const;

  const Json& json() const noexcept { return *object_; }
  const std::string& path() const noexcept { return path_; }

 private:
  const Json* object_;
  std::string path_;
};

/// {"n": N, "h": [...], "J": [[i, j, v], ...]} with i < j.
ProblemInstance problem_from_json(const Json& j);
Json problem_to_json(const ProblemInstance& problem);
std::string problem_text(const ProblemInstance& problem);

Schedule schedule_from_json(const Fields& f);
Json schedule_to_json(const Schedule& schedule);

BathParams bath_from_json(const Fields& f);
Json bath_to_json(const BathParams& bath);

/// Everything except the seed, which configs carry separately.
LocalSearchParams local_search_from_json(const Fields& f);
Json local_search_to_json(const LocalSearchParams& params);

CoefficientDelta delta_from_json(const Fields& f, int n);
Json delta_to_json(const CoefficientDelta& delta);

Json spins_to_json(const SpinState& s);

/// Records, header and summary of one local search.
Json sample_set_to_json(const SampleSet& set, const LocalSearchParams& params);

/// Per-generation rows followed by a best-state block.
std::string solve_result_csv(const SolveResult& result);

std::string read_text(const std::string& path);
/// IoError if the file cannot be written.
void write_text(const std::string& path, const std::string& content);

std::uint64_t fnv1a(const std::string& bytes);

}  // namespace qal::io
