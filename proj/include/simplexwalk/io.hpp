#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "simplexwalk/assumptions.hpp"
#include "simplexwalk/chain.hpp"
#include "simplexwalk/distributions.hpp"
#include "simplexwalk/stationarity.hpp"
#include "simplexwalk/stats.hpp"
#include "simplexwalk/urn.hpp"

namespace swalk::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Reads a JSON document; throws ConfigError on I/O or syntax errors.
Json load_json(const std::filesystem::path& path);

/// Object reader that rejects keys nobody asked for. Every accessor records
/// the key; finish() throws ConfigError naming any leftover key.
class Fields {
 public:
  Fields(const Json& obj, std::string where);

  bool has(const std::string& key) const;
  const Json& raw(const std::string& key);
  double number(const std::string& key);
  double number(const std::string& key, double fallback);
  std::uint64_t count(const std::string& key);
  std::uint64_t count(const std::string& key, std::uint64_t fallback);
  bool flag(const std::string& key, bool fallback);
  std::string text(const std::string& key);
  std::vector<double> numbers(const std::string& key);
  void finish() const;

 private:
  const Json& obj_;
  std::string where_;
  std::vector<std::string> seen_;
};

ChoiceFunction parse_choice(const Json& j);
JumpLaw parse_jump(const Json& j);
Json choice_json(const ChoiceFunction& cf);
Json jump_json(const JumpLaw& law);

/// Checks schema_version and returns it stripped from the reader.
void check_schema(Fields& f);

struct SimulateConfig {
  ChainConfig chain;
  std::optional<Json> target;  // {"type": "dirichlet"|"beta"|"arcsine"|"uniform", ...}
  double alpha = 0.01;
  bool trajectory = false;
};

struct VerifyConfig {
  ChoiceFunction choice = ChoiceFunction::constant({0.5});
  JumpLaw jump;
  Json candidate;
  std::size_t points_per_axis = 50;
  double margin = 0.05;
  double threshold = 1e-6;
  StationarityOptions options;
};

struct AssumptionsConfig {
  ChoiceFunction choice = ChoiceFunction::constant({0.5});
  JumpLaw jump;
  bool search = false;
  double delta = 0.0, s = 0.0, t = 0.0;
  AssumptionOptions options;
};

struct GeometryConfig {
  std::size_t d = 2;
  double delta = 0.005, s = 0.3, t = 0.6;
  std::size_t samples = 100000;
  std::optional<double> target_t;
  std::size_t roundtrip_samples = 10000;
  std::size_t jacobian_samples = 10000;
  std::uint64_t seed = 0;
};

struct UrnConfig {
  std::size_t n = 100000;
  std::size_t runs = 1;
  std::size_t record_every = 1000;
  double z1 = 0.5;
  double ks_threshold = 0.05;
  std::uint64_t seed = 0;
  bool coupling = false;
  CouplingConfig coupling_config;
  std::size_t coupling_runs = 1;
  std::size_t frozen_chains = 0;  // tilde walk with the threshold frozen from step 0
  std::size_t frozen_steps = 1000;
};

// Parsers validate everything and throw ConfigError before any run.
SimulateConfig parse_simulate(const Json& j);
VerifyConfig parse_verify(const Json& j);
AssumptionsConfig parse_assumptions(const Json& j);
GeometryConfig parse_geometry(const Json& j);
UrnConfig parse_urn(const Json& j);

// Resolved configs, defaults filled in, for provenance.
Json to_json(const SimulateConfig& c);
Json to_json(const VerifyConfig& c);
Json to_json(const AssumptionsConfig& c);
Json to_json(const GeometryConfig& c);
Json to_json(const UrnConfig& c);

/// Density and CDF of a target/candidate description.
DensityCandidate parse_candidate(const Json& j, std::size_t d);
/// CDF of coordinate j (1-based) under a target description.
Cdf target_marginal_cdf(const Json& target, std::size_t d, std::size_t j);

Json to_json(const GofReport& r);
Json to_json(const ChiSquareResult& r);
Json to_json(const MomentReport& r);
Json to_json(const TailCheck& r);
Json to_json(const ChoiceInfResult& r);
Json to_json(const DensityLowerResult& r);
Json to_json(const Lemma1Report& r);
Json to_json(const AssumptionReport& r);

/// Writes `doc` with two-space indentation and a trailing newline.
void write_json(const std::filesystem::path& path, const Json& doc);

/// CSV with a leading "# " line holding the provenance document. Numbers
/// are printed with 17 significant digits.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const Json& provenance, const std::vector<std::string>& header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<double>& values);
  /// Mixed row of already formatted cells.
  void row_text(const std::vector<std::string>& cells);

 private:
  std::FILE* file_ = nullptr;
};

std::string fmt17(double v);

}  // namespace swalk::io
