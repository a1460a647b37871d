#pragma once

// Declarative scene files: an ambient, a source of immersion data and a list
// of checks. Running a scene yields a RunReport, emitted as canonical JSON
// (sorted keys, %.12e floats) or as a text table.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "warpcheck/numeric.hpp"
#include "warpcheck/warped.hpp"

namespace warpcheck {

inline constexpr std::string_view version = "0.1.0";

struct SourceSpec {
  // "immersion", "warped", "pointwise", "random" or "dplus-leaf"
  std::string type;
  std::string key;                           // immersion or warped-chart catalog key
  std::optional<std::vector<double>> point;  // chart point; random when absent
  // explicit warped chart (type "warped" without key)
  std::string factor1;
  std::string factor2;
  std::optional<WarpFunction> warp;
  // pointwise / random / dplus-leaf
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::optional<std::vector<std::vector<double>>> frame;  // rows of the N×N frame matrix
  std::vector<std::vector<std::vector<double>>> sigma;
  std::string kind = "unconstrained";  // random: unconstrained | equality | c-totally-real | c-totally-real-equality
  double scale = 1.0;

  bool operator==(const SourceSpec&) const = default;
};

struct CheckSpec {
  std::string name;
  bool harmonic = false;
  std::optional<double> eigenvalue;
  bool minimal = false;
  std::optional<std::string> inequality;  // obstruction: which report to use
  std::optional<std::string> expect;      // obstruction verdict
  std::optional<bool> expect_equality;
  std::optional<bool> expect_value;       // boolean predicates
  std::vector<double> a;                  // chen_lemma
  std::optional<double> b;

  bool operator==(const CheckSpec&) const = default;
};

struct SceneSpec {
  std::string ambient;
  SourceSpec source;
  std::vector<CheckSpec> checks;
  std::optional<double> tol_algebraic;
  std::optional<double> tol_finite_difference;
  std::optional<double> tol_equality_gap;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;

  bool operator==(const SceneSpec&) const = default;
};

/// Names accepted in "checks".
std::vector<std::string> check_names();

/// Parse errors carry line and column; unknown keys, unknown checks and
/// inconsistent dimensions raise validation errors.
SceneSpec parse_scene_string(std::string_view text);
SceneSpec parse_scene(const std::string& path);

/// Canonical JSON echo of a spec; parse_scene_string(scene_to_json(s)) == s.
std::string scene_to_json(const SceneSpec& spec);

struct RunOptions {
  std::optional<Tolerance> tolerance;  // overrides the scene's
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
};

struct CheckRecord {
  std::string name;
  bool pass = false;
  std::string error;         // "kind: message" when the check threw
  std::string payload_json;  // canonical JSON object
};

struct RunReport {
  std::vector<CheckRecord> records;
  Tolerance tolerance;
  std::uint64_t seed = 0;
  std::size_t samples = 1;
  std::string ambient;
  std::vector<std::string> notes;
  double wall_time_ms = 0.0;  // text output only, keeps JSON deterministic

  bool all_pass() const;
  /// 0 when every check passes, 1 otherwise.
  int exit_code() const;
};

RunReport run(const SceneSpec& spec, const RunOptions& options = {});

enum class OutputFormat { json, text };
std::string emit(const RunReport& report, OutputFormat format);

/// Catalog listing for the `catalog` command.
std::string catalog_text();

}  // namespace warpcheck
