#pragma once

// Experiment plumbing: JSON problem specs, seeded instance generation, the
// four figure presets, end-to-end runs certified by the classical oracle, and
// table / CSV / SVG output.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qcluster/anneal.hpp"
#include "qcluster/clustering.hpp"
#include "qcluster/hamiltonian.hpp"

namespace qcluster {

/// Malformed or invalid problem spec. The message names the offending line
/// or JSON field.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class EmitFormat { table, csv, svg };

std::string_view to_string(EmitFormat f);
/// Parses a comma-separated list such as "table,csv".
std::vector<EmitFormat> parse_emit_list(std::string_view list);

struct OutputTargets {
  std::vector<EmitFormat> formats{EmitFormat::table};
  std::optional<std::filesystem::path> dir;
};

struct ProblemSpec {
  std::string name = "problem";
  PointSet points{{{0, 0}, {1, 0}}};
  EncodingScheme scheme;
  /// Point indices of the centroids (kmeanspp only), one per cluster.
  std::vector<int> centroids;
  AnnealConfig anneal;
  /// Seed the points were generated from, if any.
  std::optional<std::uint64_t> seed;
  OutputTargets output;

  /// Throws SpecError naming the violated invariant.
  void validate() const;
};

/// Parses spec JSON text; `source` is used in diagnostics.
ProblemSpec parse_spec(std::string_view json_text, std::string_view source = "<spec>");
/// Reads and parses a spec file. Throws SpecError when unreadable or invalid.
ProblemSpec load_spec(const std::filesystem::path& path);
std::string spec_to_json(const ProblemSpec& spec);

/// Integer points uniform on [-10, 10]^2. Uses std::mt19937_64 (its output
/// sequence is fixed by the C++ standard) and maps each 64-bit draw to
/// [0, 21) by rejection sampling below the largest multiple of 21, so the
/// same seed gives the same points on every platform.
PointSet generate_instance(int n_points, std::uint64_t seed);

std::vector<std::string> preset_names();
/// "fig1" .. "fig4". Throws SpecError for unknown names.
ProblemSpec preset(std::string_view name);

struct RunResult {
  std::optional<Partition> top_partition;
  double top_probability = 0.0;
  /// Cost of the top partition (NaN when every state decoded as invalid).
  double annealed_cost = 0.0;
  double oracle_min_cost = 0.0;
  std::vector<Partition> oracle_partitions;
  bool match = false;
  double invalid_probability = 0.0;
  double final_norm = 0.0;
  double wall_seconds = 0.0;
  int qutrits = 0;
  ReadoutReport readout;
};

/// Builds the Hamiltonian, anneals, decodes and compares with the oracle.
/// Throws SizeLimitError when the register exceeds kMaxQutrits or the oracle
/// would enumerate more than kMaxOraclePoints points.
RunResult run(const ProblemSpec& spec);

void emit_table(std::ostream& os, const ProblemSpec& spec, const RunResult& result);
/// Columns: basis_index, digits, partition_id, probability.
void emit_csv(std::ostream& os, const RunResult& result);
/// Columns: partition_id, blocks, probability, cost.
void emit_partitions_csv(std::ostream& os, const ProblemSpec& spec, const RunResult& result);
/// SVG 1.1 scatter plot, one marker shape per cluster of the top partition,
/// clusters ordered by descending size.
void emit_svg(std::ostream& os, const ProblemSpec& spec, const RunResult& result);

/// Writes `format` into `dir` and returns the files written. Throws
/// std::runtime_error when a file cannot be opened.
std::vector<std::filesystem::path> emit(const ProblemSpec& spec, const RunResult& result,
                                        EmitFormat format, const std::filesystem::path& dir);

}  // namespace qcluster
