#ifndef ISLAB_EXPERIMENTS_HPP
#define ISLAB_EXPERIMENTS_HPP

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "islab/cache.hpp"
#include "islab/cybernetic.hpp"

namespace islab {

/// A finished experiment: the rendered report and where it was written (empty
/// when the config names no output file).
struct RunResult {
  std::string kind;
  std::string report;
  std::filesystem::path output_path;
  bool csv = false;
};

/// Parse, validate, and execute one declarative experiment config. Relative
/// file references and output paths resolve against base_dir. The report is
/// deterministic given config + cache state; the only run-varying field is
/// the generated_at header entry. `workers` overrides the config's own
/// worker count when set.
RunResult run_experiment(const std::string& config_text,
                         const std::filesystem::path& base_dir, ResultCache* cache,
                         std::optional<unsigned> workers);

/// Environment (de)serialization for config files: either
/// {"builtin": "echo"|"anti"|"fair-coin"} or an inline table with alphabets,
/// integer rewards, and conditional rows of "num/den" strings keyed by
/// space-joined interleaved conditions.
std::shared_ptr<Environment> environment_from_json(const std::string& text);

/// Policy deserialization: {"kind":"const",...} or {"kind":"table",...} with
/// a decision table keyed by space-joined perception histories.
std::shared_ptr<Policy> policy_from_json(const std::string& text);

/// FNV-1a 64-bit content digest, rendered as 16 hex digits.
std::string digest_hex(const std::string& text);

}  // namespace islab

#endif  // ISLAB_EXPERIMENTS_HPP
