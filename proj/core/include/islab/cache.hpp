#ifndef ISLAB_CACHE_HPP
#define ISLAB_CACHE_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "islab/bitstring.hpp"

namespace islab {

/// Identity of one memoized search. Every field participates in the key, so
/// results computed by a different machine revision or under a different
/// budget can never shadow each other.
struct CacheKey {
  std::string version;           ///< reference machine version string
  std::string op;                ///< "plain" | "levin" | "mass"
  BitString target;
  BitString context;             ///< canonical set encoding of the context
  std::uint32_t max_program_bits = 0;
  std::uint64_t max_steps = 0;

  std::string join() const;      ///< unambiguous flat form (US-separated)
  static std::optional<CacheKey> split(const std::string& joined);
  bool operator==(const CacheKey&) const = default;
};

/// Stored payload. `value` uses an op-specific literal grammar:
///   plain  ->  "inf" or the witness length as a decimal integer
///   levin  ->  "<len>:<step>" (score reconstructs as len + log2(max(1,step)))
///   mass   ->  exact dyadic rational "<num>/<den>" (or "0")
struct CacheRecord {
  std::string value;
  bool exact = false;
  std::optional<BitString> witness;
  std::optional<std::uint64_t> witness_time;

  bool operator==(const CacheRecord&) const = default;
};

struct CacheStats {
  std::uint64_t total = 0;
  std::map<std::string, std::uint64_t> per_op;       // op kind -> entries
  std::map<std::string, std::uint64_t> per_version;  // machine version -> entries
  std::uint64_t corrupt_lines = 0;  // skipped while loading
};

struct VerifyReport {
  std::uint64_t checked = 0;   // witness-bearing entries re-run
  std::uint64_t passed = 0;
  std::uint64_t failed = 0;
  std::uint64_t skipped = 0;   // no witness to re-run (infinite / mass entries)
  std::vector<std::string> failures;
  bool ok() const { return failed == 0; }
};

/// Append-only result store. Entries are immutable: storing a different
/// record under an existing key throws, because the searches it memoizes are
/// deterministic and a mismatch means something is broken upstream.
///
/// On disk each entry is one line of `records.rec` inside the cache
/// directory; unreadable lines are skipped with a warning rather than
/// poisoning the rest of the store. A cache constructed without a directory
/// lives purely in memory.
class ResultCache {
 public:
  ResultCache();
  explicit ResultCache(std::filesystem::path dir);

  /// Directory named by ISLAB_CACHE_DIR, if the variable is set and nonempty.
  static std::optional<std::filesystem::path> env_dir();

  std::optional<CacheRecord> lookup(const CacheKey& key) const;
  void store(const CacheKey& key, const CacheRecord& rec);

  CacheStats stats() const;

  /// Re-runs every stored witness on the reference machine and checks that
  /// it still certifies the recorded value.
  VerifyReport verify() const;

  /// Drops entries recorded under a machine version other than the current
  /// one and compacts the on-disk store. Returns how many were removed.
  std::size_t clear_stale();

  std::size_t size() const;
  const std::optional<std::filesystem::path>& directory() const { return dir_; }

 private:
  void load();
  void append_line(const std::string& line);
  void rewrite_all();

  std::optional<std::filesystem::path> dir_;
  std::map<std::string, CacheRecord> entries_;  // joined key -> record
  std::uint64_t corrupt_lines_ = 0;
  mutable std::mutex mu_;
};

}  // namespace islab

#endif  // ISLAB_CACHE_HPP
