#include "islab/cache.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "islab/errors.hpp"
#include "islab/machine.hpp"

namespace islab {
namespace {

constexpr char kFieldSep = '\x1f';

std::string to_hex(const std::string& raw) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(raw.size() * 2);
  for (unsigned char c : raw) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 0xf]);
  }
  return out;
}

std::optional<std::string> from_hex(const std::string& hex) {
  if (hex.size() % 2 != 0) return std::nullopt;
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
  };
  std::string out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = nibble(hex[i]), lo = nibble(hex[i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out.push_back(static_cast<char>((hi << 4) | lo));
  }
  return out;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::optional<BitString> try_parse_bits(const std::string& s) {
  for (char c : s)
    if (c != '0' && c != '1') return std::nullopt;
  return BitString::parse(s);
}

bool parse_u64(const std::string& s, std::uint64_t& out) {
  if (s.empty() || s.size() > 20) return false;
  out = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    out = out * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return true;
}

// One stored entry as a line: hex(key) TAB value TAB exact TAB witness TAB time.
// The witness column is "-" when absent and "w<bits>" when present, so an
// empty witness program stays distinguishable from no witness at all.
std::string format_line(const std::string& joined_key, const CacheRecord& rec) {
  std::ostringstream os;
  os << to_hex(joined_key) << '\t' << rec.value << '\t' << (rec.exact ? '1' : '0')
     << '\t';
  if (rec.witness)
    os << 'w' << rec.witness->str();
  else
    os << '-';
  os << '\t';
  if (rec.witness_time)
    os << *rec.witness_time;
  else
    os << '-';
  return os.str();
}

bool parse_line(const std::string& line, std::string& joined_key, CacheRecord& rec) {
  auto cols = split_on(line, '\t');
  if (cols.size() != 5) return false;
  auto raw = from_hex(cols[0]);
  if (!raw) return false;
  joined_key = *raw;
  if (cols[1].empty()) return false;
  rec.value = cols[1];
  if (cols[2] == "0")
    rec.exact = false;
  else if (cols[2] == "1")
    rec.exact = true;
  else
    return false;
  if (cols[3] == "-") {
    rec.witness.reset();
  } else if (!cols[3].empty() && cols[3][0] == 'w') {
    auto bits = try_parse_bits(cols[3].substr(1));
    if (!bits) return false;
    rec.witness = *bits;
  } else {
    return false;
  }
  if (cols[4] == "-") {
    rec.witness_time.reset();
  } else {
    std::uint64_t t = 0;
    if (!parse_u64(cols[4], t)) return false;
    rec.witness_time = t;
  }
  return true;
}

}  // namespace

std::string CacheKey::join() const {
  std::ostringstream os;
  os << version << kFieldSep << op << kFieldSep << target.str() << kFieldSep
     << context.str() << kFieldSep << max_program_bits << kFieldSep << max_steps;
  return os.str();
}

std::optional<CacheKey> CacheKey::split(const std::string& joined) {
  auto parts = split_on(joined, kFieldSep);
  if (parts.size() != 6) return std::nullopt;
  CacheKey key;
  key.version = parts[0];
  key.op = parts[1];
  auto target = try_parse_bits(parts[2]);
  auto context = try_parse_bits(parts[3]);
  if (!target || !context) return std::nullopt;
  key.target = *target;
  key.context = *context;
  std::uint64_t bits = 0, steps = 0;
  if (!parse_u64(parts[4], bits) || bits > 0xffffffffull) return std::nullopt;
  if (!parse_u64(parts[5], steps)) return std::nullopt;
  key.max_program_bits = static_cast<std::uint32_t>(bits);
  key.max_steps = steps;
  return key;
}

ResultCache::ResultCache() = default;

ResultCache::ResultCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  load();
}

std::optional<std::filesystem::path> ResultCache::env_dir() {
  const char* v = std::getenv("ISLAB_CACHE_DIR");
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::filesystem::path(v);
}

void ResultCache::load() {
  std::filesystem::create_directories(*dir_);
  std::vector<std::filesystem::path> files;
  for (const auto& ent : std::filesystem::directory_iterator(*dir_)) {
    if (ent.is_regular_file() && ent.path().extension() == ".rec")
      files.push_back(ent.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    std::ifstream in(file);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      std::string joined;
      CacheRecord rec;
      if (!parse_line(line, joined, rec)) {
        std::cerr << "islab cache: skipping corrupt line " << file.string() << ":"
                  << lineno << "\n";
        ++corrupt_lines_;
        continue;
      }
      auto [it, inserted] = entries_.emplace(joined, rec);
      if (!inserted && !(it->second == rec)) {
        std::cerr << "islab cache: conflicting duplicate at " << file.string()
                  << ":" << lineno << ", keeping first\n";
        ++corrupt_lines_;
      }
    }
  }
}

void ResultCache::append_line(const std::string& line) {
  std::ofstream out(*dir_ / "records.rec", std::ios::app);
  out << line << '\n';
  out.flush();
}

void ResultCache::rewrite_all() {
  auto tmp = *dir_ / "records.rec.tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    for (const auto& [joined, rec] : entries_) out << format_line(joined, rec) << '\n';
  }
  // Collapse everything into the single canonical file.
  for (const auto& ent : std::filesystem::directory_iterator(*dir_)) {
    if (ent.is_regular_file() && ent.path().extension() == ".rec")
      std::filesystem::remove(ent.path());
  }
  std::filesystem::rename(tmp, *dir_ / "records.rec");
}

std::optional<CacheRecord> ResultCache::lookup(const CacheKey& key) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(key.join());
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ResultCache::store(const CacheKey& key, const CacheRecord& rec) {
  std::string joined = key.join();
  std::lock_guard lock(mu_);
  auto it = entries_.find(joined);
  if (it != entries_.end()) {
    if (it->second == rec) return;  // idempotent re-store
    throw VerificationError("cache entry for an identical search disagrees with "
                            "a fresh result; the store is immutable by design");
  }
  entries_.emplace(std::move(joined), rec);
  if (dir_) append_line(format_line(key.join(), rec));
}

CacheStats ResultCache::stats() const {
  std::lock_guard lock(mu_);
  CacheStats st;
  st.total = entries_.size();
  st.corrupt_lines = corrupt_lines_;
  for (const auto& [joined, rec] : entries_) {
    auto key = CacheKey::split(joined);
    if (!key) continue;
    ++st.per_op[key->op];
    ++st.per_version[key->version];
  }
  return st;
}

VerifyReport ResultCache::verify() const {
  std::lock_guard lock(mu_);
  VerifyReport rep;
  for (const auto& [joined, rec] : entries_) {
    auto key = CacheKey::split(joined);
    if (!key) {
      ++rep.failed;
      rep.failures.push_back("unparseable key " + to_hex(joined));
      continue;
    }
    if (!rec.witness || key->version != kMachineVersion) {
      ++rep.skipped;
      continue;
    }
    ++rep.checked;
    auto fail = [&](const std::string& why) {
      ++rep.failed;
      rep.failures.push_back(key->op + " " + key->target.str() + ": " + why);
    };
    RunOutcome out = run(*rec.witness, key->context, key->max_steps);
    if (key->op == "plain") {
      std::uint64_t want_len = 0;
      if (!parse_u64(rec.value, want_len)) {
        fail("bad value literal '" + rec.value + "'");
        continue;
      }
      if (out.kind != RunKind::Halted || !(out.output == key->target))
        fail("witness no longer produces the target");
      else if (rec.witness->size() != want_len)
        fail("witness length disagrees with stored value");
      else if (rec.witness_time && *rec.witness_time != out.steps)
        fail("witness halting time drifted");
      else
        ++rep.passed;
    } else if (key->op == "levin") {
      auto parts = split_on(rec.value, ':');
      std::uint64_t want_len = 0, want_step = 0;
      if (parts.size() != 2 || !parse_u64(parts[0], want_len) ||
          !parse_u64(parts[1], want_step)) {
        fail("bad value literal '" + rec.value + "'");
        continue;
      }
      auto step = out.step_for_prefix(key->target.size());
      if (rec.witness->size() != want_len)
        fail("witness length disagrees with stored value");
      else if (!step || !out.output.has_prefix(key->target))
        fail("witness no longer prints the target prefix");
      else if (*step != want_step)
        fail("witness print time drifted");
      else
        ++rep.passed;
    } else {
      // Mass entries carry no single witness; nothing to re-run.
      --rep.checked;
      ++rep.skipped;
    }
  }
  return rep;
}

std::size_t ResultCache::clear_stale() {
  std::lock_guard lock(mu_);
  std::map<std::string, CacheRecord> kept;
  std::size_t removed = 0;
  for (auto& [joined, rec] : entries_) {
    auto key = CacheKey::split(joined);
    if (key && key->version == kMachineVersion)
      kept.emplace(joined, std::move(rec));
    else
      ++removed;
  }
  entries_ = std::move(kept);
  if (dir_) rewrite_all();
  return removed;
}

std::size_t ResultCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

}  // namespace islab
