#ifndef ISLAB_PLAYER_HPP
#define ISLAB_PLAYER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "islab/bitstring.hpp"

namespace islab {

/// A set of fixed-length n-bit strings. Backed by a dense bitmap over
/// {0,1}^n for n <= 24 (2 MiB worst case) and by a sorted value list above
/// that, up to n = 64. Immutable value semantics after construction; all
/// set algebra is exact.
class Player {
 public:
  enum class Backend { Auto, Dense, Sorted };

  Player() : Player(0) {}
  explicit Player(std::uint32_t n, Backend backend = Backend::Auto);

  static Player from_members(std::uint32_t n, const std::vector<BitString>& members,
                             Backend backend = Backend::Auto);
  /// All of {0,1}^n. Limited to n <= 24.
  static Player full(std::uint32_t n);

  std::uint32_t n() const { return n_; }
  std::uint64_t size() const;
  bool empty() const { return size() == 0; }
  bool contains(const BitString& x) const;
  void insert(const BitString& x);

  /// Members in canonical (numeric, equivalently length-lex) order.
  std::vector<BitString> members() const;
  /// Canonical set-listing encoding of the member set.
  BitString encoding() const;

  bool operator==(const Player& other) const;

  /// Text form: header `n=<int>`, then one member line per element in
  /// canonical order.
  std::string to_text() const;
  static Player from_text(const std::string& text);

  bool dense() const { return dense_backend_; }

 private:
  void insert_value(std::uint64_t v);
  bool contains_value(std::uint64_t v) const;

  std::uint32_t n_ = 0;
  bool dense_backend_ = true;
  std::vector<bool> bitmap_;            // dense: 2^n bits
  std::vector<std::uint64_t> values_;   // sorted, unique
  friend Player intersect(const Player& a, const Player& b);
};

/// Exact set intersection. Widths must agree.
Player intersect(const Player& a, const Player& b);

/// Capacity of a player: its cardinality.
inline std::uint64_t capacity(const Player& a) { return a.size(); }

/// Nonempty intersection.
inline bool interacts(const Player& a, const Player& b) {
  return !intersect(a, b).empty();
}

}  // namespace islab

#endif  // ISLAB_PLAYER_HPP
