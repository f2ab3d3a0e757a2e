#ifndef ISLAB_BITSTRING_HPP
#define ISLAB_BITSTRING_HPP

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace islab {

/// A finite binary string. The empty string is a valid value.
///
/// Ordering everywhere in this project is (length, lexicographic), which for
/// equal-length strings coincides with the numeric order of the bits read
/// MSB-first.
class BitString {
 public:
  BitString() = default;

  /// Parses an ASCII string of '0'/'1' characters.
  static BitString parse(std::string_view text);

  /// The `width` low bits of `value`, MSB first. Requires width <= 64 and
  /// value < 2^width.
  static BitString from_uint(std::uint64_t value, std::uint32_t width);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }

  int bit(std::size_t i) const { return bits_[i]; }

  void push_back(int b) { bits_.push_back(static_cast<std::uint8_t>(b & 1)); }
  void append(const BitString& other);

  BitString slice(std::size_t pos, std::size_t len) const;
  bool has_prefix(const BitString& prefix) const;

  /// Numeric value of the bits read MSB-first. Requires size() <= 64.
  std::uint64_t to_uint() const;

  std::string str() const;

  const std::vector<std::uint8_t>& raw() const { return bits_; }

  friend bool operator==(const BitString& a, const BitString& b) {
    return a.bits_ == b.bits_;
  }
  friend bool operator!=(const BitString& a, const BitString& b) {
    return !(a == b);
  }

  /// (length, lex) comparison: -1, 0 or +1.
  static int cmp(const BitString& a, const BitString& b);
  friend bool operator<(const BitString& a, const BitString& b) {
    return cmp(a, b) < 0;
  }

  std::size_t hash() const;

 private:
  std::vector<std::uint8_t> bits_;  // one byte per bit, values 0/1
};

inline BitString operator""_bits(const char* text, std::size_t len) {
  return BitString::parse(std::string_view(text, len));
}

}  // namespace islab

template <>
struct std::hash<islab::BitString> {
  std::size_t operator()(const islab::BitString& s) const { return s.hash(); }
};

#endif  // ISLAB_BITSTRING_HPP
