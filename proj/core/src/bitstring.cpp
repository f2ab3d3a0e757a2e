#include "islab/bitstring.hpp"

namespace islab {

BitString BitString::parse(std::string_view text) {
  BitString out;
  out.bits_.reserve(text.size());
  for (char c : text) {
    if (c == '0')
      out.bits_.push_back(0);
    else if (c == '1')
      out.bits_.push_back(1);
    else
      throw std::invalid_argument("BitString::parse: expected only '0'/'1', got '" +
                                  std::string(1, c) + "'");
  }
  return out;
}

BitString BitString::from_uint(std::uint64_t value, std::uint32_t width) {
  if (width > 64) throw std::invalid_argument("BitString::from_uint: width > 64");
  if (width < 64 && (value >> width) != 0)
    throw std::invalid_argument("BitString::from_uint: value does not fit width");
  BitString out;
  out.bits_.resize(width);
  for (std::uint32_t i = 0; i < width; ++i)
    out.bits_[i] = static_cast<std::uint8_t>((value >> (width - 1 - i)) & 1u);
  return out;
}

void BitString::append(const BitString& other) {
  bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

BitString BitString::slice(std::size_t pos, std::size_t len) const {
  if (pos + len > bits_.size())
    throw std::out_of_range("BitString::slice: out of range");
  BitString out;
  out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(pos),
                   bits_.begin() + static_cast<std::ptrdiff_t>(pos + len));
  return out;
}

bool BitString::has_prefix(const BitString& prefix) const {
  if (prefix.size() > size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (bits_[i] != prefix.bits_[i]) return false;
  return true;
}

std::uint64_t BitString::to_uint() const {
  if (size() > 64) throw std::overflow_error("BitString::to_uint: more than 64 bits");
  std::uint64_t v = 0;
  for (std::uint8_t b : bits_) v = (v << 1) | b;
  return v;
}

std::string BitString::str() const {
  std::string s;
  s.reserve(bits_.size());
  for (std::uint8_t b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

int BitString::cmp(const BitString& a, const BitString& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.bits_[i] != b.bits_[i]) return a.bits_[i] < b.bits_[i] ? -1 : 1;
  return 0;
}

std::size_t BitString::hash() const {
  // FNV-1a over the bits, length mixed in
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  mix(bits_.size());
  for (std::uint8_t b : bits_) mix(b + 1);
  return static_cast<std::size_t>(h);
}

}  // namespace islab
