#include "islab/player.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "islab/encoding.hpp"
#include "islab/errors.hpp"

namespace islab {
namespace {

constexpr std::uint32_t kDenseMaxBits = 24;
constexpr std::uint32_t kMaxBits = 64;

std::uint64_t pack(const BitString& x) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < x.size(); ++i) v = (v << 1) | (x.bit(i) ? 1u : 0u);
  return v;
}

BitString unpack(std::uint64_t v, std::uint32_t n) {
  return BitString::from_uint(v, n);
}

}  // namespace

Player::Player(std::uint32_t n, Backend backend) : n_(n) {
  if (n > kMaxBits) throw ScaleLimitError("player width exceeds 64 bits");
  switch (backend) {
    case Backend::Auto: dense_backend_ = n <= kDenseMaxBits; break;
    case Backend::Dense: dense_backend_ = true; break;
    case Backend::Sorted: dense_backend_ = false; break;
  }
  if (dense_backend_) {
    if (n > kDenseMaxBits) throw ScaleLimitError("dense player backend limited to width 24");
    bitmap_.assign(std::size_t{1} << n, false);
  }
}

Player Player::from_members(std::uint32_t n, const std::vector<BitString>& members,
                            Backend backend) {
  Player p(n, backend);
  for (const auto& m : members) p.insert(m);
  return p;
}

Player Player::full(std::uint32_t n) {
  if (n > kDenseMaxBits) throw ScaleLimitError("full player limited to width 24");
  Player p(n, Backend::Dense);
  p.bitmap_.assign(std::size_t{1} << n, true);
  return p;
}

std::uint64_t Player::size() const {
  if (dense_backend_) {
    return static_cast<std::uint64_t>(std::count(bitmap_.begin(), bitmap_.end(), true));
  }
  return values_.size();
}

bool Player::contains(const BitString& x) const {
  if (x.size() != n_) return false;
  return contains_value(pack(x));
}

bool Player::contains_value(std::uint64_t v) const {
  if (dense_backend_) return bitmap_[v];
  return std::binary_search(values_.begin(), values_.end(), v);
}

void Player::insert(const BitString& x) {
  if (x.size() != n_) {
    throw std::invalid_argument("player member has length " + std::to_string(x.size()) +
                                ", expected " + std::to_string(n_));
  }
  insert_value(pack(x));
}

void Player::insert_value(std::uint64_t v) {
  if (dense_backend_) {
    bitmap_[v] = true;
    return;
  }
  auto it = std::lower_bound(values_.begin(), values_.end(), v);
  if (it == values_.end() || *it != v) values_.insert(it, v);
}

std::vector<BitString> Player::members() const {
  std::vector<BitString> out;
  if (dense_backend_) {
    for (std::uint64_t v = 0; v < bitmap_.size(); ++v) {
      if (bitmap_[v]) out.push_back(unpack(v, n_));
    }
  } else {
    out.reserve(values_.size());
    for (auto v : values_) out.push_back(unpack(v, n_));
  }
  return out;
}

BitString Player::encoding() const { return encode_set(members()); }

bool Player::operator==(const Player& other) const {
  return n_ == other.n_ && members() == other.members();
}

std::string Player::to_text() const {
  std::ostringstream os;
  os << "n=" << n_ << "\n";
  for (const auto& m : members()) os << m.str() << "\n";
  return os.str();
}

Player Player::from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line.rfind("n=", 0) != 0) {
    throw SchemaError("player text must start with an n=<int> header");
  }
  std::uint32_t n = 0;
  try {
    std::size_t pos = 0;
    unsigned long parsed = std::stoul(line.substr(2), &pos);
    if (pos != line.size() - 2 || parsed > kMaxBits) throw std::invalid_argument("range");
    n = static_cast<std::uint32_t>(parsed);
  } catch (const std::exception&) {
    throw SchemaError("bad player width in header: " + line);
  }
  Player p(n);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.size() != n || line.find_first_not_of("01") != std::string::npos) {
      throw SchemaError("bad player member line: " + line);
    }
    p.insert(BitString::parse(line));
  }
  return p;
}

Player intersect(const Player& a, const Player& b) {
  if (a.n() != b.n()) {
    throw std::invalid_argument("cannot intersect players of widths " +
                                std::to_string(a.n()) + " and " + std::to_string(b.n()));
  }
  Player out(a.n(), a.dense() && b.dense() ? Player::Backend::Dense : Player::Backend::Sorted);
  if (a.dense() && b.dense()) {
    for (std::uint64_t v = 0; v < out.bitmap_.size(); ++v) {
      out.bitmap_[v] = a.bitmap_[v] && b.bitmap_[v];
    }
    return out;
  }
  // At least one side is sorted; walk a sorted list (the smaller when both are)
  // and probe the other side.
  const Player* walk = !a.dense() ? &a : &b;
  if (!a.dense() && !b.dense() && b.values_.size() < a.values_.size()) walk = &b;
  const Player& other = (walk == &a) ? b : a;
  for (auto v : walk->values_) {
    if (other.contains_value(v)) out.insert_value(v);
  }
  return out;
}

}  // namespace islab
