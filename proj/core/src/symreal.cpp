#include "islab/symreal.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace islab {

Rat parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("parse_rational: empty string");
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(text));
    Int num(text.substr(0, slash));
    Int den(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rat(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument("parse_rational: malformed rational '" + text + "'");
  }
}

std::string rat_to_string(const Rat& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

double rat_to_double(const Rat& r) { return static_cast<double>(r); }

std::uint32_t floor_log2(const Int& n) {
  if (n < 1) throw std::invalid_argument("floor_log2: n < 1");
  return static_cast<std::uint32_t>(boost::multiprecision::msb(n));
}

Rat pow2_inv(std::uint64_t e) {
  Int den = Int(1) << e;
  return Rat(1, den);
}

SymReal SymReal::log2_of(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("SymReal::log2_of: n must be >= 1");
  SymReal out;
  std::uint64_t v = n;
  std::uint64_t twos = 0;
  while ((v & 1) == 0) {
    v >>= 1;
    ++twos;
  }
  out.rat_ = Rat(twos);
  for (std::uint64_t p = 3; p * p <= v; p += 2) {
    while (v % p == 0) {
      out.logs_[p] += 1;
      v /= p;
    }
  }
  if (v > 1) out.logs_[v] += 1;
  out.normalize();
  return out;
}

SymReal SymReal::log2_of_rat(const Rat& r) {
  if (r <= 0) throw std::invalid_argument("SymReal::log2_of_rat: r must be > 0");
  const Int num = boost::multiprecision::numerator(r);
  const Int den = boost::multiprecision::denominator(r);
  if (num > std::numeric_limits<std::uint64_t>::max() ||
      den > std::numeric_limits<std::uint64_t>::max())
    throw std::invalid_argument("SymReal::log2_of_rat: operand too large to factor");
  return log2_of(static_cast<std::uint64_t>(num)) -
         log2_of(static_cast<std::uint64_t>(den));
}

void SymReal::normalize() {
  for (auto it = logs_.begin(); it != logs_.end();)
    it = it->second == 0 ? logs_.erase(it) : std::next(it);
}

SymReal SymReal::operator-() const {
  SymReal out = *this;
  switch (kind_) {
    case Kind::PosInf:
      out.kind_ = Kind::NegInf;
      return out;
    case Kind::NegInf:
      out.kind_ = Kind::PosInf;
      return out;
    case Kind::Undefined:
      return out;
    case Kind::Finite:
      out.rat_ = -out.rat_;
      for (auto& [p, c] : out.logs_) c = -c;
      return out;
  }
  return out;
}

SymReal operator+(const SymReal& a, const SymReal& b) {
  using K = SymReal::Kind;
  if (a.kind_ == K::Undefined || b.kind_ == K::Undefined)
    return SymReal::undefined();
  if (a.kind_ != K::Finite || b.kind_ != K::Finite) {
    if (a.kind_ == K::Finite) return b;
    if (b.kind_ == K::Finite) return a;
    return a.kind_ == b.kind_ ? a : SymReal::undefined();
  }
  SymReal out = a;
  out.rat_ += b.rat_;
  for (const auto& [p, c] : b.logs_) out.logs_[p] += c;
  out.normalize();
  return out;
}

SymReal operator-(const SymReal& a, const SymReal& b) { return a + (-b); }

bool operator==(const SymReal& a, const SymReal& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.kind_ != SymReal::Kind::Finite)
    return a.kind_ != SymReal::Kind::Undefined;  // undefined compares unequal
  return a.rat_ == b.rat_ && a.logs_ == b.logs_;
}

int SymReal::compare(const SymReal& b) const {
  using K = Kind;
  if (kind_ == K::Undefined || b.kind_ == K::Undefined)
    throw std::domain_error("SymReal::compare: undefined operand");
  auto rank = [](Kind k) { return k == K::NegInf ? -1 : k == K::PosInf ? 1 : 0; };
  if (kind_ != K::Finite || b.kind_ != K::Finite) {
    const int ra = rank(kind_), rb = rank(b.kind_);
    return ra < rb ? -1 : ra > rb ? 1 : 0;
  }
  if (logs_ == b.logs_)
    return rat_ < b.rat_ ? -1 : rat_ > b.rat_ ? 1 : 0;
  const long double da = static_cast<long double>(to_double());
  const long double db = static_cast<long double>(b.to_double());
  return da < db ? -1 : da > db ? 1 : 0;
}

double SymReal::to_double() const {
  switch (kind_) {
    case Kind::PosInf:
      return std::numeric_limits<double>::infinity();
    case Kind::NegInf:
      return -std::numeric_limits<double>::infinity();
    case Kind::Undefined:
      return std::numeric_limits<double>::quiet_NaN();
    case Kind::Finite:
      break;
  }
  double v = rat_to_double(rat_);
  for (const auto& [p, c] : logs_)
    v += rat_to_double(c) * std::log2(static_cast<double>(p));
  return v;
}

std::string SymReal::str() const {
  switch (kind_) {
    case Kind::PosInf:
      return "inf";
    case Kind::NegInf:
      return "-inf";
    case Kind::Undefined:
      return "undefined";
    case Kind::Finite:
      break;
  }
  std::ostringstream os;
  bool wrote = false;
  if (rat_ != 0 || logs_.empty()) {
    os << rat_;
    wrote = true;
  }
  for (const auto& [p, c] : logs_) {
    if (wrote) os << (c > 0 ? " + " : " - ");
    const Rat mag = c > 0 || !wrote ? c : Rat(-c);
    if (mag == 1)
      os << "log2(" << p << ")";
    else
      os << mag << "*log2(" << p << ")";
    wrote = true;
  }
  return os.str();
}

}  // namespace islab
