#ifndef ISLAB_SYMREAL_HPP
#define ISLAB_SYMREAL_HPP

#include <cstdint>
#include <map>
#include <string>

#include "islab/rational.hpp"

namespace islab {

/// Exact extended real of the form  q + sum_p c_p * log2(p)  with q and the
/// c_p rational and p ranging over odd primes (factors of two fold into q).
/// Since the log2 of distinct primes are linearly independent over the
/// rationals, equality and zero tests on this form are exact; the identity
/// checks in the measures module rely on that.
///
/// Infinite and undefined states follow extended-real arithmetic:
/// inf - inf, 0 * inf and any operation on an undefined value are undefined.
class SymReal {
 public:
  enum class Kind { Finite, PosInf, NegInf, Undefined };

  SymReal() = default;
  SymReal(const Rat& q) : rat_(q) {}                     // NOLINT(implicit)
  SymReal(std::int64_t n) : rat_(n) {}                   // NOLINT(implicit)

  static SymReal infinity() { return SymReal(Kind::PosInf); }
  static SymReal neg_infinity() { return SymReal(Kind::NegInf); }
  static SymReal undefined() { return SymReal(Kind::Undefined); }

  /// log2(n) for integer n >= 1, put in canonical prime form.
  static SymReal log2_of(std::uint64_t n);
  /// log2(r) for rational r > 0.
  static SymReal log2_of_rat(const Rat& r);

  Kind kind() const { return kind_; }
  bool finite() const { return kind_ == Kind::Finite; }
  bool is_zero() const { return finite() && rat_ == 0 && logs_.empty(); }

  /// The rational part; only meaningful when finite.
  const Rat& rational_part() const { return rat_; }
  /// True when the value is finite and purely rational (no log terms).
  bool is_rational() const { return finite() && logs_.empty(); }

  SymReal operator-() const;
  friend SymReal operator+(const SymReal& a, const SymReal& b);
  friend SymReal operator-(const SymReal& a, const SymReal& b);
  SymReal& operator+=(const SymReal& b) { return *this = *this + b; }
  SymReal& operator-=(const SymReal& b) { return *this = *this - b; }

  friend bool operator==(const SymReal& a, const SymReal& b);
  friend bool operator!=(const SymReal& a, const SymReal& b) { return !(a == b); }

  /// Total-order comparison: -1/0/+1. Exact whenever both sides share the
  /// same log terms (in particular for purely rational values); otherwise
  /// falls back to long-double evaluation. Non-finite kinds order as
  /// -inf < finite < +inf; comparing against undefined throws.
  int compare(const SymReal& b) const;
  bool operator<(const SymReal& b) const { return compare(b) < 0; }
  bool operator<=(const SymReal& b) const { return compare(b) <= 0; }

  double to_double() const;

  /// Canonical exact rendering, e.g. "7", "-5/2", "1/2 + 2*log2(3)",
  /// "inf", "undefined".
  std::string str() const;

 private:
  explicit SymReal(Kind k) : kind_(k) {}
  void normalize();

  Kind kind_ = Kind::Finite;
  Rat rat_;
  std::map<std::uint64_t, Rat> logs_;  // odd prime -> coefficient
};

}  // namespace islab

#endif  // ISLAB_SYMREAL_HPP
