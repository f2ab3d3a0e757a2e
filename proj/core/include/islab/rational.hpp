#ifndef ISLAB_RATIONAL_HPP
#define ISLAB_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace islab {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Parses "p/q" or "p" (optionally signed). Throws on malformed input or
/// zero denominator.
Rat parse_rational(const std::string& text);

/// Canonical reduced form: "p" or "p/q".
std::string rat_to_string(const Rat& r);

double rat_to_double(const Rat& r);

/// floor(log2(n)) for n >= 1.
std::uint32_t floor_log2(const Int& n);

/// 2^-e as an exact rational, e >= 0.
Rat pow2_inv(std::uint64_t e);

}  // namespace islab

#endif  // ISLAB_RATIONAL_HPP
