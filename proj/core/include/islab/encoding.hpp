#ifndef ISLAB_ENCODING_HPP
#define ISLAB_ENCODING_HPP

#include <utility>
#include <vector>

#include "islab/bitstring.hpp"

namespace islab {

/// Pairing code: 1^{l(b)} 0 b x y, with b the minimal binary numeral of
/// l(x) (b = eps when l(x) = 0). Total length is
/// l(y) + l(x) + 2*l(b) + 1. Injective; decode_pair inverts it.
BitString encode_pair(const BitString& x, const BitString& y);

/// Inverse of encode_pair. Throws std::invalid_argument on malformed input.
std::pair<BitString, BitString> decode_pair(const BitString& encoded);

/// Canonical listing of a finite set of strings: members sorted ascending by
/// (length, lex), then right-nested pairing
/// <x1, <x2, ... <x_{n-1}, x_n> ... >>. A singleton {x} encodes as x and the
/// empty set as eps. Input order and duplicates do not affect the result.
BitString encode_set(std::vector<BitString> members);

/// Minimal binary numeral of n, MSB first; eps for n = 0.
BitString binary_numeral(std::uint64_t n);

}  // namespace islab

#endif  // ISLAB_ENCODING_HPP
