#ifndef ISLAB_LZ78_HPP
#define ISLAB_LZ78_HPP

#include <cstdint>
#include <vector>

#include "islab/bitstring.hpp"

namespace islab {

/// Deterministic dictionary-parse code length over the binary alphabet.
///
/// The dictionary is primed by parsing `context` first: its phrases extend
/// the dictionary and advance the phrase counter but contribute no cost.
/// `x` is then parsed from a fresh cursor. Emitting phrase number j
/// (1-based, counting both passes) costs ceil(log2(j)) + 1 bits — an index
/// into the root plus the j-1 existing entries, and one literal bit. A
/// trailing partial phrase costs only its index bits. The empty string
/// costs 0 against any context.
std::uint64_t lz78_estimate(const BitString& x, const BitString& context);

inline std::uint64_t lz78_estimate(const BitString& x) {
  return lz78_estimate(x, BitString());
}

}  // namespace islab

#endif  // ISLAB_LZ78_HPP
