#include "islab/encoding.hpp"

#include <algorithm>

namespace islab {

BitString binary_numeral(std::uint64_t n) {
  if (n == 0) return BitString();
  std::uint32_t width = 0;
  for (std::uint64_t v = n; v != 0; v >>= 1) ++width;
  return BitString::from_uint(n, width);
}

BitString encode_pair(const BitString& x, const BitString& y) {
  const BitString b = binary_numeral(x.size());
  BitString out;
  for (std::size_t i = 0; i < b.size(); ++i) out.push_back(1);
  out.push_back(0);
  out.append(b);
  out.append(x);
  out.append(y);
  return out;
}

std::pair<BitString, BitString> decode_pair(const BitString& encoded) {
  std::size_t u = 0;
  while (u < encoded.size() && encoded.bit(u) == 1) ++u;
  if (u == encoded.size())
    throw std::invalid_argument("decode_pair: missing unary terminator");
  std::size_t pos = u + 1;  // past the 0
  if (pos + u > encoded.size())
    throw std::invalid_argument("decode_pair: truncated length numeral");
  std::uint64_t xlen = 0;
  if (u > 0) {
    if (u > 64) throw std::invalid_argument("decode_pair: length numeral too wide");
    xlen = encoded.slice(pos, u).to_uint();
    if (u > 1 && encoded.bit(pos) == 0)
      throw std::invalid_argument("decode_pair: non-minimal length numeral");
  }
  pos += u;
  if (pos + xlen > encoded.size())
    throw std::invalid_argument("decode_pair: truncated first component");
  BitString x = encoded.slice(pos, static_cast<std::size_t>(xlen));
  BitString y = encoded.slice(pos + xlen, encoded.size() - pos - xlen);
  return {std::move(x), std::move(y)};
}

BitString encode_set(std::vector<BitString> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (members.empty()) return BitString();
  BitString out = members.back();
  for (std::size_t i = members.size() - 1; i-- > 0;)
    out = encode_pair(members[i], out);
  return out;
}

}  // namespace islab
