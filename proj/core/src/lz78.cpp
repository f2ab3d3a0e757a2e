#include "islab/lz78.hpp"

namespace islab {
namespace {

struct Trie {
  struct Node {
    std::int32_t child[2] = {-1, -1};
  };
  std::vector<Node> nodes{Node{}};  // node 0 is the root (empty phrase)

  std::int32_t step(std::int32_t node, int bit) const {
    return nodes[static_cast<std::size_t>(node)].child[bit];
  }
  std::int32_t grow(std::int32_t node, int bit) {
    nodes.push_back(Node{});
    const auto fresh = static_cast<std::int32_t>(nodes.size() - 1);
    nodes[static_cast<std::size_t>(node)].child[bit] = fresh;
    return fresh;
  }
};

std::uint64_t ceil_log2(std::uint64_t j) {
  std::uint64_t bits = 0;
  while ((std::uint64_t{1} << bits) < j) ++bits;
  return bits;
}

// Parses `input`, growing the trie and phrase counter; accumulates the
// phrase costs only when `count_cost` is set.
std::uint64_t parse(const BitString& input, Trie& trie, std::uint64_t& phrases,
                    bool count_cost) {
  std::uint64_t cost = 0;
  std::int32_t node = 0;
  bool mid_phrase = false;
  for (std::size_t i = 0; i < input.size(); ++i) {
    const int bit = input.bit(i);
    const std::int32_t next = trie.step(node, bit);
    if (next >= 0) {
      node = next;
      mid_phrase = true;
      continue;
    }
    trie.grow(node, bit);
    ++phrases;
    if (count_cost) cost += ceil_log2(phrases) + 1;
    node = 0;
    mid_phrase = false;
  }
  if (mid_phrase && count_cost) cost += ceil_log2(phrases + 1);
  return cost;
}

}  // namespace

std::uint64_t lz78_estimate(const BitString& x, const BitString& context) {
  Trie trie;
  std::uint64_t phrases = 0;
  parse(context, trie, phrases, false);
  return parse(x, trie, phrases, true);
}

}  // namespace islab
