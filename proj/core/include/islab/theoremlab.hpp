#ifndef ISLAB_THEOREMLAB_HPP
#define ISLAB_THEOREMLAB_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "islab/bitstring.hpp"
#include "islab/model.hpp"
#include "islab/player.hpp"
#include "islab/rational.hpp"
#include "islab/symreal.hpp"

namespace islab {

/// An explicit finite collection of same-width players to search over.
struct PlayerFamily {
  std::string name;
  std::vector<Player> members;

  std::uint32_t n() const;
  void validate() const;  // nonempty, shared width

  /// Every 2-element subset of {0,1}^n, in canonical pair order.
  static PlayerFamily all_pairs(std::uint32_t n);
  /// Every singleton {x} for x in {0,1}^n.
  static PlayerFamily all_singletons(std::uint32_t n);
};

/// Outcome of one empirical existence check. The checkers never assert the
/// additive bounds themselves (their constants are machine-dependent); they
/// verify the witness's side conditions and measure the realized slack.
struct TheoremReport {
  std::string check;        // covering | approximation | info-bound | simplification
  std::string model_name;
  std::string family_name;
  std::uint64_t family_size = 0;
  bool claim = false;       // a qualifying witness exists
  bool exhaustive = true;   // full scan performed
  std::uint64_t qualifying_count = 0;          // N (Th.1/2) or |Q| (Th.4)
  std::optional<std::uint32_t> k;              // floor(log2 of qualifying_count)
  std::optional<std::size_t> witness_index;    // position in the family
  std::optional<Player> witness;
  SymReal witness_complexity;                  // the minimized quantity
  SymReal bound_target;                        // what the theorem compares against
  SymReal slack;                               // witness_complexity - bound_target
  SymReal r;                                   // threshold parameter in use
  std::optional<std::uint64_t> c;              // Th.4 intersection cap
  std::optional<SymReal> counting_lhs;         // Th.2: C(B | A, x)
  std::optional<SymReal> counting_residual;    // Th.2: counting_lhs - log2(N)
  std::optional<SymReal> witness_conditional_x;  // Th.2: C(B' | A, x)
  std::optional<SymReal> context_levin;        // C_t(enc(A)) under exact models
  std::optional<std::uint64_t> family_description_estimate;  // lz78 of the family listing
};

/// Covering search: among family members containing x with complexity at
/// most r, count N and let k = floor(log2 N); find the cheapest member
/// containing x and report its slack against r - k. N = 0 yields a
/// no-claim report.
TheoremReport check_covering(const PlayerFamily& family, const BitString& x, const SymReal& r,
                             const ComplexityModel& model);

/// Approximation search: with r = C(B|A), count the members containing x
/// that are no harder than B given A, check the counting step
/// C(B|A,x) vs log2 N, and find the cheapest member containing x given A.
/// Slack is measured against I(x:B|A).
TheoremReport check_approximation(const PlayerFamily& family, const Player& a, const Player& b,
                                  const BitString& x, const ComplexityModel& model);

/// Information-bound search: find the cheapest member meeting A and measure
/// its unconditional complexity against I(A:B) = C(B) - C(B|A).
TheoremReport check_info_bound(const PlayerFamily& family, const Player& a, const Player& b,
                               const ComplexityModel& model);

/// Simplification search: among members B with 0 < |A∩B| <= c, count those
/// with C(B) <= r into Q, set k = floor(log2 |Q|), and find the cheapest
/// member meeting the intersection cap; slack against r - k.
TheoremReport check_simplification(const PlayerFamily& family, const Player& a, std::uint64_t c,
                                   const SymReal& r, const ComplexityModel& model);

}  // namespace islab

#endif  // ISLAB_THEOREMLAB_HPP
