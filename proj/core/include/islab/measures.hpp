#ifndef ISLAB_MEASURES_HPP
#define ISLAB_MEASURES_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "islab/bitstring.hpp"
#include "islab/model.hpp"
#include "islab/player.hpp"
#include "islab/symreal.hpp"

namespace islab {

/// R(B|A): the description length of the interaction A∩B given A.
SymReal knowledge(const Player& a, const Player& b, const ComplexityModel& model);

/// delta(S|A) = |A| - C(S|A) for S ⊆ A, +inf otherwise. Note the capacity
/// term is the raw cardinality, not its log -- kept as defined.
SymReal deficiency_subset(const Player& s, const Player& a, const ComplexityModel& model);

/// delta(x|S) = log2|S| - C(x|S) for x ∈ S, +inf otherwise (and for S = ∅).
SymReal deficiency_single(const BitString& x, const Player& s, const ComplexityModel& model);

/// delta(x|A,B) = log2|A∩B| - C(x|A,B) for x ∈ A∩B, +inf otherwise. The
/// two-set condition is the unordered context {enc(A), enc(B)}.
SymReal deficiency_pair(const BitString& x, const Player& a, const Player& b,
                        const ComplexityModel& model);

/// I(x:B|A) = C(x|A) - C(x|A,B).
SymReal info_single(const BitString& x, const Player& a, const Player& b,
                    const ComplexityModel& model);

/// I(x:y) = C(y) - C(y|x).
SymReal mutual_info(const BitString& x, const BitString& y, const ComplexityModel& model);

/// I(x:y|z) = C(y|z) - C(y|x,z).
SymReal mutual_info_cond(const BitString& x, const BitString& y, const BitString& z,
                         const ComplexityModel& model);

/// One interaction instance evaluated under one model, with the identity
/// residuals. The residuals are formed by cancelling shared model terms and
/// shared log terms symbolically before any evaluation, so they are exact
/// zeros even when individual quantities are infinite.
struct ExchangeReport {
  std::string model_name;
  std::uint64_t card_a = 0;
  std::uint64_t card_b = 0;
  std::uint64_t card_ab = 0;
  SymReal knowledge;        // R(B|A)
  SymReal def_subset;       // delta(A∩B|A)
  SymReal info_x;           // I(x:B|A)
  SymReal def_x_a;          // delta(x|A)
  SymReal def_x_ab;         // delta(x|A,B)
  SymReal eq2_residual;     // R(B|A) + delta(A∩B|A) - |A|
  SymReal eq5_residual;     // I + delta(x|A) - log2(|A|/|A∩B|) - delta(x|A,B)
  std::optional<SymReal> eq6_residual;  // only when |A| = |B|
  SymReal corollary_lhs;    // I(x:B|A) + delta(x|A), the deterministic-interaction reading
  SymReal corollary_residual;  // corollary_lhs - log2|A|; reported, never asserted
};

/// Requires x ∈ A∩B and matching widths.
ExchangeReport exchange_report(const Player& a, const Player& b, const BitString& x,
                               const ComplexityModel& model);

}  // namespace islab

#endif  // ISLAB_MEASURES_HPP
