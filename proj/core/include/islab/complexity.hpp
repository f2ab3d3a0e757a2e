#ifndef ISLAB_COMPLEXITY_HPP
#define ISLAB_COMPLEXITY_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "islab/bitstring.hpp"
#include "islab/cache.hpp"
#include "islab/rational.hpp"
#include "islab/symreal.hpp"

namespace islab {

/// Search budget: programs of up to `max_program_bits` bits, each run for at
/// most `max_steps` executed opcodes. The defaults are the workbench's
/// interactive defaults.
struct Budget {
  std::uint32_t max_program_bits = 20;
  std::uint64_t max_steps = 10000;
};

/// Outcome of a bounded description-length search.
///
/// `value` is the bounded quantity itself (infinite when nothing was found);
/// `exact` records whether the budgeted search certifies the unbounded
/// quantity. For the plain measure a result is exact when no run among
/// strictly shorter programs hit the step budget; for the time-weighted
/// measure, when the winning score is at most both log2(max_steps) and
/// max_program_bits, so no unexplored program could beat it.
struct ComplexityResult {
  SymReal value;
  bool exact = false;
  std::optional<BitString> witness;
  std::optional<std::uint64_t> witness_time;

  bool found() const { return witness.has_value(); }
};

/// Exhaustive program-space search over the reference machine.
///
/// All searches enumerate programs in (length, numeric value) order, run each
/// with the canonical set encoding of the context as auxiliary input, and
/// reduce deterministically: results are byte-identical for every worker
/// count. An optional ResultCache memoizes finished searches.
class ComplexityEngine {
 public:
  explicit ComplexityEngine(ResultCache* cache = nullptr, unsigned workers = 0);

  /// Shortest program that halts with output exactly `x`. The witness is the
  /// least (length, numeric) program that does so within the step budget.
  ComplexityResult plain(const BitString& x, const std::vector<BitString>& context,
                         const Budget& budget) const;

  /// Minimum of length + log2(print time) over programs whose output buffer
  /// ever equals `x` at its moment of reaching l(x) bits — halting not
  /// required. Ties break by (score, length, numeric value).
  ComplexityResult levin(const BitString& x, const std::vector<BitString>& context,
                         const Budget& budget) const;

  /// Sum of 2^-l(p) over valid programs of at most max_program_bits bits
  /// that halt with output exactly `x` within the step budget. Exact dyadic
  /// rational by construction.
  Rat mass(const BitString& x, const Budget& budget) const;

  /// Upper-bound certificate: runs one given program and, if it halts with
  /// output `x`, reports its length as a (non-exact) bound. Statically
  /// invalid programs are rejected with a diagnostic.
  static ComplexityResult witness_bound(const BitString& program, const BitString& x,
                                        const std::vector<BitString>& context,
                                        std::uint64_t max_steps);

  unsigned workers() const { return workers_; }
  void set_workers(unsigned w) { workers_ = w; }

 private:
  ResultCache* cache_;
  unsigned workers_;
};

}  // namespace islab

#endif  // ISLAB_COMPLEXITY_HPP
