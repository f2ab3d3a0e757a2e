#ifndef ISLAB_MODEL_HPP
#define ISLAB_MODEL_HPP

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "islab/bitstring.hpp"
#include "islab/complexity.hpp"
#include "islab/symreal.hpp"

namespace islab {

/// A pluggable code-length functional: (target, context set) -> bits.
///
/// Every information measure is parameterized by one of these, so identity
/// equations can be checked for any functional. Contexts are unordered sets;
/// implementations canonicalize them (sort, dedup, set-encode), which is what
/// turns the paper's up-to-O(1) symmetries into exact ones here.
class ComplexityModel {
 public:
  virtual ~ComplexityModel() = default;
  virtual std::string name() const = 0;
  virtual SymReal code_length(const BitString& target,
                              const std::vector<BitString>& context) const = 0;

  SymReal operator()(const BitString& target,
                     const std::vector<BitString>& context = {}) const {
    return code_length(target, context);
  }
};

/// Bounded shortest-program length (infinite when the search finds nothing).
class ExactBoundedModel final : public ComplexityModel {
 public:
  ExactBoundedModel(const ComplexityEngine& engine, Budget budget)
      : engine_(&engine), budget_(budget) {}
  std::string name() const override;
  SymReal code_length(const BitString& target,
                      const std::vector<BitString>& context) const override;
  const Budget& budget() const { return budget_; }
  const ComplexityEngine& engine() const { return *engine_; }

 private:
  const ComplexityEngine* engine_;
  Budget budget_;
};

/// Bounded length-plus-log-time score.
class LevinBoundedModel final : public ComplexityModel {
 public:
  LevinBoundedModel(const ComplexityEngine& engine, Budget budget)
      : engine_(&engine), budget_(budget) {}
  std::string name() const override;
  SymReal code_length(const BitString& target,
                      const std::vector<BitString>& context) const override;
  const Budget& budget() const { return budget_; }

 private:
  const ComplexityEngine* engine_;
  Budget budget_;
};

/// Dictionary-coder estimate; always finite, always integer-valued.
class LZ78Model final : public ComplexityModel {
 public:
  std::string name() const override { return "lz78"; }
  SymReal code_length(const BitString& target,
                      const std::vector<BitString>& context) const override;
};

/// Explicit upper-bound table built from hand-written witness programs.
/// Each entry is validated on insertion by actually running the program;
/// queries without an entry report infinity.
class WitnessTableModel final : public ComplexityModel {
 public:
  std::string name() const override { return "witness-table"; }

  /// Runs `program` against the canonical encoding of `context`; if it halts
  /// with output `target`, records l(program) as the code length (keeping
  /// the smaller value on repeat insertions). Throws like witness_bound on
  /// statically invalid programs; returns false when the run misses.
  bool add(const BitString& program, const BitString& target,
           const std::vector<BitString>& context, std::uint64_t max_steps);

  SymReal code_length(const BitString& target,
                      const std::vector<BitString>& context) const override;

 private:
  std::map<std::pair<BitString, BitString>, std::uint64_t> table_;
};

}  // namespace islab

#endif  // ISLAB_MODEL_HPP
