#include "islab/model.hpp"

#include "islab/encoding.hpp"
#include "islab/lz78.hpp"

namespace islab {

std::string ExactBoundedModel::name() const {
  return "exact-bounded(L=" + std::to_string(budget_.max_program_bits) +
         ",T=" + std::to_string(budget_.max_steps) + ")";
}

SymReal ExactBoundedModel::code_length(const BitString& target,
                                       const std::vector<BitString>& context) const {
  return engine_->plain(target, context, budget_).value;
}

std::string LevinBoundedModel::name() const {
  return "levin-bounded(L=" + std::to_string(budget_.max_program_bits) +
         ",T=" + std::to_string(budget_.max_steps) + ")";
}

SymReal LevinBoundedModel::code_length(const BitString& target,
                                       const std::vector<BitString>& context) const {
  return engine_->levin(target, context, budget_).value;
}

SymReal LZ78Model::code_length(const BitString& target,
                               const std::vector<BitString>& context) const {
  return SymReal(
      static_cast<std::int64_t>(lz78_estimate(target, encode_set(context))));
}

bool WitnessTableModel::add(const BitString& program, const BitString& target,
                            const std::vector<BitString>& context,
                            std::uint64_t max_steps) {
  ComplexityResult r = ComplexityEngine::witness_bound(program, target, context, max_steps);
  if (!r.found()) return false;
  auto key = std::make_pair(target, encode_set(context));
  auto it = table_.find(key);
  const std::uint64_t len = program.size();
  if (it == table_.end() || len < it->second) table_[key] = len;
  return true;
}

SymReal WitnessTableModel::code_length(const BitString& target,
                                       const std::vector<BitString>& context) const {
  auto it = table_.find(std::make_pair(target, encode_set(context)));
  if (it == table_.end()) return SymReal::infinity();
  return SymReal(static_cast<std::int64_t>(it->second));
}

}  // namespace islab
