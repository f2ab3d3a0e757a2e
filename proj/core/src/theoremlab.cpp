#include "islab/theoremlab.hpp"

#include <bit>
#include <stdexcept>

#include "islab/errors.hpp"
#include "islab/lz78.hpp"
#include "islab/measures.hpp"

namespace islab {
namespace {

std::uint32_t floor_log2_count(std::uint64_t n) {
  return 63u - static_cast<std::uint32_t>(std::countl_zero(n));
}

BitString ascii_bits(const std::string& text) {
  BitString out;
  for (unsigned char ch : text) {
    for (int bit = 7; bit >= 0; --bit) out.push_back((ch >> bit) & 1);
  }
  return out;
}

std::uint64_t family_estimate(const PlayerFamily& family) {
  std::string listing;
  for (const auto& member : family.members) listing += member.to_text();
  return lz78_estimate(ascii_bits(listing));
}

bool leq(const SymReal& lhs, const SymReal& rhs) {
  return lhs == rhs || lhs < rhs;
}

// Lowest-index member minimizing the given complexities, restricted to the
// eligibility mask. Returns family size when nothing is eligible.
std::size_t argmin_eligible(const std::vector<SymReal>& costs, const std::vector<bool>& eligible) {
  std::size_t best = costs.size();
  for (std::size_t i = 0; i < costs.size(); ++i) {
    if (!eligible[i]) continue;
    if (best == costs.size() || costs[i] < costs[best]) best = i;
  }
  return best;
}

// When the model is the exact one, report the Levin complexity of the
// conditioning player's encoding alongside, for context.
std::optional<SymReal> levin_context(const ComplexityModel& model, const Player& a) {
  const auto* exact = dynamic_cast<const ExactBoundedModel*>(&model);
  if (!exact) return std::nullopt;
  return exact->engine().levin(a.encoding(), {}, exact->budget()).value;
}

}  // namespace

std::uint32_t PlayerFamily::n() const {
  validate();
  return members.front().n();
}

void PlayerFamily::validate() const {
  if (members.empty()) throw SchemaError("player family must be nonempty");
  std::uint32_t width = members.front().n();
  for (const auto& member : members) {
    if (member.n() != width) throw SchemaError("player family members must share one width");
  }
}

PlayerFamily PlayerFamily::all_pairs(std::uint32_t n) {
  if (n > 8) throw ScaleLimitError("pair families limited to width 8");
  std::uint64_t total = std::uint64_t{1} << n;
  PlayerFamily family;
  family.name = "pairs-n" + std::to_string(n);
  for (std::uint64_t x = 0; x < total; ++x) {
    for (std::uint64_t y = x + 1; y < total; ++y) {
      family.members.push_back(Player::from_members(
          n, {BitString::from_uint(x, n), BitString::from_uint(y, n)}));
    }
  }
  return family;
}

PlayerFamily PlayerFamily::all_singletons(std::uint32_t n) {
  if (n > 16) throw ScaleLimitError("singleton families limited to width 16");
  std::uint64_t total = std::uint64_t{1} << n;
  PlayerFamily family;
  family.name = "singletons-n" + std::to_string(n);
  for (std::uint64_t x = 0; x < total; ++x) {
    family.members.push_back(Player::from_members(n, {BitString::from_uint(x, n)}));
  }
  return family;
}

TheoremReport check_covering(const PlayerFamily& family, const BitString& x, const SymReal& r,
                             const ComplexityModel& model) {
  family.validate();
  if (x.size() != family.n()) {
    throw std::invalid_argument("x must have the family's width");
  }
  TheoremReport report;
  report.check = "covering";
  report.model_name = model.name();
  report.family_name = family.name;
  report.family_size = family.members.size();
  report.r = r;
  report.family_description_estimate = family_estimate(family);

  std::vector<SymReal> costs;
  std::vector<bool> contains_x;
  for (const auto& member : family.members) {
    costs.push_back(model(member.encoding()));
    contains_x.push_back(member.contains(x));
  }
  std::uint64_t qualifying = 0;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    if (contains_x[i] && leq(costs[i], r)) ++qualifying;
  }
  report.qualifying_count = qualifying;
  if (qualifying == 0) {
    report.claim = false;
    return report;
  }
  report.claim = true;
  std::uint32_t k = floor_log2_count(qualifying);
  report.k = k;
  std::size_t best = argmin_eligible(costs, contains_x);
  report.witness_index = best;
  report.witness = family.members[best];
  report.witness_complexity = costs[best];
  report.bound_target = r - SymReal(Rat(k));
  report.slack = report.witness_complexity - report.bound_target;
  if (!family.members[best].contains(x)) {
    throw VerificationError("covering witness lost its membership on recheck");
  }
  return report;
}

TheoremReport check_approximation(const PlayerFamily& family, const Player& a, const Player& b,
                                  const BitString& x, const ComplexityModel& model) {
  family.validate();
  if (a.n() != family.n() || b.n() != family.n()) {
    throw std::invalid_argument("players must have the family's width");
  }
  bool b_in_family = false;
  for (const auto& member : family.members) {
    if (member == b) { b_in_family = true; break; }
  }
  if (!b_in_family) throw std::invalid_argument("B must belong to the family");
  Player shared = intersect(a, b);
  if (!shared.contains(x)) throw std::invalid_argument("x must lie in the interaction A∩B");

  TheoremReport report;
  report.check = "approximation";
  report.model_name = model.name();
  report.family_name = family.name;
  report.family_size = family.members.size();
  report.family_description_estimate = family_estimate(family);
  report.context_levin = levin_context(model, a);

  BitString enc_a = a.encoding();
  SymReal r = model(b.encoding(), {enc_a});
  report.r = r;
  std::vector<SymReal> conditional;
  std::vector<bool> contains_x;
  for (const auto& member : family.members) {
    conditional.push_back(model(member.encoding(), {enc_a}));
    contains_x.push_back(member.contains(x));
  }
  std::uint64_t qualifying = 0;
  for (std::size_t i = 0; i < conditional.size(); ++i) {
    if (contains_x[i] && leq(conditional[i], r)) ++qualifying;
  }
  report.qualifying_count = qualifying;  // >= 1: B itself qualifies
  report.k = floor_log2_count(qualifying);
  report.counting_lhs = model(b.encoding(), {enc_a, x});
  report.counting_residual = *report.counting_lhs - SymReal::log2_of(qualifying);

  std::size_t best = argmin_eligible(conditional, contains_x);
  report.claim = true;
  report.witness_index = best;
  report.witness = family.members[best];
  report.witness_complexity = conditional[best];
  report.bound_target = info_single(x, a, b, model);
  report.slack = report.witness_complexity - report.bound_target;
  report.witness_conditional_x = model(family.members[best].encoding(), {enc_a, x});
  if (!family.members[best].contains(x)) {
    throw VerificationError("approximation witness lost its membership on recheck");
  }
  return report;
}

TheoremReport check_info_bound(const PlayerFamily& family, const Player& a, const Player& b,
                               const ComplexityModel& model) {
  family.validate();
  if (a.n() != family.n() || b.n() != family.n()) {
    throw std::invalid_argument("players must have the family's width");
  }
  bool b_in_family = false;
  for (const auto& member : family.members) {
    if (member == b) { b_in_family = true; break; }
  }
  if (!b_in_family) throw std::invalid_argument("B must belong to the family");
  if (!interacts(a, b)) throw std::invalid_argument("A and B must interact");

  TheoremReport report;
  report.check = "info-bound";
  report.model_name = model.name();
  report.family_name = family.name;
  report.family_size = family.members.size();
  report.family_description_estimate = family_estimate(family);
  report.context_levin = levin_context(model, a);

  SymReal info = model(b.encoding()) - model(b.encoding(), {a.encoding()});
  report.r = info;
  std::vector<SymReal> costs;
  std::vector<bool> meets_a;
  std::uint64_t eligible = 0;
  for (const auto& member : family.members) {
    costs.push_back(model(member.encoding()));
    bool meets = interacts(a, member);
    meets_a.push_back(meets);
    if (meets) ++eligible;
  }
  report.qualifying_count = eligible;
  std::size_t best = argmin_eligible(costs, meets_a);
  report.claim = true;  // B itself is eligible
  report.witness_index = best;
  report.witness = family.members[best];
  report.witness_complexity = costs[best];
  report.bound_target = info;
  report.slack = report.witness_complexity - report.bound_target;
  if (!interacts(a, family.members[best])) {
    throw VerificationError("info-bound witness lost its intersection on recheck");
  }
  return report;
}

TheoremReport check_simplification(const PlayerFamily& family, const Player& a, std::uint64_t c,
                                   const SymReal& r, const ComplexityModel& model) {
  family.validate();
  if (c == 0) throw std::invalid_argument("intersection cap must be at least 1");
  if (a.n() != family.n()) throw std::invalid_argument("A must have the family's width");

  TheoremReport report;
  report.check = "simplification";
  report.model_name = model.name();
  report.family_name = family.name;
  report.family_size = family.members.size();
  report.r = r;
  report.c = c;
  report.family_description_estimate = family_estimate(family);

  std::vector<SymReal> costs;
  std::vector<bool> eligible;
  std::uint64_t in_q = 0;
  for (const auto& member : family.members) {
    costs.push_back(model(member.encoding()));
    std::uint64_t meet = intersect(a, member).size();
    bool ok = meet > 0 && meet <= c;
    eligible.push_back(ok);
    if (ok && leq(costs.back(), r)) ++in_q;
  }
  report.qualifying_count = in_q;
  if (in_q == 0) {
    report.claim = false;
    return report;
  }
  report.claim = true;
  std::uint32_t k = floor_log2_count(in_q);
  report.k = k;
  std::size_t best = argmin_eligible(costs, eligible);
  report.witness_index = best;
  report.witness = family.members[best];
  report.witness_complexity = costs[best];
  report.bound_target = r - SymReal(Rat(k));
  report.slack = report.witness_complexity - report.bound_target;
  std::uint64_t recheck = intersect(a, family.members[best]).size();
  if (recheck == 0 || recheck > c) {
    throw VerificationError("simplification witness lost its intersection cap on recheck");
  }
  return report;
}

}  // namespace islab
