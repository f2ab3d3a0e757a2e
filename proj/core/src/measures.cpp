#include "islab/measures.hpp"

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "islab/encoding.hpp"

namespace islab {
namespace {

// A formal integer combination of model calls plus an exact scalar. Terms
// with the same (target, canonical context) key are merged, so identities
// cancel symbolically; only the surviving terms are ever evaluated. This is
// what keeps the Eq. 2/5/6 residuals exact zeros even when the model says
// infinity.
class Formal {
 public:
  void add_term(int coefficient, const BitString& target, std::vector<BitString> context) {
    auto key = std::make_pair(target, encode_set(context));
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      terms_.emplace(std::move(key), Term{coefficient, target, std::move(context)});
    } else {
      it->second.coefficient += coefficient;
    }
  }

  void add_scalar(const SymReal& v) { scalar_ += v; }
  void sub_scalar(const SymReal& v) { scalar_ -= v; }

  SymReal evaluate(const ComplexityModel& model) const {
    SymReal acc = scalar_;
    for (const auto& [key, term] : terms_) {
      if (term.coefficient == 0) continue;
      SymReal v = model(term.target, term.context);
      for (int i = 0; i < term.coefficient; ++i) acc += v;
      for (int i = 0; i > term.coefficient; --i) acc -= v;
    }
    return acc;
  }

 private:
  struct Term {
    int coefficient;
    BitString target;
    std::vector<BitString> context;
  };
  std::map<std::pair<BitString, BitString>, Term> terms_;
  SymReal scalar_;
};

void require_same_width(const Player& a, const Player& b) {
  if (a.n() != b.n()) {
    throw std::invalid_argument("players have different widths " + std::to_string(a.n()) +
                                " and " + std::to_string(b.n()));
  }
}

}  // namespace

SymReal knowledge(const Player& a, const Player& b, const ComplexityModel& model) {
  require_same_width(a, b);
  Player shared = intersect(a, b);
  return model(shared.encoding(), {a.encoding()});
}

SymReal deficiency_subset(const Player& s, const Player& a, const ComplexityModel& model) {
  if (s.n() != a.n()) return SymReal::infinity();
  for (const auto& member : s.members()) {
    if (!a.contains(member)) return SymReal::infinity();
  }
  return SymReal(Rat(a.size())) - model(s.encoding(), {a.encoding()});
}

SymReal deficiency_single(const BitString& x, const Player& s, const ComplexityModel& model) {
  if (s.empty() || !s.contains(x)) return SymReal::infinity();
  return SymReal::log2_of(s.size()) - model(x, {s.encoding()});
}

SymReal deficiency_pair(const BitString& x, const Player& a, const Player& b,
                        const ComplexityModel& model) {
  require_same_width(a, b);
  Player shared = intersect(a, b);
  if (!shared.contains(x)) return SymReal::infinity();
  return SymReal::log2_of(shared.size()) - model(x, {a.encoding(), b.encoding()});
}

SymReal info_single(const BitString& x, const Player& a, const Player& b,
                    const ComplexityModel& model) {
  require_same_width(a, b);
  // Differenced via formal terms, so the degenerate B = A case collapses to
  // an exact zero instead of inf - inf.
  Formal f;
  f.add_term(+1, x, {a.encoding()});
  f.add_term(-1, x, {a.encoding(), b.encoding()});
  return f.evaluate(model);
}

SymReal mutual_info(const BitString& x, const BitString& y, const ComplexityModel& model) {
  Formal f;
  f.add_term(+1, y, {});
  f.add_term(-1, y, {x});
  return f.evaluate(model);
}

SymReal mutual_info_cond(const BitString& x, const BitString& y, const BitString& z,
                         const ComplexityModel& model) {
  Formal f;
  f.add_term(+1, y, {z});
  f.add_term(-1, y, {x, z});
  return f.evaluate(model);
}

ExchangeReport exchange_report(const Player& a, const Player& b, const BitString& x,
                               const ComplexityModel& model) {
  require_same_width(a, b);
  Player shared = intersect(a, b);
  if (!shared.contains(x)) {
    throw std::invalid_argument("x must lie in the interaction A∩B");
  }

  BitString enc_a = a.encoding();
  BitString enc_b = b.encoding();
  BitString enc_ab = shared.encoding();

  ExchangeReport report;
  report.model_name = model.name();
  report.card_a = a.size();
  report.card_b = b.size();
  report.card_ab = shared.size();
  report.knowledge = model(enc_ab, {enc_a});
  report.def_subset = SymReal(Rat(a.size())) - report.knowledge;
  report.info_x = info_single(x, a, b, model);
  report.def_x_a = deficiency_single(x, a, model);
  report.def_x_ab = deficiency_pair(x, a, b, model);

  // R(B|A) + delta(A∩B|A) - |A|
  Formal eq2;
  eq2.add_term(+1, enc_ab, {enc_a});
  eq2.add_scalar(SymReal(Rat(a.size())));
  eq2.add_term(-1, enc_ab, {enc_a});
  eq2.sub_scalar(SymReal(Rat(a.size())));
  report.eq2_residual = eq2.evaluate(model);

  // I(x:B|A) + delta(x|A) - log2(|A|/|A∩B|) - delta(x|A,B)
  Formal eq5;
  eq5.add_term(+1, x, {enc_a});
  eq5.add_term(-1, x, {enc_a, enc_b});
  eq5.add_scalar(SymReal::log2_of(a.size()));
  eq5.add_term(-1, x, {enc_a});
  eq5.sub_scalar(SymReal::log2_of(a.size()) - SymReal::log2_of(shared.size()));
  eq5.sub_scalar(SymReal::log2_of(shared.size()));
  eq5.add_term(+1, x, {enc_a, enc_b});
  report.eq5_residual = eq5.evaluate(model);

  if (a.size() == b.size()) {
    // [I(x:B|A) + delta(x|A)] - [I(x:A|B) + delta(x|B)]; the unordered
    // two-set contexts coincide, so everything cancels.
    Formal eq6;
    eq6.add_term(+1, x, {enc_a});
    eq6.add_term(-1, x, {enc_a, enc_b});
    eq6.add_scalar(SymReal::log2_of(a.size()));
    eq6.add_term(-1, x, {enc_a});
    eq6.add_term(-1, x, {enc_b});
    eq6.add_term(+1, x, {enc_b, enc_a});
    eq6.sub_scalar(SymReal::log2_of(b.size()));
    eq6.add_term(+1, x, {enc_b});
    report.eq6_residual = eq6.evaluate(model);
  }

  // Deterministic-interaction reading of Eq. 5: I(x:B|A) + delta(x|A)
  // collapses to log2|A| - C(x|A,B). Reported against log2|A|, not asserted.
  Formal corollary;
  corollary.add_scalar(SymReal::log2_of(a.size()));
  corollary.add_term(-1, x, {enc_a, enc_b});
  report.corollary_lhs = corollary.evaluate(model);
  report.corollary_residual = report.corollary_lhs - SymReal::log2_of(a.size());

  return report;
}

}  // namespace islab
