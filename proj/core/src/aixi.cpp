#include "islab/aixi.hpp"

#include <sstream>
#include <stdexcept>

#include "islab/errors.hpp"
#include "islab/lz78.hpp"

namespace islab {
namespace {

BitString ascii_bits(const std::string& text) {
  BitString out;
  for (unsigned char ch : text) {
    for (int bit = 7; bit >= 0; --bit) out.push_back((ch >> bit) & 1);
  }
  return out;
}

// Bayes mixture as an environment: the pending perception's probability is
// the joint-history-weighted average of the members'. Members that have
// contradicted the history carry zero joint weight, which is the posterior
// update done with exact rationals.
class MixtureEnvironment : public Environment {
 public:
  MixtureEnvironment(WeightedFamily family, std::uint32_t m)
      : Environment(family.environments.front()->actions(),
                    family.environments.front()->perceptions(),
                    reward_map_of(*family.environments.front()),
                    family.environments.front()->reward_bound()),
        family_(std::move(family)), horizon_(m) {}

  std::string name() const override {
    std::string out = "xi(";
    for (std::size_t i = 0; i < family_.environments.size(); ++i) {
      if (i) out += ",";
      out += family_.environments[i]->name();
    }
    return out + ")";
  }

  std::uint32_t horizon() const override { return horizon_; }

  Rat conditional(const std::vector<std::uint32_t>& actions,
                  const std::vector<std::uint32_t>& perceptions,
                  std::uint32_t x) const override {
    if (actions.size() != perceptions.size() + 1) {
      throw std::invalid_argument("condition must contain exactly one pending action");
    }
    Rat numerator(0), denominator(0);
    std::vector<std::uint32_t> past_actions(actions.begin(), actions.end() - 1);
    for (std::size_t i = 0; i < family_.environments.size(); ++i) {
      const Environment& member = *family_.environments[i];
      Rat joint = family_.weights[i] * member.history_probability(past_actions, perceptions);
      if (joint == Rat(0)) continue;
      denominator += joint;
      numerator += joint * member.conditional(actions, perceptions, x);
    }
    if (denominator == Rat(0)) return Rat(0);
    return numerator / denominator;
  }

  std::string canonical_serialization() const override {
    std::ostringstream os;
    os << "mixture";
    for (std::size_t i = 0; i < family_.environments.size(); ++i) {
      os << " [w=" << rat_to_string(family_.weights[i]) << " "
         << family_.environments[i]->canonical_serialization() << "]";
    }
    return os.str();
  }

 private:
  static std::vector<std::uint64_t> reward_map_of(const Environment& env) {
    std::vector<std::uint64_t> rewards;
    for (std::uint32_t x = 0; x < env.perceptions().count; ++x) rewards.push_back(env.reward(x));
    return rewards;
  }

  WeightedFamily family_;
  std::uint32_t horizon_;
};

}  // namespace

void WeightedFamily::validate_and_normalize(std::uint32_t m) {
  if (environments.empty()) throw std::invalid_argument("environment family must be nonempty");
  if (weights.empty()) weights.assign(environments.size(), Rat(1));
  if (weights.size() != environments.size()) {
    throw std::invalid_argument("weights must pair up with environments");
  }
  const Environment& first = *environments.front();
  for (const auto& env : environments) {
    if (!env) throw std::invalid_argument("null environment in family");
    if (!(env->actions() == first.actions()) || !(env->perceptions() == first.perceptions())) {
      throw std::invalid_argument("family members must share alphabets");
    }
    if (env->reward_bound() != first.reward_bound()) {
      throw std::invalid_argument("family members must share the reward bound");
    }
    for (std::uint32_t x = 0; x < first.perceptions().count; ++x) {
      if (env->reward(x) != first.reward(x)) {
        throw std::invalid_argument("family members must share the reward map");
      }
    }
    env->validate_complete(m);
  }
  Rat total(0);
  for (const auto& w : weights) {
    if (!(w > Rat(0))) throw std::invalid_argument("mixture weights must be positive");
    total += w;
  }
  for (auto& w : weights) w /= total;
}

WeightedFamily WeightedFamily::with_default_weights(
    std::vector<std::shared_ptr<const Environment>> environments) {
  WeightedFamily family;
  family.environments = std::move(environments);
  for (const auto& env : family.environments) {
    if (!env) throw std::invalid_argument("null environment in family");
    std::uint64_t bits = lz78_estimate(ascii_bits(env->canonical_serialization()));
    family.weights.push_back(pow2_inv(bits));
  }
  return family;
}

std::shared_ptr<Environment> mixture(WeightedFamily family, std::uint32_t m) {
  family.validate_and_normalize(m);
  return std::make_shared<MixtureEnvironment>(std::move(family), m);
}

TablePolicy aixi_policy(const WeightedFamily& family, std::uint32_t m) {
  auto xi = mixture(family, m);
  return optimal_policy(*xi, m);
}

std::vector<UniversalityRow> universality_experiment(const WeightedFamily& family,
                                                     const std::vector<Rat>& taus,
                                                     std::uint32_t m_min, std::uint32_t m_max) {
  if (m_min == 0 || m_min > m_max) throw std::invalid_argument("bad horizon range");
  // One AIXI policy per horizon, shared across all rows.
  std::map<std::uint32_t, TablePolicy> policies;
  for (std::uint32_t m = m_min; m <= m_max; ++m) {
    policies.emplace(m, aixi_policy(family, m));
  }
  std::vector<UniversalityRow> rows;
  for (const auto& nu : family.environments) {
    for (const auto& tau : taus) {
      UniversalityRow row;
      row.env_name = nu->name();
      row.tau = tau;
      for (std::uint32_t m = m_min; m <= m_max; ++m) {
        UniversalityRow::Entry entry;
        if (optimal_value(*nu, m) == Rat(0)) {
          entry.defined = false;
        } else {
          HistoryCodec codec = HistoryCodec::for_env(*nu, m);
          Player a = agent_set(policies.at(m), codec);
          Player d = env_set_D(*nu, codec, tau);
          Player shared = intersect(a, d);
          entry.interacts = !shared.empty();
          if (entry.interacts) {
            entry.witness = shared.members().front();
            if (!row.first_interacting_m) row.first_interacting_m = m;
          }
        }
        row.per_m.emplace(m, std::move(entry));
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace islab
