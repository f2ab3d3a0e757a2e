#ifndef ISLAB_CYBERNETIC_HPP
#define ISLAB_CYBERNETIC_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "islab/bitstring.hpp"
#include "islab/player.hpp"
#include "islab/rational.hpp"

namespace islab {

/// Symbols are the integers 0..count-1, coded in `bits` bits.
struct Alphabet {
  std::uint32_t bits = 1;
  std::uint32_t count = 2;
  void validate() const;
  bool operator==(const Alphabet&) const = default;
};

/// An agent-environment loop runs in cycles: the agent emits an action
/// symbol, the environment answers with a perception symbol carrying an
/// integer reward. The environment is chronological -- the distribution of
/// the k-th perception depends only on the history through the k-th action.
/// Conditional probabilities are exact rationals and may sum below one
/// (semimeasure); queries on zero-probability histories return 0.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::string name() const = 0;
  const Alphabet& actions() const { return actions_; }
  const Alphabet& perceptions() const { return perceptions_; }
  std::uint64_t reward(std::uint32_t x) const;
  std::uint64_t reward_bound() const { return reward_bound_; }
  /// Largest horizon this environment's tables cover (kUnbounded for
  /// closed-form environments).
  virtual std::uint32_t horizon() const { return kUnbounded; }

  /// mu(x | y_{1:k} x_{<k}) with actions = y_{1:k} (current action last)
  /// and perceptions = x_{<k}.
  virtual Rat conditional(const std::vector<std::uint32_t>& actions,
                          const std::vector<std::uint32_t>& perceptions,
                          std::uint32_t x) const = 0;

  /// Deterministic text form used for description-length weighting.
  virtual std::string canonical_serialization() const = 0;

  /// Probability of a complete interleaved history (product of
  /// conditionals; actions contribute no factor).
  Rat history_probability(const std::vector<std::uint32_t>& ys,
                          const std::vector<std::uint32_t>& xs) const;

  /// Every reachable condition up to horizon m has a conditional row
  /// summing to exactly 1 (required of mixture members).
  void validate_complete(std::uint32_t m) const;

  static constexpr std::uint32_t kUnbounded = 0xffffffffu;

 protected:
  Environment(Alphabet actions, Alphabet perceptions, std::vector<std::uint64_t> rewards,
              std::uint64_t reward_bound);

 private:
  Alphabet actions_;
  Alphabet perceptions_;
  std::vector<std::uint64_t> rewards_;  // indexed by perception symbol
  std::uint64_t reward_bound_;
};

/// Environment backed by explicit conditional tables with a finite horizon.
class TableEnvironment : public Environment {
 public:
  TableEnvironment(std::string name, Alphabet actions, Alphabet perceptions,
                   std::vector<std::uint64_t> rewards, std::uint64_t reward_bound,
                   std::uint32_t horizon);

  /// Register mu(x | condition) for the interleaved condition
  /// y1 x1 ... y_k (odd length). Re-adding a row entry is an error.
  void add_conditional(const std::vector<std::uint32_t>& condition, std::uint32_t x,
                       const Rat& probability);
  /// Check every provided row sums to at most 1. Call once after the last
  /// add_conditional.
  void validate() const;

  std::string name() const override { return name_; }
  std::uint32_t horizon() const override { return horizon_; }
  Rat conditional(const std::vector<std::uint32_t>& actions,
                  const std::vector<std::uint32_t>& perceptions,
                  std::uint32_t x) const override;
  std::string canonical_serialization() const override;

  const std::map<std::vector<std::uint32_t>, std::map<std::uint32_t, Rat>>& rows() const {
    return rows_;
  }

 private:
  std::string name_;
  std::uint32_t horizon_;
  std::map<std::vector<std::uint32_t>, std::map<std::uint32_t, Rat>> rows_;
};

/// x_k := y_k over 1-bit alphabets, reward = perception bit.
std::shared_ptr<Environment> echo_environment();
/// x_k := 1 - y_k over 1-bit alphabets, reward = perception bit.
std::shared_ptr<Environment> anti_environment();
/// x_k uniform on {0,1} regardless of actions, reward = perception bit.
std::shared_ptr<Environment> fair_coin_environment();

/// Deterministic total policy: perception history so far -> next action.
class Policy {
 public:
  Policy(std::uint32_t action_count, std::uint32_t perception_count)
      : action_count_(action_count), perception_count_(perception_count) {}
  virtual ~Policy() = default;

  std::uint32_t action_count() const { return action_count_; }
  std::uint32_t perception_count() const { return perception_count_; }
  virtual std::uint32_t horizon() const { return Environment::kUnbounded; }
  virtual std::uint32_t action(const std::vector<std::uint32_t>& perceptions) const = 0;

 private:
  std::uint32_t action_count_;
  std::uint32_t perception_count_;
};

class ConstPolicy : public Policy {
 public:
  ConstPolicy(std::uint32_t action, std::uint32_t action_count, std::uint32_t perception_count);
  std::uint32_t action(const std::vector<std::uint32_t>&) const override { return action_; }

 private:
  std::uint32_t action_;
};

class TablePolicy : public Policy {
 public:
  /// The table must be total: one action for every perception history of
  /// length < horizon.
  TablePolicy(std::uint32_t action_count, std::uint32_t perception_count, std::uint32_t horizon,
              std::map<std::vector<std::uint32_t>, std::uint32_t> table);

  std::uint32_t horizon() const override { return horizon_; }
  std::uint32_t action(const std::vector<std::uint32_t>& perceptions) const override;
  const std::map<std::vector<std::uint32_t>, std::uint32_t>& table() const { return table_; }

 private:
  std::uint32_t horizon_;
  std::map<std::vector<std::uint32_t>, std::uint32_t> table_;
};

/// Fixed-width interleaved coding y1 x1 ... y_m x_m of complete histories.
struct HistoryCodec {
  std::uint32_t action_bits = 1;
  std::uint32_t perception_bits = 1;
  std::uint32_t horizon = 1;

  std::uint32_t n() const { return horizon * (action_bits + perception_bits); }
  void validate() const;
  BitString encode(const std::vector<std::uint32_t>& ys,
                   const std::vector<std::uint32_t>& xs) const;
  std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> decode(
      const BitString& coded) const;
  static HistoryCodec for_env(const Environment& env, std::uint32_t m);
};

/// Exact expected total reward of policy p over m cycles.
Rat value(const Policy& p, const Environment& env, std::uint32_t m);

/// V*_{1:m}(yx_{1:k}): realized reward of the given partial history plus the
/// optimal expected reward of the remaining cycles. The empty history gives
/// the unconditional optimum. Histories outside the environment's support
/// are rejected.
Rat optimal_value(const Environment& env, std::uint32_t m,
                  const std::vector<std::uint32_t>& ys = {},
                  const std::vector<std::uint32_t>& xs = {});

/// The expectimax arg-max policy, ties broken toward the numerically
/// smallest action.
TablePolicy optimal_policy(const Environment& env, std::uint32_t m);

/// A^p_m: every m-cycle history whose actions follow p.
Player agent_set(const Policy& p, const HistoryCodec& codec);

/// B^mu_{m,tau}: support histories with total reward >= tau.
Player env_set_B(const Environment& env, const HistoryCodec& codec, const Rat& tau);

/// D^mu_{m,tau}: support histories where every prefix keeps
/// V*(yx_{1:k}) >= tau * V*_{1:m}. Requires V*_{1:m} > 0.
Player env_set_D(const Environment& env, const HistoryCodec& codec, const Rat& tau);

enum class EnvSetVariant { B, D };

struct InteractionResult {
  bool interacts = false;
  std::optional<BitString> witness;  // lexicographically first shared history
  std::uint64_t agent_size = 0;
  std::uint64_t env_size = 0;
  std::uint64_t shared = 0;
};

/// Does A^p_m meet the chosen environment set at difficulty tau?
InteractionResult interacts_at(const Policy& p, const Environment& env, std::uint32_t m,
                               const Rat& tau, EnvSetVariant variant);

}  // namespace islab

#endif  // ISLAB_CYBERNETIC_HPP
