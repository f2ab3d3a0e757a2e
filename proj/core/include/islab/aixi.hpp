#ifndef ISLAB_AIXI_HPP
#define ISLAB_AIXI_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "islab/bitstring.hpp"
#include "islab/cybernetic.hpp"
#include "islab/rational.hpp"

namespace islab {

/// A finite prior over proper-measure environments with shared alphabets.
struct WeightedFamily {
  std::vector<std::shared_ptr<const Environment>> environments;
  std::vector<Rat> weights;  // positive; normalized by validate_and_normalize

  /// Checks alphabets agree, weights are positive, every member is a proper
  /// measure up to horizon m, and rescales the weights to sum to 1.
  void validate_and_normalize(std::uint32_t m);

  /// Description-length prior: weight each environment by
  /// 2^-(dictionary estimate of its canonical serialization), normalized.
  static WeightedFamily with_default_weights(
      std::vector<std::shared_ptr<const Environment>> environments);
};

/// The Bayes mixture over the family: a semimeasure environment whose
/// conditional is the posterior-weighted average of the members'. Exact
/// rational arithmetic throughout.
std::shared_ptr<Environment> mixture(WeightedFamily family, std::uint32_t m);

/// The expectimax-optimal policy against mixture(family) at horizon m, ties
/// toward the smallest action.
TablePolicy aixi_policy(const WeightedFamily& family, std::uint32_t m);

/// One environment/threshold row of the universality experiment.
struct UniversalityRow {
  std::string env_name;
  Rat tau;
  struct Entry {
    bool defined = true;   // false when V*_{1:m}(nu) = 0
    bool interacts = false;
    std::optional<BitString> witness;
  };
  std::map<std::uint32_t, Entry> per_m;
  std::optional<std::uint32_t> first_interacting_m;
};

/// For each member environment nu and each threshold: is
/// A^{p^xi_m}_m ∩ D^nu_{m,tau} nonempty, for m across the range?
std::vector<UniversalityRow> universality_experiment(const WeightedFamily& family,
                                                     const std::vector<Rat>& taus,
                                                     std::uint32_t m_min, std::uint32_t m_max);

}  // namespace islab

#endif  // ISLAB_AIXI_HPP
