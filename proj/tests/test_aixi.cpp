// Bayes mixtures over environment families, the expectimax policy against
// the mixture, and the interaction-universality sweep.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "islab/aixi.hpp"
#include "islab/cybernetic.hpp"
#include "islab/errors.hpp"
#include "islab/lz78.hpp"

using namespace islab;

namespace {

WeightedFamily echo_anti() {
  WeightedFamily family;
  family.environments = {echo_environment(), anti_environment()};
  family.weights = {Rat(1), Rat(1)};
  return family;
}

// All deterministic 1-bit policies up to horizon m (total tables).
std::vector<TablePolicy> all_policies(std::uint32_t m) {
  std::vector<std::vector<std::uint32_t>> nodes;
  std::function<void(std::vector<std::uint32_t>&)> grow =
      [&](std::vector<std::uint32_t>& hist) {
        nodes.push_back(hist);
        if (hist.size() + 1 >= m) return;
        for (std::uint32_t x = 0; x < 2; ++x) {
          hist.push_back(x);
          grow(hist);
          hist.pop_back();
        }
      };
  std::vector<std::uint32_t> root;
  grow(root);

  std::vector<TablePolicy> out;
  std::vector<std::uint32_t> assignment(nodes.size(), 0);
  while (true) {
    std::map<std::vector<std::uint32_t>, std::uint32_t> table;
    for (std::size_t i = 0; i < nodes.size(); ++i) table[nodes[i]] = assignment[i];
    out.emplace_back(2, 2, m, table);
    std::size_t i = 0;
    for (; i < assignment.size(); ++i) {
      if (++assignment[i] < 2) break;
      assignment[i] = 0;
    }
    if (i == assignment.size()) break;
  }
  return out;
}

BitString ascii_bits(const std::string& text) {
  BitString out;
  for (unsigned char ch : text) {
    for (int bit = 7; bit >= 0; --bit) out.push_back((ch >> bit) & 1);
  }
  return out;
}

// An environment that answers like echo but pays nothing, making V* = 0.
std::shared_ptr<TableEnvironment> dull_environment() {
  auto env = std::make_shared<TableEnvironment>("dull", Alphabet{1, 2}, Alphabet{1, 2},
                                                std::vector<std::uint64_t>{0, 0}, 0, 6);
  std::function<void(std::vector<std::uint32_t>&)> fill =
      [&](std::vector<std::uint32_t>& condition) {
        std::uint32_t y = condition.back();
        env->add_conditional(condition, y, Rat(1));
        env->add_conditional(condition, 1 - y, Rat(0));
        if (condition.size() / 2 + 1 == 6) return;
        for (std::uint32_t x = 0; x < 2; ++x) {
          for (std::uint32_t y2 = 0; y2 < 2; ++y2) {
            condition.push_back(x);
            condition.push_back(y2);
            fill(condition);
            condition.pop_back();
            condition.pop_back();
          }
        }
      };
  for (std::uint32_t y = 0; y < 2; ++y) {
    std::vector<std::uint32_t> root = {y};
    fill(root);
  }
  env->validate();
  return env;
}

}  // namespace

TEST_CASE("family validation and normalization") {
  WeightedFamily family = echo_anti();
  family.validate_and_normalize(3);
  CHECK(family.weights[0] == Rat(1, 2));
  CHECK(family.weights[1] == Rat(1, 2));

  WeightedFamily empty;
  CHECK_THROWS_AS(empty.validate_and_normalize(2), std::invalid_argument);

  WeightedFamily lopsided = echo_anti();
  lopsided.weights.pop_back();
  CHECK_THROWS_AS(lopsided.validate_and_normalize(2), std::invalid_argument);

  WeightedFamily nonpositive = echo_anti();
  nonpositive.weights[0] = Rat(0);
  CHECK_THROWS_AS(nonpositive.validate_and_normalize(2), std::invalid_argument);

  // A semimeasure member (row sums to 1/2) is not a proper environment.
  auto leaky = std::make_shared<TableEnvironment>("leaky", Alphabet{1, 2}, Alphabet{1, 2},
                                                  std::vector<std::uint64_t>{0, 1}, 1, 2);
  leaky->add_conditional({0}, 0, Rat(1, 2));
  leaky->add_conditional({1}, 1, Rat(1, 2));
  leaky->validate();
  WeightedFamily half;
  half.environments = {leaky};
  half.weights = {Rat(1)};
  CHECK_THROWS_AS(half.validate_and_normalize(2), SchemaError);
}

TEST_CASE("default weights follow the serialization estimates") {
  WeightedFamily family =
      WeightedFamily::with_default_weights({echo_environment(), anti_environment()});
  REQUIRE(family.weights.size() == 2);
  Rat w_echo = pow2_inv(lz78_estimate(ascii_bits(echo_environment()->canonical_serialization())));
  Rat w_anti = pow2_inv(lz78_estimate(ascii_bits(anti_environment()->canonical_serialization())));
  CHECK(family.weights[0] == w_echo);
  CHECK(family.weights[1] == w_anti);
  family.validate_and_normalize(2);
  CHECK(family.weights[0] + family.weights[1] == Rat(1));
  CHECK(family.weights[0] == w_echo / (w_echo + w_anti));
}

TEST_CASE("mixture conditionals") {
  auto xi = mixture(echo_anti(), 3);
  // Before any evidence the two members split the prediction evenly.
  CHECK(xi->conditional({1}, {}, 1) == Rat(1, 2));
  CHECK(xi->conditional({1}, {}, 0) == Rat(1, 2));
  CHECK(xi->conditional({0}, {}, 1) == Rat(1, 2));

  // One echo-consistent cycle kills the anti hypothesis outright.
  CHECK(xi->conditional({1, 1}, {1}, 1) == Rat(1));
  CHECK(xi->conditional({1, 1}, {1}, 0) == Rat(0));
  // And an anti-consistent cycle kills echo: x2 = NOT y2 with certainty.
  CHECK(xi->conditional({1, 0}, {0}, 1) == Rat(1));
  CHECK(xi->conditional({1, 0}, {0}, 0) == Rat(0));

  // Singleton mixture is the member itself.
  WeightedFamily solo;
  solo.environments = {echo_environment()};
  solo.weights = {Rat(7)};  // any positive weight normalizes away
  auto xi1 = mixture(solo, 2);
  auto echo = echo_environment();
  CHECK(xi1->conditional({0}, {}, 0) == echo->conditional({0}, {}, 0));
  CHECK(xi1->conditional({1}, {}, 1) == echo->conditional({1}, {}, 1));
  CHECK(xi1->conditional({1, 0}, {1}, 0) == echo->conditional({1, 0}, {1}, 0));
}

TEST_CASE("mixture dominance over every member") {
  WeightedFamily family;
  family.environments = {echo_environment(), anti_environment(), fair_coin_environment()};
  family.weights = {Rat(1), Rat(1), Rat(2)};
  WeightedFamily normalized = family;
  normalized.validate_and_normalize(3);
  auto xi = mixture(family, 3);

  // Enumerate every complete interleaved history up to 3 cycles.
  for (std::uint32_t m = 1; m <= 3; ++m) {
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << (2 * m)); ++code) {
      std::vector<std::uint32_t> ys, xs;
      for (std::uint32_t k = 0; k < m; ++k) {
        ys.push_back((code >> (2 * k)) & 1);
        xs.push_back((code >> (2 * k + 1)) & 1);
      }
      Rat mixed = xi->history_probability(ys, xs);
      for (std::size_t i = 0; i < normalized.environments.size(); ++i) {
        Rat member = normalized.environments[i]->history_probability(ys, xs);
        CHECK(mixed >= normalized.weights[i] * member);
      }
    }
  }
}

TEST_CASE("mixture policy pins") {
  // Singleton family: the mixture policy is that environment's optimum.
  WeightedFamily solo;
  solo.environments = {echo_environment()};
  solo.weights = {Rat(1)};
  TablePolicy p1 = aixi_policy(solo, 2);
  auto echo = echo_environment();
  TablePolicy direct = optimal_policy(*echo, 2);
  // The two solvers agree on every reachable history and in value. (They may
  // tie-break differently on zero-probability histories, where the mixture's
  // conditionals are identically 0.)
  CHECK(p1.action({}) == direct.action({}));
  CHECK(p1.action({1}) == direct.action({1}));
  CHECK(value(p1, *echo, 2) == value(direct, *echo, 2));
  CHECK(value(p1, *echo, 2) == Rat(2));

  // Equal-weight {echo, anti}: symmetric first cycle, tie toward action 0,
  // then the revealed member is played optimally.
  TablePolicy p2 = aixi_policy(echo_anti(), 2);
  CHECK(p2.action({}) == 0);
  CHECK(p2.action({0}) == 1);  // x1=0 reveals echo
  CHECK(p2.action({1}) == 0);  // x1=1 reveals anti
  auto xi2 = mixture(echo_anti(), 2);
  CHECK(value(p2, *xi2, 2) == Rat(3, 2));

  TablePolicy p_one = aixi_policy(echo_anti(), 1);
  CHECK(p_one.action({}) == 0);
}

TEST_CASE("mixture policy dominates every policy against the mixture") {
  for (std::uint32_t m = 1; m <= 3; ++m) {
    auto xi = mixture(echo_anti(), m);
    TablePolicy star = aixi_policy(echo_anti(), m);
    Rat star_value = value(star, *xi, m);
    for (const auto& p : all_policies(m)) {
      CHECK(star_value >= value(p, *xi, m));
    }
  }
}

TEST_CASE("per-member value gap stays bounded by one identification cycle") {
  auto echo = echo_environment();
  auto anti = anti_environment();
  for (std::uint32_t m = 1; m <= 6; ++m) {
    TablePolicy p = aixi_policy(echo_anti(), m);
    Rat gap_echo = optimal_value(*echo, m) - value(p, *echo, m);
    Rat gap_anti = optimal_value(*anti, m) - value(p, *anti, m);
    // The first cycle probes with action 0: a full loss against echo, free
    // against anti. After it the member is identified and played perfectly.
    CHECK(gap_echo == Rat(1));
    CHECK(gap_anti == Rat(0));
  }
}

TEST_CASE("universality sweep over the deterministic pair") {
  WeightedFamily family = echo_anti();
  std::vector<Rat> taus = {Rat(0), Rat(1, 2), Rat(1)};
  auto rows = universality_experiment(family, taus, 1, 4);
  REQUIRE(rows.size() == 6);  // env-major, tau-minor

  const UniversalityRow& echo_free = rows[0];
  CHECK(echo_free.env_name == "echo");
  CHECK(echo_free.tau == Rat(0));
  REQUIRE(echo_free.first_interacting_m.has_value());
  CHECK(*echo_free.first_interacting_m == 1);
  CHECK(echo_free.per_m.at(1).witness->str() == "00");

  const UniversalityRow& echo_half = rows[1];
  CHECK(echo_half.tau == Rat(1, 2));
  CHECK_FALSE(echo_half.per_m.at(1).interacts);
  CHECK(echo_half.per_m.at(2).interacts);
  CHECK(echo_half.per_m.at(2).witness->str() == "0011");
  REQUIRE(echo_half.first_interacting_m.has_value());
  CHECK(*echo_half.first_interacting_m == 2);

  const UniversalityRow& echo_full = rows[2];
  CHECK(echo_full.tau == Rat(1));
  for (std::uint32_t m = 1; m <= 4; ++m) {
    CHECK(echo_full.per_m.at(m).defined);
    CHECK_FALSE(echo_full.per_m.at(m).interacts);
  }
  CHECK_FALSE(echo_full.first_interacting_m.has_value());

  const UniversalityRow& anti_full = rows[5];
  CHECK(anti_full.env_name == "anti");
  CHECK(anti_full.tau == Rat(1));
  CHECK(*anti_full.first_interacting_m == 1);
  CHECK(anti_full.per_m.at(1).witness->str() == "01");
  CHECK(anti_full.per_m.at(3).witness->str() == "010101");

  // Cross-check every entry against the cybernetic-facing probe.
  for (const auto& row : rows) {
    auto nu = row.env_name == "echo" ? echo_environment() : anti_environment();
    for (const auto& [m, entry] : row.per_m) {
      TablePolicy p = aixi_policy(family, m);
      auto probe = interacts_at(p, *nu, m, row.tau, EnvSetVariant::D);
      CHECK(entry.interacts == probe.interacts);
      if (entry.interacts) {
        CHECK(entry.witness->str() == probe.witness->str());
      }
    }
  }
}

TEST_CASE("universality marks zero-value environments undefined") {
  WeightedFamily family;
  family.environments = {dull_environment()};
  family.weights = {Rat(1)};
  auto rows = universality_experiment(family, {Rat(1, 2)}, 1, 3);
  REQUIRE(rows.size() == 1);
  for (std::uint32_t m = 1; m <= 3; ++m) {
    CHECK_FALSE(rows[0].per_m.at(m).defined);
    CHECK_FALSE(rows[0].per_m.at(m).interacts);
  }
  CHECK_FALSE(rows[0].first_interacting_m.has_value());
}

TEST_CASE("family and horizon errors") {
  WeightedFamily family = echo_anti();
  CHECK_THROWS_AS(universality_experiment(family, {Rat(1, 2)}, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(universality_experiment(family, {Rat(1, 2)}, 3, 2), std::invalid_argument);
  CHECK_THROWS_AS(aixi_policy(family, 0), std::invalid_argument);
  CHECK_THROWS_AS(aixi_policy(family, 7), ScaleLimitError);

  // Mixing alphabets is rejected up front.
  auto wide = std::make_shared<TableEnvironment>("wide", Alphabet{2, 4}, Alphabet{1, 2},
                                                 std::vector<std::uint64_t>{0, 1}, 1, 2);
  WeightedFamily mixed;
  mixed.environments = {echo_environment(), wide};
  mixed.weights = {Rat(1), Rat(1)};
  CHECK_THROWS_AS(mixed.validate_and_normalize(2), std::invalid_argument);
}
