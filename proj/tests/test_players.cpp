// Players (both backends), the sequential-game codec, strategy sets, and the
// pure-Nash construction against a brute-force enumerator.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "islab/encoding.hpp"
#include "islab/errors.hpp"
#include "islab/game.hpp"
#include "islab/player.hpp"

using namespace islab;

namespace {

Player random_player(std::mt19937& rng, std::uint32_t n, Player::Backend backend,
                     double density = 0.4) {
  Player p(n, backend);
  std::uint64_t universe = std::uint64_t{1} << n;
  for (std::uint64_t v = 0; v < universe; ++v) {
    if (std::uniform_real_distribution<>(0, 1)(rng) < density) {
      p.insert(BitString::from_uint(v, n));
    }
  }
  return p;
}

}  // namespace

TEST_CASE("player basics") {
  Player p(3);
  CHECK(p.n() == 3);
  CHECK(p.empty());
  p.insert("101"_bits);
  p.insert("001"_bits);
  p.insert("101"_bits);  // duplicate is a no-op
  CHECK(p.size() == 2);
  CHECK(p.contains("101"_bits));
  CHECK_FALSE(p.contains("111"_bits));
  auto members = p.members();
  REQUIRE(members.size() == 2);
  CHECK(members[0].str() == "001");  // canonical numeric order
  CHECK(members[1].str() == "101");
  CHECK(capacity(p) == 2);

  CHECK_THROWS_AS(p.insert("01"_bits), std::invalid_argument);  // wrong width

  Player zero(0);
  CHECK(zero.empty());
  zero.insert({});
  CHECK(zero.size() == 1);
  CHECK(zero.contains(BitString()));
}

TEST_CASE("full player and from_members") {
  Player full4 = Player::full(4);
  CHECK(full4.size() == 16);
  CHECK(capacity(full4) == 16);
  CHECK(capacity(Player(5)) == 0);

  Player q = Player::from_members(2, {"10"_bits, "01"_bits, "10"_bits});
  CHECK(q.size() == 2);
}

TEST_CASE("backends agree on randomized inputs") {
  std::mt19937 rng(51);
  for (int trial = 0; trial < 30; ++trial) {
    std::uint32_t n = 1 + rng() % 10;
    Player dense(n, Player::Backend::Dense);
    Player sorted(n, Player::Backend::Sorted);
    std::set<std::uint64_t> reference;
    for (int inserts = 0; inserts < 40; ++inserts) {
      std::uint64_t v = rng() & ((std::uint64_t{1} << n) - 1);
      BitString x = BitString::from_uint(v, n);
      dense.insert(x);
      sorted.insert(x);
      reference.insert(v);
    }
    CHECK(dense.size() == reference.size());
    CHECK(sorted.size() == reference.size());
    CHECK(dense == sorted);
    CHECK(dense.members() == sorted.members());
    CHECK(dense.encoding() == sorted.encoding());
    for (std::uint64_t v : reference) {
      CHECK(dense.contains(BitString::from_uint(v, n)));
      CHECK(sorted.contains(BitString::from_uint(v, n)));
    }
  }
}

TEST_CASE("intersection algebra on random players") {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 25; ++trial) {
    std::uint32_t n = 1 + rng() % 8;
    Player a = random_player(rng, n, Player::Backend::Dense);
    Player b = random_player(rng, n, Player::Backend::Sorted);
    Player c = random_player(rng, n, Player::Backend::Auto);

    Player ab = intersect(a, b);
    CHECK(ab == intersect(b, a));                                // commutative
    CHECK(intersect(intersect(a, b), c) == intersect(a, intersect(b, c)));
    CHECK(intersect(a, a) == a);                                 // idempotent
    CHECK(ab.size() <= std::min(a.size(), b.size()));
    for (const auto& m : ab.members()) {
      CHECK(a.contains(m));
      CHECK(b.contains(m));
    }
    CHECK(interacts(a, b) == !ab.empty());
  }
  CHECK_THROWS_AS(intersect(Player(2), Player(3)), std::invalid_argument);
}

TEST_CASE("player encoding is the canonical set listing") {
  Player p(1);
  p.insert("1"_bits);
  p.insert("0"_bits);
  CHECK(p.encoding().str() == "10101");
  CHECK(Player(4).encoding().size() == 0);  // empty set -> eps
  Player single(2);
  single.insert("01"_bits);
  CHECK(single.encoding() == "01"_bits);

  // Encoding matches encode_set over the member list, always.
  std::mt19937 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    Player r = random_player(rng, 1 + rng() % 6, Player::Backend::Auto);
    CHECK(r.encoding() == encode_set(r.members()));
  }
}

TEST_CASE("player text round-trip") {
  Player p(3);
  p.insert("110"_bits);
  p.insert("001"_bits);
  std::string text = p.to_text();
  CHECK(text == "n=3\n001\n110\n");
  Player back = Player::from_text(text);
  CHECK(back == p);
  CHECK(Player::from_text("n=2\n").empty());

  CHECK_THROWS_AS(Player::from_text("bogus"), SchemaError);
  CHECK_THROWS_AS(Player::from_text("n=2\n0\n"), SchemaError);     // wrong width
  CHECK_THROWS_AS(Player::from_text("n=2\n0x\n"), SchemaError);    // bad chars
}

TEST_CASE("game codec round-trips move sequences") {
  GameCodec codec{2, 3, 2};  // 2-bit symbols, alphabet 3, 2 plies each side
  CHECK(codec.n() == 8);
  BitString coded = codec.encode({0, 1, 0, 0});
  CHECK(coded.str() == "00010000");
  CHECK(codec.decode(coded) == std::vector<std::uint32_t>{0, 1, 0, 0});
  CHECK_THROWS_AS(codec.encode({0, 3, 0, 0}), std::invalid_argument);  // symbol 3 out of alphabet
  GameCodec bad{0, 2, 1};
  CHECK_THROWS_AS(bad.validate(), SchemaError);
}

TEST_CASE("rock-only alpha against paper-then-copy beta") {
  Player a = rps_alpha();
  Player b = rps_beta();
  CHECK(a.n() == 8);
  CHECK(capacity(a) == 9);
  CHECK(capacity(b) == 9);
  Player shared = intersect(a, b);
  CHECK(shared.size() == 1);
  CHECK(shared.members().front() == rps_interaction());
  CHECK(rps_interaction().str() == "00010000");

  // Alpha's members all open with rock and play rock again at ply 3.
  for (const auto& m : a.members()) {
    auto moves = rps_codec().decode(m);
    CHECK(moves[0] == 0);
    CHECK(moves[2] == 0);
  }
  // Beta answers paper first, then copies the opener.
  for (const auto& m : b.members()) {
    auto moves = rps_codec().decode(m);
    CHECK(moves[1] == 1);
    CHECK(moves[3] == moves[0]);
  }
}

TEST_CASE("unrestricted strategies span the full game space") {
  GameCodec codec{2, 3, 2};
  NondetStrategy any;
  any.side = NondetStrategy::Side::First;
  any.choices = [](const std::vector<std::uint32_t>&) {
    return std::vector<std::uint32_t>{0, 1, 2};
  };
  CHECK(strategy_player(codec, any).size() == 81);

  NondetStrategy stuck;
  stuck.side = NondetStrategy::Side::First;
  stuck.choices = [](const std::vector<std::uint32_t>&) {
    return std::vector<std::uint32_t>{};
  };
  CHECK_THROWS_AS(strategy_player(codec, stuck), std::invalid_argument);
}

TEST_CASE("nash fixed examples") {
  // 1-bit coordination: p = q = 1 iff x == y.
  NormalFormGame coord;
  coord.action_bits = 1;
  coord.row_payoff = {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}};
  coord.column_payoff = {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}};
  auto [a, b] = nash_players(coord);
  Player nash = intersect(a, b);
  CHECK(nash.size() == 2);
  auto members = nash.members();
  CHECK(members[0].str() == "10100");
  CHECK(members[1].str() == "10111");

  // Matching pennies: no pure equilibrium.
  NormalFormGame pennies;
  pennies.action_bits = 1;
  pennies.row_payoff = {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}};
  pennies.column_payoff = {{Rat(0), Rat(1)}, {Rat(1), Rat(0)}};
  auto [pa, pb] = nash_players(pennies);
  CHECK(intersect(pa, pb).empty());

  // All-ones payoffs: every profile is an equilibrium.
  NormalFormGame ones;
  ones.action_bits = 1;
  ones.row_payoff = {{Rat(1), Rat(1)}, {Rat(1), Rat(1)}};
  ones.column_payoff = {{Rat(1), Rat(1)}, {Rat(1), Rat(1)}};
  auto [oa, ob] = nash_players(ones);
  CHECK(intersect(oa, ob).size() == 4);
}

TEST_CASE("nash construction equals brute force on random games") {
  // Raw tables are drawn from a small payoff pool, then normalized to the
  // best-response form the construction expects: an entry becomes 1 exactly
  // when it maximizes its column (row for q). The brute force runs on the
  // raw tables; the construction must land on the same equilibrium set.
  std::mt19937 rng(2024);
  std::vector<Rat> pool = {Rat(0), Rat(1, 4), Rat(1, 2), Rat(3, 4), Rat(1)};

  for (int trial = 0; trial < 100; ++trial) {
    std::uint32_t bits = (trial % 2) + 1;  // 50 one-bit, 50 two-bit games
    std::size_t k = std::size_t{1} << bits;

    std::vector<std::vector<Rat>> p(k, std::vector<Rat>(k));
    std::vector<std::vector<Rat>> q(k, std::vector<Rat>(k));
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        p[i][j] = pool[rng() % pool.size()];
        q[i][j] = pool[rng() % pool.size()];
      }
    }

    NormalFormGame game;
    game.action_bits = bits;
    game.row_payoff = p;
    game.column_payoff = q;
    for (std::size_t y = 0; y < k; ++y) {
      Rat best;
      for (std::size_t x = 0; x < k; ++x) best = std::max(best, p[x][y]);
      for (std::size_t x = 0; x < k; ++x) {
        game.row_payoff[x][y] = (p[x][y] == best) ? Rat(1) : p[x][y];
      }
    }
    for (std::size_t x = 0; x < k; ++x) {
      Rat best;
      for (std::size_t y = 0; y < k; ++y) best = std::max(best, q[y][x]);
      for (std::size_t y = 0; y < k; ++y) {
        game.column_payoff[y][x] = (q[y][x] == best) ? Rat(1) : q[y][x];
      }
    }

    auto [a, b] = nash_players(game);
    Player found = intersect(a, b);

    std::set<std::string> expect;
    for (std::size_t x = 0; x < k; ++x) {
      for (std::size_t y = 0; y < k; ++y) {
        bool row_best = true, col_best = true;
        for (std::size_t x2 = 0; x2 < k; ++x2) row_best &= p[x][y] >= p[x2][y];
        for (std::size_t y2 = 0; y2 < k; ++y2) col_best &= q[y][x] >= q[y2][x];
        if (row_best && col_best) {
          expect.insert(encode_pair(BitString::from_uint(x, bits),
                                    BitString::from_uint(y, bits))
                            .str());
        }
      }
    }

    std::set<std::string> got;
    for (const auto& m : found.members()) got.insert(m.str());
    REQUIRE(got == expect);
  }
}

TEST_CASE("payoffs outside [0,1] are rejected") {
  NormalFormGame game;
  game.action_bits = 1;
  game.row_payoff = {{Rat(2), Rat(0)}, {Rat(0), Rat(1)}};
  game.column_payoff = {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}};
  CHECK_THROWS_AS(nash_players(game), SchemaError);
}
