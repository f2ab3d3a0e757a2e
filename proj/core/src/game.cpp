#include "islab/game.hpp"

#include <stdexcept>
#include <string>

#include "islab/encoding.hpp"
#include "islab/errors.hpp"

namespace islab {

void GameCodec::validate() const {
  if (symbol_bits == 0 || symbol_bits > 8) {
    throw SchemaError("move field width must be between 1 and 8 bits");
  }
  if (plies == 0) throw SchemaError("a game needs at least one round");
  if (alphabet < 2 || (symbol_bits < 32 && alphabet > (1u << symbol_bits))) {
    throw SchemaError("alphabet size must be between 2 and 2^symbol_bits");
  }
  if (n() > 24) throw ScaleLimitError("coded games limited to 24 bits");
}

BitString GameCodec::encode(const std::vector<std::uint32_t>& moves) const {
  validate();
  if (moves.size() != 2 * plies) {
    throw std::invalid_argument("expected " + std::to_string(2 * plies) + " moves, got " +
                                std::to_string(moves.size()));
  }
  BitString out;
  for (auto m : moves) {
    if (m >= alphabet) throw std::invalid_argument("move value out of range: " + std::to_string(m));
    out.append(BitString::from_uint(m, symbol_bits));
  }
  return out;
}

std::vector<std::uint32_t> GameCodec::decode(const BitString& coded) const {
  validate();
  if (coded.size() != n()) {
    throw std::invalid_argument("coded game has wrong length " + std::to_string(coded.size()));
  }
  std::vector<std::uint32_t> moves;
  for (std::uint32_t i = 0; i < 2 * plies; ++i) {
    auto field = coded.slice(i * symbol_bits, symbol_bits);
    std::uint64_t v = field.to_uint();
    if (v >= alphabet) throw std::invalid_argument("coded move out of alphabet range");
    moves.push_back(static_cast<std::uint32_t>(v));
  }
  return moves;
}

namespace {

void expand(const GameCodec& codec, const NondetStrategy& s, std::vector<std::uint32_t>& history,
            Player& out) {
  if (history.size() == 2 * codec.plies) {
    out.insert(codec.encode(history));
    return;
  }
  bool owners_turn = (history.size() % 2 == 0) == (s.side == NondetStrategy::Side::First);
  if (owners_turn) {
    auto allowed = s.choices(history);
    if (allowed.empty()) {
      throw std::invalid_argument("strategy allows no move after " +
                                  std::to_string(history.size()) + " plies");
    }
    for (auto m : allowed) {
      if (m >= codec.alphabet) {
        throw std::invalid_argument("strategy move out of alphabet range: " + std::to_string(m));
      }
      history.push_back(m);
      expand(codec, s, history, out);
      history.pop_back();
    }
  } else {
    for (std::uint32_t m = 0; m < codec.alphabet; ++m) {
      history.push_back(m);
      expand(codec, s, history, out);
      history.pop_back();
    }
  }
}

}  // namespace

Player strategy_player(const GameCodec& codec, const NondetStrategy& s) {
  codec.validate();
  Player out(codec.n());
  std::vector<std::uint32_t> history;
  expand(codec, s, history, out);
  return out;
}

void NormalFormGame::validate() const {
  if (action_bits == 0 || action_bits > 4) {
    throw SchemaError("normal-form action width must be between 1 and 4 bits");
  }
  std::size_t k = std::size_t{1} << action_bits;
  auto check = [&](const std::vector<std::vector<Rat>>& table, const char* who) {
    if (table.size() != k) throw SchemaError(std::string(who) + " payoff table has wrong row count");
    for (const auto& row : table) {
      if (row.size() != k) throw SchemaError(std::string(who) + " payoff table has wrong row width");
      for (const auto& v : row) {
        if (v < Rat(0) || v > Rat(1)) throw SchemaError(std::string(who) + " payoff out of [0,1]");
      }
    }
  };
  check(row_payoff, "row");
  check(column_payoff, "column");
}

std::pair<Player, Player> nash_players(const NormalFormGame& g) {
  g.validate();
  std::size_t k = std::size_t{1} << g.action_bits;
  // Paired actions all code to the same length, so probe once.
  BitString probe = encode_pair(BitString::from_uint(0, g.action_bits),
                                BitString::from_uint(0, g.action_bits));
  Player a(static_cast<std::uint32_t>(probe.size()));
  Player b(static_cast<std::uint32_t>(probe.size()));
  for (std::size_t x = 0; x < k; ++x) {
    for (std::size_t y = 0; y < k; ++y) {
      BitString code = encode_pair(BitString::from_uint(x, g.action_bits),
                                   BitString::from_uint(y, g.action_bits));
      if (g.row_payoff[x][y] == Rat(1)) a.insert(code);
      if (g.column_payoff[y][x] == Rat(1)) b.insert(code);
    }
  }
  return {a, b};
}

namespace {
constexpr std::uint32_t kRock = 0;
constexpr std::uint32_t kPaper = 1;
}  // namespace

GameCodec rps_codec() { return GameCodec{2, 3, 2}; }

Player rps_alpha() {
  NondetStrategy s;
  s.side = NondetStrategy::Side::First;
  s.choices = [](const std::vector<std::uint32_t>&) { return std::vector<std::uint32_t>{kRock}; };
  return strategy_player(rps_codec(), s);
}

Player rps_beta() {
  NondetStrategy s;
  s.side = NondetStrategy::Side::Second;
  s.choices = [](const std::vector<std::uint32_t>& history) {
    if (history.size() == 1) return std::vector<std::uint32_t>{kPaper};
    return std::vector<std::uint32_t>{history[0]};  // copy the opener
  };
  return strategy_player(rps_codec(), s);
}

BitString rps_interaction() {
  return rps_codec().encode({kRock, kPaper, kRock, kRock});
}

}  // namespace islab
