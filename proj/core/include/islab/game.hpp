#ifndef ISLAB_GAME_HPP
#define ISLAB_GAME_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "islab/bitstring.hpp"
#include "islab/player.hpp"
#include "islab/rational.hpp"

namespace islab {

/// Fixed-width binary coding of alternating two-player move sequences.
/// A full game of `plies` rounds is the interleaving a1 b1 a2 b2 ... and
/// codes to 2*plies*symbol_bits bits, each move as a big-endian field.
struct GameCodec {
  std::uint32_t symbol_bits = 1;  // width of one move field
  std::uint32_t alphabet = 2;     // legal move values are 0..alphabet-1
  std::uint32_t plies = 1;        // rounds (moves per side)

  std::uint32_t n() const { return 2 * plies * symbol_bits; }
  void validate() const;

  /// moves.size() must be 2*plies, every value < alphabet.
  BitString encode(const std::vector<std::uint32_t>& moves) const;
  std::vector<std::uint32_t> decode(const BitString& coded) const;
};

/// One side's nondeterministic strategy: at each of its plies it allows a
/// nonempty set of moves, chosen from the full interleaved history so far
/// (both sides' moves, oldest first).
struct NondetStrategy {
  enum class Side { First, Second };
  Side side = Side::First;
  std::function<std::vector<std::uint32_t>(const std::vector<std::uint32_t>&)> choices;
};

/// The player of all complete games consistent with `s`: the owner's move at
/// each owned ply lies in choices(history), the opponent's moves range over
/// the whole alphabet. Throws std::invalid_argument if choices yields an
/// empty set or an out-of-range move.
Player strategy_player(const GameCodec& codec, const NondetStrategy& s);

/// One-shot simultaneous game with exact payoffs in [0,1] for each side.
/// Actions are n-bit strings; payoff tables are indexed [row action][column
/// action] by numeric value.
struct NormalFormGame {
  std::uint32_t action_bits = 1;
  std::vector<std::vector<Rat>> row_payoff;     // p(x, y)
  std::vector<std::vector<Rat>> column_payoff;  // q(y, x): q's own action first

  void validate() const;
};

/// The best-response players A = { <x,y> : p(x,y) = 1 } and
/// B = { <x,y> : q(y,x) = 1 } over paired action codes. Their intersection
/// is exactly the pure Nash equilibria of the game.
std::pair<Player, Player> nash_players(const NormalFormGame& g);

/// Rock-paper-scissors over two rounds, moves coded in 2 bits
/// (rock=00, paper=01, scissors=10).
GameCodec rps_codec();
/// "Always rock" as the first mover.
Player rps_alpha();
/// "Paper first, then copy the opponent's first move" as the second mover.
Player rps_beta();
/// The single interaction of those two: (rock,paper)(rock,rock).
BitString rps_interaction();

}  // namespace islab

#endif  // ISLAB_GAME_HPP
