#ifndef ISLAB_MACHINE_HPP
#define ISLAB_MACHINE_HPP

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "islab/bitstring.hpp"

namespace islab {

/// Version tag of the reference machine. Embedded in every cache key and
/// report; any change to the opcode semantics below must bump it.
inline constexpr std::string_view kMachineVersion = "ISLAB-M1";

/// The reference machine interprets a bit string as consecutive 3-bit
/// opcodes over a binary tape that is unbounded in both directions,
/// all-zero initially, with the head at the origin:
///
///   000  >   move head right
///   001  <   move head left
///   010  ~   flip the current cell
///   011  [   if cell = 0, jump just past the matching ]
///   100  ]   if cell = 1, jump just after the matching [
///   101  .   append the current cell to the output
///   110  ,   read the next aux bit into the cell (0 once aux is exhausted)
///   111      HALT
///
/// One executed opcode is one step. A fetch with fewer than 3 program bits
/// remaining is a failure, not a halt; only HALT produces a halted outcome.
/// A program whose complete opcodes have unbalanced brackets is statically
/// invalid and fails without executing.
enum class Opcode : std::uint8_t {
  Right = 0,
  Left = 1,
  Flip = 2,
  LoopOpen = 3,
  LoopClose = 4,
  Print = 5,
  Read = 6,
  Halt = 7,
};

enum class RunKind { Halted, Failed, OutOfBudget };

struct RunOutcome {
  RunKind kind = RunKind::Failed;
  BitString output;           // bits emitted before termination, in order
  std::uint64_t steps = 0;    // executed opcodes
  // print_steps[i] is the step at which the output buffer first had length
  // i+1; strictly increasing by construction.
  std::vector<std::uint64_t> print_steps;

  bool halted() const { return kind == RunKind::Halted; }

  /// Step at which the output buffer first had exactly `len` bits, or
  /// nullopt if it never did. Length 0 is reached at step 0.
  std::optional<std::uint64_t> step_for_prefix(std::size_t len) const {
    if (len == 0) return 0;
    if (len > print_steps.size()) return std::nullopt;
    return print_steps[len - 1];
  }
};

/// Static program analysis: opcode decoding and bracket matching.
struct ProgramInfo {
  std::vector<std::uint8_t> opcodes;  // values 0..7, complete opcodes only
  std::vector<std::uint32_t> jump;    // per opcode: matched bracket, else 0
  bool valid = false;                 // brackets balanced
};

ProgramInfo analyze_program(const BitString& program);

/// True iff the complete 3-bit opcodes of `program` have balanced brackets.
bool program_valid(const BitString& program);

/// Runs `program` on the reference machine with auxiliary input `aux` and a
/// step budget. Deterministic; all abnormal executions are reported through
/// RunOutcome::kind.
RunOutcome run(const BitString& program, const BitString& aux,
               std::uint64_t max_steps);

/// Fast path for program-space enumeration: the program is the `len` low
/// bits of `packed`, MSB first. Behaves exactly like run() on the
/// equivalent BitString.
RunOutcome run_packed(std::uint64_t packed, std::uint32_t len,
                      const BitString& aux, std::uint64_t max_steps);

}  // namespace islab

#endif  // ISLAB_MACHINE_HPP
