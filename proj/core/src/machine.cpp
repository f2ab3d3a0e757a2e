#include "islab/machine.hpp"

namespace islab {
namespace {

// Bracket matching over decoded opcodes. Fills info.jump and info.valid.
void match_brackets(ProgramInfo& info) {
  info.jump.assign(info.opcodes.size(), 0);
  std::vector<std::uint32_t> stack;
  for (std::uint32_t i = 0; i < info.opcodes.size(); ++i) {
    if (info.opcodes[i] == static_cast<std::uint8_t>(Opcode::LoopOpen)) {
      stack.push_back(i);
    } else if (info.opcodes[i] == static_cast<std::uint8_t>(Opcode::LoopClose)) {
      if (stack.empty()) {
        info.valid = false;
        return;
      }
      std::uint32_t open = stack.back();
      stack.pop_back();
      info.jump[open] = i;
      info.jump[i] = open;
    }
  }
  info.valid = stack.empty();
}

struct Tape {
  std::vector<std::uint8_t> right{0};  // cells 0, 1, 2, ...
  std::vector<std::uint8_t> left;      // cells -1, -2, ...
  std::int64_t head = 0;

  std::uint8_t& cell() {
    if (head >= 0) {
      auto idx = static_cast<std::size_t>(head);
      if (idx >= right.size()) right.resize(idx + 1, 0);
      return right[idx];
    }
    auto idx = static_cast<std::size_t>(-head - 1);
    if (idx >= left.size()) left.resize(idx + 1, 0);
    return left[idx];
  }
};

RunOutcome execute(const ProgramInfo& info, const BitString& aux,
                   std::uint64_t max_steps) {
  RunOutcome out;
  if (!info.valid) {
    out.kind = RunKind::Failed;  // statically invalid: no execution
    return out;
  }
  Tape tape;
  std::size_t aux_pos = 0;
  std::uint32_t pc = 0;
  std::uint64_t steps = 0;
  const auto n = static_cast<std::uint32_t>(info.opcodes.size());

  while (true) {
    if (pc >= n) {
      // Fetch with fewer than 3 bits remaining: definitively failed, even
      // when it coincides with budget exhaustion — more budget cannot help.
      out.kind = RunKind::Failed;
      out.steps = steps;
      return out;
    }
    if (steps >= max_steps) break;
    const auto op = static_cast<Opcode>(info.opcodes[pc]);
    ++steps;
    switch (op) {
      case Opcode::Right:
        ++tape.head;
        ++pc;
        break;
      case Opcode::Left:
        --tape.head;
        ++pc;
        break;
      case Opcode::Flip:
        tape.cell() ^= 1;
        ++pc;
        break;
      case Opcode::LoopOpen:
        pc = tape.cell() == 0 ? info.jump[pc] + 1 : pc + 1;
        break;
      case Opcode::LoopClose:
        pc = tape.cell() == 1 ? info.jump[pc] + 1 : pc + 1;
        break;
      case Opcode::Print:
        out.output.push_back(tape.cell());
        out.print_steps.push_back(steps);
        ++pc;
        break;
      case Opcode::Read:
        tape.cell() = aux_pos < aux.size()
                          ? static_cast<std::uint8_t>(aux.bit(aux_pos++))
                          : 0;
        ++pc;
        break;
      case Opcode::Halt:
        out.kind = RunKind::Halted;
        out.steps = steps;
        return out;
    }
  }
  out.kind = RunKind::OutOfBudget;
  out.steps = steps;
  return out;
}

}  // namespace

ProgramInfo analyze_program(const BitString& program) {
  ProgramInfo info;
  const std::size_t n_ops = program.size() / 3;
  info.opcodes.reserve(n_ops);
  for (std::size_t i = 0; i < n_ops; ++i) {
    std::uint8_t op = static_cast<std::uint8_t>(
        (program.bit(3 * i) << 2) | (program.bit(3 * i + 1) << 1) |
        program.bit(3 * i + 2));
    info.opcodes.push_back(op);
  }
  match_brackets(info);
  return info;
}

bool program_valid(const BitString& program) {
  return analyze_program(program).valid;
}

RunOutcome run(const BitString& program, const BitString& aux,
               std::uint64_t max_steps) {
  return execute(analyze_program(program), aux, max_steps);
}

RunOutcome run_packed(std::uint64_t packed, std::uint32_t len,
                      const BitString& aux, std::uint64_t max_steps) {
  ProgramInfo info;
  const std::uint32_t n_ops = len / 3;
  info.opcodes.reserve(n_ops);
  for (std::uint32_t i = 0; i < n_ops; ++i) {
    // opcode i occupies bits [len-3i-3, len-3i) counted from the LSB
    info.opcodes.push_back(
        static_cast<std::uint8_t>((packed >> (len - 3 * i - 3)) & 7u));
  }
  match_brackets(info);
  return execute(info, aux, max_steps);
}

}  // namespace islab
