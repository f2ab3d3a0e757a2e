// Reference machine semantics and the prefix-free encoders, cross-checked
// against the independent interpreter in support/oracle.hpp.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <string>
#include <vector>

#include "islab/encoding.hpp"
#include "islab/machine.hpp"
#include "support/oracle.hpp"

using namespace islab;

namespace {

std::string bits_of(const BitString& b) { return b.str(); }

}  // namespace

TEST_CASE("halt is the only way to halt") {
  auto out = run("111"_bits, {}, 100);
  CHECK(out.kind == RunKind::Halted);
  CHECK(out.steps == 1);
  CHECK(out.output.size() == 0);

  // Empty program: immediate fetch failure.
  out = run({}, {}, 100);
  CHECK(out.kind == RunKind::Failed);
  CHECK(out.steps == 0);

  // Running off the end of complete opcodes fails too.
  out = run("000"_bits, {}, 100);
  CHECK(out.kind == RunKind::Failed);
  CHECK(out.steps == 1);
}

TEST_CASE("incomplete trailing opcode is a fetch failure") {
  // Two complete opcodes then a 2-bit tail: executes both, then fails.
  auto out = run("00000011"_bits, {}, 100);
  CHECK(out.kind == RunKind::Failed);
  CHECK(out.steps == 2);

  // One- and two-bit programs never execute anything.
  CHECK(run("1"_bits, {}, 100).kind == RunKind::Failed);
  CHECK(run("11"_bits, {}, 100).kind == RunKind::Failed);
}

TEST_CASE("fetch failure outranks budget exhaustion") {
  // A single '>' with budget 1: the opcode executes (spending the budget),
  // then the next fetch fails. Failure, not out-of-budget.
  auto out = run("000"_bits, {}, 1);
  CHECK(out.kind == RunKind::Failed);
  CHECK(out.steps == 1);
}

TEST_CASE("print and flip") {
  // ~ . HALT prints the flipped origin cell.
  auto out = run("010101111"_bits, {}, 100);
  CHECK(out.kind == RunKind::Halted);
  CHECK(bits_of(out.output) == "1");
  CHECK(out.print_steps == std::vector<std::uint64_t>{2});

  // . HALT prints the zero-initialized cell.
  out = run("101111"_bits, {}, 100);
  CHECK(out.kind == RunKind::Halted);
  CHECK(bits_of(out.output) == "0");
}

TEST_CASE("aux reads feed the cell and default to 0 when exhausted") {
  // , . , . , . HALT against aux "10": reads 1, 0, then exhausted 0.
  auto out = run("110101110101110101111"_bits, "10"_bits, 100);
  CHECK(out.kind == RunKind::Halted);
  CHECK(bits_of(out.output) == "100");
}

TEST_CASE("brackets: static validation and jump semantics") {
  // Lone [ or ] is statically invalid: fails with zero steps.
  CHECK(run("011"_bits, {}, 100).kind == RunKind::Failed);
  CHECK(run("011"_bits, {}, 100).steps == 0);
  CHECK(run("100"_bits, {}, 100).kind == RunKind::Failed);
  CHECK(run("100111"_bits, {}, 100).steps == 0);
  CHECK_FALSE(program_valid("011111"_bits));
  CHECK(program_valid("011100111"_bits));
  // The incomplete tail is not part of the static check.
  CHECK(program_valid("01110011"_bits));

  // [ . ] over a zero cell: the loop body is skipped.
  auto out = run("011101100111"_bits, {}, 100);
  CHECK(out.kind == RunKind::Halted);
  CHECK(out.output.size() == 0);

  // ~ [ ~ ] ... : enters once, flips to 0, exits.
  out = run("010011010100111"_bits, {}, 100);
  CHECK(out.kind == RunKind::Halted);

  // ~ [ ] : cell stays 1, loops until the budget runs out.
  out = run("010011100111"_bits, {}, 50);
  CHECK(out.kind == RunKind::OutOfBudget);
  CHECK(out.steps == 50);
}

TEST_CASE("step_for_prefix indexes the print trace") {
  auto out = run("101101111"_bits, {}, 100);  // . . HALT
  REQUIRE(out.kind == RunKind::Halted);
  CHECK(out.step_for_prefix(0) == 0);
  CHECK(out.step_for_prefix(1) == 1);
  CHECK(out.step_for_prefix(2) == 2);
  CHECK_FALSE(out.step_for_prefix(3).has_value());
}

TEST_CASE("exhaustive agreement with the independent interpreter") {
  // Every program up to 12 bits, two aux strings, small budget. Status,
  // output, step counts, and print trace must all coincide.
  const std::vector<std::string> auxes = {"", "101"};
  for (unsigned len = 0; len <= 12; ++len) {
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
      std::string prog = oracle::nth_program(v, len);
      for (const auto& aux : auxes) {
        oracle::Outcome expect = oracle::interpret(prog, aux, 100);
        RunOutcome got = run(BitString::parse(prog), BitString::parse(aux), 100);
        RunKind want_kind = expect.status == oracle::Outcome::Halted ? RunKind::Halted
                            : expect.status == oracle::Outcome::Timeout
                                ? RunKind::OutOfBudget
                                : RunKind::Failed;
        REQUIRE(got.kind == want_kind);
        REQUIRE(got.output.str() == expect.output);
        REQUIRE(got.steps == expect.steps);
        REQUIRE(got.print_steps == expect.print_at);

        // The packed fast path is bit-for-bit the same machine.
        RunOutcome packed = run_packed(v, len, BitString::parse(aux), 100);
        REQUIRE(packed.kind == got.kind);
        REQUIRE(packed.output == got.output);
        REQUIRE(packed.steps == got.steps);
        REQUIRE(packed.print_steps == got.print_steps);
      }
    }
  }
}

TEST_CASE("pairing code fixed points") {
  CHECK(bits_of(encode_pair("1"_bits, "0"_bits)) == "10110");
  CHECK(bits_of(encode_pair({}, "101"_bits)) == "0101");
  CHECK(bits_of(encode_pair("01"_bits, "1"_bits)) == "11010011");
  CHECK(bits_of(encode_pair({}, {})) == "0");
}

TEST_CASE("pairing round-trips and matches the reference encoder") {
  std::vector<std::string> pool = {"", "0", "1", "01", "10", "111", "0110", "10101", "11111111"};
  for (const auto& xs : pool) {
    for (const auto& ys : pool) {
      BitString x = BitString::parse(xs);
      BitString y = BitString::parse(ys);
      BitString coded = encode_pair(x, y);
      CHECK(coded.str() == oracle::pair_code(xs, ys));
      auto [dx, dy] = decode_pair(coded);
      CHECK(dx == x);
      CHECK(dy == y);
    }
  }
}

TEST_CASE("pair decode rejects malformed input") {
  CHECK_THROWS_AS(decode_pair({}), std::invalid_argument);
  // All-ones: header never terminates.
  CHECK_THROWS_AS(decode_pair("111"_bits), std::invalid_argument);
  // Header promises more payload than exists.
  CHECK_THROWS_AS(decode_pair("101"_bits), std::invalid_argument);
}

TEST_CASE("set listing fixed points") {
  CHECK(bits_of(encode_set({"1"_bits, "0"_bits})) == "10101");
  CHECK(bits_of(encode_set({"10101"_bits, "0"_bits})) == "101010101");
  CHECK(bits_of(encode_set({"0"_bits, "10101"_bits})) == "101010101");  // order-free
  CHECK(bits_of(encode_set({"1"_bits})) == "1");  // singleton is bare
  CHECK(encode_set({}).size() == 0);
  CHECK(bits_of(encode_set({"0"_bits, "0"_bits})) == "0");  // dupes collapse
}

TEST_CASE("set listing matches the reference encoder on random pools") {
  std::vector<std::vector<std::string>> pools = {
      {"0", "1"},
      {"00", "01", "10"},
      {"1", "10", "100"},
      {"0101", "1010", "0000", "1111"},
      {"0", "1", "00", "01", "10", "11"},
  };
  for (const auto& pool : pools) {
    std::vector<BitString> members;
    for (const auto& s : pool) members.push_back(BitString::parse(s));
    CHECK(encode_set(members).str() == oracle::set_code(pool));
  }
}

TEST_CASE("binary numeral") {
  CHECK(binary_numeral(0).size() == 0);
  CHECK(bits_of(binary_numeral(1)) == "1");
  CHECK(bits_of(binary_numeral(2)) == "10");
  CHECK(bits_of(binary_numeral(5)) == "101");
  CHECK(bits_of(binary_numeral(12)) == "1100");
}
