// The bounded complexity engine against the independent enumerator, plus the
// result cache and the pluggable code-length models.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "islab/cache.hpp"
#include "islab/complexity.hpp"
#include "islab/encoding.hpp"
#include "islab/machine.hpp"
#include "islab/errors.hpp"
#include "islab/model.hpp"
#include "support/oracle.hpp"

using namespace islab;

namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const char* tag) {
  static std::mt19937_64 rng(std::random_device{}());
  fs::path p = fs::temp_directory_path() /
               ("islab-test-" + std::string(tag) + "-" + std::to_string(rng()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string file_text(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::trunc);
  out << text;
}

std::vector<BitString> all_targets_up_to(unsigned max_len) {
  std::vector<BitString> out;
  out.push_back({});
  for (unsigned len = 1; len <= max_len; ++len) {
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
      out.push_back(BitString::from_uint(v, len));
    }
  }
  return out;
}

}  // namespace

TEST_CASE("plain complexity pins") {
  ComplexityEngine engine;
  Budget b9{9, 100};

  auto empty = engine.plain({}, {}, b9);
  CHECK(empty.value == SymReal(3));
  CHECK(empty.exact);
  REQUIRE(empty.witness.has_value());
  CHECK(empty.witness->str() == "111");

  auto zero = engine.plain("0"_bits, {}, b9);
  CHECK(zero.value == SymReal(6));
  CHECK(zero.exact);
  CHECK(zero.witness->str() == "101111");

  auto one = engine.plain("1"_bits, {}, b9);
  CHECK(one.value == SymReal(9));
  CHECK(one.exact);
  CHECK(one.witness->str() == "010101111");

  // Too small a budget: provably nothing prints "0" in 3 bits.
  auto tight = engine.plain("0"_bits, {}, Budget{3, 100});
  CHECK(tight.value.kind() == SymReal::Kind::PosInf);
  CHECK(tight.exact);
  CHECK_FALSE(tight.found());
}

TEST_CASE("levin score pins") {
  ComplexityEngine engine;
  Budget b9{9, 100};

  // The empty output is ready at step 0: score 0 + log2(1) = 0.
  CHECK(engine.levin({}, {}, b9).value == SymReal(0));

  // "101" prints 0 at step 1: 3 + log2(1) = 3. No halt needed.
  auto zero = engine.levin("0"_bits, {}, b9);
  CHECK(zero.value == SymReal(3));
  REQUIRE(zero.witness.has_value());
  CHECK(zero.witness->str() == "101");
  CHECK(zero.witness_time == 1);

  // "010101" has 1 on the tape after step 1, prints at step 2: 6 + 1 = 7.
  auto one = engine.levin("1"_bits, {}, b9);
  CHECK(one.value == SymReal(7));
  CHECK(one.witness_time == 2);
}

TEST_CASE("mass pins") {
  ComplexityEngine engine;
  CHECK(engine.mass({}, Budget{3, 100}) == Rat(1, 8));
  CHECK(engine.mass("0"_bits, Budget{6, 100}) == Rat(1, 64));
  CHECK(engine.mass("1"_bits, Budget{9, 100}) == Rat(1, 512));
  CHECK(engine.mass({}, Budget{9, 100}) == Rat(255, 256));
  // Recounted by the full enumeration below: 34 of the 127 programs up to
  // 6 bits halt with empty output, weighted sum 17/32.
  CHECK(engine.mass({}, Budget{6, 100}) == Rat(17, 32));
  auto [num, den] = oracle::mass_search("", 6, 100);
  CHECK(Rat(num, den) == Rat(17, 32));
}

TEST_CASE("conditional complexity pins") {
  ComplexityEngine engine;
  Budget b{9, 200};
  // One context string: aux = that string's set listing = itself.
  auto c1 = engine.plain("0"_bits, {"10101"_bits}, b);
  CHECK(c1.value == SymReal(6));
  // Two context strings: aux = "101010101".
  auto c2 = engine.plain("0"_bits, {"10101"_bits, "0"_bits}, b);
  CHECK(c2.value == SymReal(6));
  // Context order and duplicates cannot matter.
  auto c3 = engine.plain("0"_bits, {"0"_bits, "10101"_bits, "0"_bits}, b);
  CHECK(c3.value == c2.value);
  CHECK(c3.witness == c2.witness);
  auto ce = engine.plain({}, {"10101"_bits}, b);
  CHECK(ce.value == SymReal(3));
}

TEST_CASE("engine agrees with the enumerator across targets and contexts") {
  ComplexityEngine engine;
  const Budget budget{8, 200};
  const std::vector<std::vector<BitString>> contexts = {
      {}, {"10101"_bits}, {"0"_bits, "1"_bits}};

  for (const auto& target : all_targets_up_to(2)) {
    for (const auto& ctx : contexts) {
      std::string aux = encode_set(ctx).str();
      std::string x = target.str();

      auto expect = oracle::plain_search(x, aux, budget.max_program_bits,
                                         budget.max_steps);
      auto got = engine.plain(target, ctx, budget);
      if (expect.found) {
        REQUIRE(got.value == SymReal(Rat(expect.len)));
        REQUIRE(got.witness.has_value());
        // Identical tie-break: first hit in (length, numeric) order.
        REQUIRE(got.witness->str() == expect.witness);
        REQUIRE(got.exact == !expect.shorter_timeout);
      } else {
        REQUIRE(got.value.kind() == SymReal::Kind::PosInf);
        REQUIRE(got.exact == !expect.shorter_timeout);
      }

      auto lev_expect = oracle::levin_search(x, aux, budget.max_program_bits,
                                             budget.max_steps);
      auto lev = engine.levin(target, ctx, budget);
      if (lev_expect.found) {
        SymReal want = SymReal(Rat(lev_expect.len)) +
                       SymReal::log2_of(std::max<std::uint64_t>(1, lev_expect.step));
        REQUIRE(lev.value == want);
        REQUIRE(lev.witness->str() == lev_expect.witness);
      } else {
        REQUIRE(lev.value.kind() == SymReal::Kind::PosInf);
      }

      if (ctx.empty()) {
        auto [num, den] =
            oracle::mass_search(x, budget.max_program_bits, budget.max_steps);
        REQUIRE(engine.mass(target, budget) == Rat(num, den));
      }
    }
  }
}

TEST_CASE("value is monotone in the budget") {
  ComplexityEngine engine;
  std::mt19937 rng(23);
  for (int trial = 0; trial < 12; ++trial) {
    unsigned len = rng() % 3;
    BitString x = BitString::from_uint(rng() & ((1u << len) - 1), len);

    SymReal prev = SymReal::infinity();
    for (std::uint32_t bits : {4u, 6u, 8u, 10u}) {
      SymReal cur = engine.plain(x, {}, Budget{bits, 100}).value;
      CHECK(cur <= prev);
      prev = cur;
    }
    prev = SymReal::infinity();
    for (std::uint64_t steps : {5ull, 20ull, 100ull, 1000ull}) {
      SymReal cur = engine.plain(x, {}, Budget{8, steps}).value;
      CHECK(cur <= prev);
      prev = cur;
    }
    // Mass only grows as the budget loosens.
    Rat m_small = engine.mass(x, Budget{5, 50});
    Rat m_large = engine.mass(x, Budget{8, 200});
    CHECK(m_small <= m_large);
  }
}

TEST_CASE("results are independent of the worker count") {
  ComplexityEngine serial(nullptr, 1);
  ComplexityEngine wide(nullptr, 8);
  Budget b{10, 300};
  for (const auto& target : all_targets_up_to(2)) {
    auto a = serial.plain(target, {}, b);
    auto c = wide.plain(target, {}, b);
    CHECK(a.value == c.value);
    CHECK(a.witness == c.witness);
    CHECK(a.exact == c.exact);
    auto la = serial.levin(target, {}, b);
    auto lc = wide.levin(target, {}, b);
    CHECK(la.value == lc.value);
    CHECK(la.witness == lc.witness);
    CHECK(la.witness_time == lc.witness_time);
    CHECK(serial.mass(target, b) == wide.mass(target, b));
  }
}

TEST_CASE("witness_bound certifies and rejects") {
  // ". HALT" halts with output "0": certifies C("0") <= 6.
  CHECK(ComplexityEngine::witness_bound("101111"_bits, "0"_bits, {}, 100).found());
  // Wrong output.
  CHECK_FALSE(ComplexityEngine::witness_bound("101111"_bits, "1"_bits, {}, 100).found());
  // Never halts within budget.
  CHECK_FALSE(ComplexityEngine::witness_bound("010011100111"_bits, "0"_bits, {}, 50).found());
}

TEST_CASE("cache round-trip and persistence") {
  fs::path dir = fresh_dir("cache");
  CacheKey key;
  {
    ResultCache cache(dir);
    ComplexityEngine engine(&cache);
    auto r = engine.plain("0"_bits, {}, Budget{8, 100});
    CHECK(r.value == SymReal(6));
    CHECK(cache.size() >= 1);
  }
  // A different instance on the same directory sees the entry.
  ResultCache reopened(dir);
  CHECK(reopened.size() >= 1);
  key.version = std::string(kMachineVersion);
  key.op = "plain";
  key.target = "0"_bits;
  key.context = encode_set({});
  key.max_program_bits = 8;
  key.max_steps = 100;
  auto rec = reopened.lookup(key);
  REQUIRE(rec.has_value());
  CHECK(rec->value == "6");
  CHECK(rec->exact);
  REQUIRE(rec->witness.has_value());
  CHECK(rec->witness->str() == "101111");

  // And the cached result is served identically through the engine.
  ComplexityEngine engine(&reopened);
  auto again = engine.plain("0"_bits, {}, Budget{8, 100});
  CHECK(again.value == SymReal(6));
  CHECK(again.witness->str() == "101111");
  fs::remove_all(dir);
}

TEST_CASE("cache entries are immutable") {
  ResultCache cache;  // memory-only
  CacheKey key{std::string(kMachineVersion), "plain", "0"_bits, BitString(), 8, 100};
  CacheRecord rec{"6", true, "101111"_bits, 2};
  cache.store(key, rec);
  cache.store(key, rec);  // identical re-store is fine
  CacheRecord other = rec;
  other.value = "5";
  CHECK_THROWS_AS(cache.store(key, other), VerificationError);
}

TEST_CASE("cache stats and verify") {
  fs::path dir = fresh_dir("stats");
  {
    ResultCache cache(dir);
    ComplexityEngine engine(&cache);
    engine.plain("0"_bits, {}, Budget{8, 100});
    engine.levin("0"_bits, {}, Budget{8, 100});
    engine.mass("0"_bits, Budget{6, 100});
    auto st = cache.stats();
    CHECK(st.total == 3);
    CHECK(st.per_op["plain"] == 1);
    CHECK(st.per_op["levin"] == 1);
    CHECK(st.per_op["mass"] == 1);
    CHECK(st.per_version[std::string(kMachineVersion)] == 3);
    auto rep = cache.verify();
    CHECK(rep.ok());
    CHECK(rep.checked == 2);  // mass has no witness
    CHECK(rep.skipped == 1);
    CHECK(rep.failed == 0);
  }
  fs::remove_all(dir);
}

TEST_CASE("tampered records fail verification") {
  fs::path dir = fresh_dir("tamper");
  {
    ResultCache cache(dir);
    ComplexityEngine engine(&cache);
    engine.plain("0"_bits, {}, Budget{8, 100});
  }
  fs::path rec_file = dir / "records.rec";
  std::string text = file_text(rec_file);
  auto pos = text.find("w101111");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 7, "w111111");  // halts immediately, prints nothing
  write_text(rec_file, text);

  ResultCache tampered(dir);
  auto rep = tampered.verify();
  CHECK_FALSE(rep.ok());
  CHECK(rep.failed == 1);
  REQUIRE(rep.failures.size() == 1);
  fs::remove_all(dir);
}

TEST_CASE("corrupt lines are skipped, not fatal") {
  fs::path dir = fresh_dir("corrupt");
  {
    ResultCache cache(dir);
    ComplexityEngine engine(&cache);
    engine.plain({}, {}, Budget{4, 100});
  }
  std::ofstream(dir / "records.rec", std::ios::app) << "not a record line\n";
  ResultCache reopened(dir);
  CHECK(reopened.size() == 1);
  CHECK(reopened.stats().corrupt_lines == 1);
  fs::remove_all(dir);
}

TEST_CASE("clear_stale drops only other machine versions") {
  fs::path dir = fresh_dir("stale");
  {
    ResultCache cache(dir);
    CacheKey current{std::string(kMachineVersion), "plain", "0"_bits, BitString(), 8, 100};
    cache.store(current, CacheRecord{"6", true, "101111"_bits, 2});
    CacheKey old = current;
    old.version = "ISLAB-M0";
    cache.store(old, CacheRecord{"7", true, std::nullopt, std::nullopt});
    CHECK(cache.size() == 2);
    CHECK(cache.clear_stale() == 1);
    CHECK(cache.size() == 1);
    CHECK(cache.stats().per_version.count("ISLAB-M0") == 0);
  }
  // The compaction persisted.
  ResultCache reopened(dir);
  CHECK(reopened.size() == 1);
  fs::remove_all(dir);
}

TEST_CASE("ISLAB_CACHE_DIR is honored") {
  fs::path dir = fresh_dir("envdir");
  setenv("ISLAB_CACHE_DIR", dir.string().c_str(), 1);
  auto got = ResultCache::env_dir();
  REQUIRE(got.has_value());
  CHECK(*got == dir);
  unsetenv("ISLAB_CACHE_DIR");
  CHECK_FALSE(ResultCache::env_dir().has_value());
  setenv("ISLAB_CACHE_DIR", "", 1);
  CHECK_FALSE(ResultCache::env_dir().has_value());
  unsetenv("ISLAB_CACHE_DIR");
  fs::remove_all(dir);
}

TEST_CASE("bounded models report engine results") {
  ComplexityEngine engine;
  Budget b{9, 100};
  ExactBoundedModel exact(engine, b);
  LevinBoundedModel levin(engine, b);
  CHECK(exact("0"_bits) == SymReal(6));
  CHECK(exact("0"_bits, {"10101"_bits}) == SymReal(6));
  CHECK(levin("0"_bits) == SymReal(3));
  CHECK(exact.name() != levin.name());
  // Out-of-reach target under a tiny budget: infinity, not a throw.
  ExactBoundedModel tiny(engine, Budget{3, 100});
  CHECK(tiny("0"_bits).kind() == SymReal::Kind::PosInf);
}

TEST_CASE("lz78 model is total and integer-valued") {
  LZ78Model model;
  CHECK(model.name() == "lz78");
  SymReal v = model("010101010101"_bits);
  CHECK(v.finite());
  CHECK(v.is_rational());
  CHECK(denominator(v.rational_part()) == 1);
  CHECK(model({}).finite());
}

TEST_CASE("witness table model") {
  WitnessTableModel model;
  CHECK(model("0"_bits).kind() == SymReal::Kind::PosInf);
  CHECK(model.add("101111"_bits, "0"_bits, {}, 100));
  CHECK(model("0"_bits) == SymReal(6));
  // A miss reports false and records nothing.
  CHECK_FALSE(model.add("111"_bits, "0"_bits, {}, 100));
  CHECK(model("0"_bits) == SymReal(6));
  // "> . HALT" also prints 0 but is longer; the smaller bound is kept.
  CHECK(model.add("000101111"_bits, "0"_bits, {}, 100));
  CHECK(model("0"_bits) == SymReal(6));
  // And building up from the long witness first still converges to 6.
  WitnessTableModel fresh;
  CHECK(fresh.add("000101111"_bits, "0"_bits, {}, 100));
  CHECK(fresh("0"_bits) == SymReal(9));
  CHECK(fresh.add("101111"_bits, "0"_bits, {}, 100));
  CHECK(fresh("0"_bits) == SymReal(6));
}
