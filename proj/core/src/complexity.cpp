#include "islab/complexity.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "islab/encoding.hpp"
#include "islab/errors.hpp"
#include "islab/machine.hpp"

namespace islab {
namespace {

constexpr std::uint32_t kMaxSearchBits = 30;

// Fixed chunk width: chunk boundaries depend only on the search space, never
// on the worker count, so reductions in chunk order are schedule-independent.
constexpr std::uint64_t kChunk = 4096;

unsigned effective_workers(unsigned requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

void check_budget(const Budget& b) {
  if (b.max_steps == 0) throw std::invalid_argument("step budget must be positive");
  if (b.max_program_bits > kMaxSearchBits)
    throw ScaleLimitError("program-space searches are capped at " +
                          std::to_string(kMaxSearchBits) + " program bits, got " +
                          std::to_string(b.max_program_bits));
}

template <typename Body>
void for_chunks(std::uint64_t total, unsigned workers, Body&& body) {
  if (total == 0) return;
  const std::uint64_t n_chunks = (total + kChunk - 1) / kChunk;
  std::atomic<std::uint64_t> next{0};
  auto drain = [&] {
    while (true) {
      const std::uint64_t ci = next.fetch_add(1, std::memory_order_relaxed);
      if (ci >= n_chunks) return;
      const std::uint64_t lo = ci * kChunk;
      body(ci, lo, std::min(total, lo + kChunk));
    }
  };
  const unsigned n = static_cast<unsigned>(
      std::min<std::uint64_t>(workers, n_chunks));
  if (n <= 1) {
    drain();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned i = 0; i < n; ++i) pool.emplace_back(drain);
  for (auto& th : pool) th.join();
}

struct PlainLen {
  std::optional<std::uint64_t> producer;
  std::uint64_t halt_steps = 0;
  bool timed_out = false;  // meaningful only when no producer was found
};

PlainLen scan_plain_length(std::uint32_t len, const BitString& x, const BitString& aux,
                           std::uint64_t max_steps, unsigned workers) {
  const std::uint64_t total = std::uint64_t{1} << len;
  struct Chunk {
    std::optional<std::uint64_t> producer;
    std::uint64_t halt_steps = 0;
    bool timed_out = false;
  };
  std::vector<Chunk> chunks((total + kChunk - 1) / kChunk);
  // Shared lower bound for skipping: once some producer is known, programs
  // numerically above it can only lose the (length, numeric) tie-break. The
  // skip can hide step-budget hits, but only at the winning length, where
  // they no longer affect exactness.
  std::atomic<std::uint64_t> best{std::numeric_limits<std::uint64_t>::max()};
  for_chunks(total, workers, [&](std::uint64_t ci, std::uint64_t lo, std::uint64_t hi) {
    Chunk& c = chunks[ci];
    for (std::uint64_t v = lo; v < hi; ++v) {
      if (v >= best.load(std::memory_order_relaxed)) break;
      RunOutcome out = run_packed(v, len, aux, max_steps);
      if (out.kind == RunKind::OutOfBudget) {
        c.timed_out = true;
      } else if (out.kind == RunKind::Halted && out.output == x) {
        c.producer = v;
        c.halt_steps = out.steps;
        std::uint64_t cur = best.load(std::memory_order_relaxed);
        while (v < cur &&
               !best.compare_exchange_weak(cur, v, std::memory_order_relaxed)) {
        }
        break;
      }
    }
  });
  PlainLen r;
  for (const Chunk& c : chunks) {
    if (c.producer) {
      r.producer = c.producer;
      r.halt_steps = c.halt_steps;
      return r;
    }
    r.timed_out = r.timed_out || c.timed_out;
  }
  return r;
}

struct LevinHit {
  bool found = false;
  std::uint64_t producer = 0;
  std::uint64_t raw_step = 0;  // print step before clamping (0 only for the empty target)
};

LevinHit scan_levin_length(std::uint32_t len, const BitString& x, const BitString& aux,
                           std::uint64_t max_steps, unsigned workers) {
  const std::uint64_t total = std::uint64_t{1} << len;
  std::vector<LevinHit> chunks((total + kChunk - 1) / kChunk);
  for_chunks(total, workers, [&](std::uint64_t ci, std::uint64_t lo, std::uint64_t hi) {
    LevinHit& c = chunks[ci];
    for (std::uint64_t v = lo; v < hi; ++v) {
      RunOutcome out = run_packed(v, len, aux, max_steps);
      auto step = out.step_for_prefix(x.size());
      if (!step || !out.output.has_prefix(x)) continue;
      const std::uint64_t clamped = std::max<std::uint64_t>(1, *step);
      // Within one length the score orders by print time; earlier programs
      // win ties because the scan ascends numerically.
      if (!c.found || clamped < std::max<std::uint64_t>(1, c.raw_step)) {
        c.found = true;
        c.producer = v;
        c.raw_step = *step;
      }
    }
  });
  LevinHit r;
  for (const LevinHit& c : chunks) {
    if (!c.found) continue;
    if (!r.found || std::max<std::uint64_t>(1, c.raw_step) <
                        std::max<std::uint64_t>(1, r.raw_step)) {
      r = c;
    }
  }
  return r;
}

std::uint64_t to_u64(const std::string& s) {
  std::uint64_t out = 0;
  if (s.empty() || s.size() > 20) throw VerificationError("bad numeric cache field");
  for (char c : s) {
    if (c < '0' || c > '9') throw VerificationError("bad numeric cache field");
    out = out * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return out;
}

CacheRecord encode_plain_record(const ComplexityResult& r) {
  CacheRecord rec;
  rec.exact = r.exact;
  if (r.witness) {
    rec.value = std::to_string(r.witness->size());
    rec.witness = r.witness;
    rec.witness_time = r.witness_time;
  } else {
    rec.value = "inf";
  }
  return rec;
}

ComplexityResult decode_plain_record(const CacheRecord& rec) {
  ComplexityResult r;
  r.exact = rec.exact;
  if (rec.value == "inf") {
    r.value = SymReal::infinity();
    return r;
  }
  r.value = SymReal(static_cast<std::int64_t>(to_u64(rec.value)));
  r.witness = rec.witness;
  r.witness_time = rec.witness_time;
  return r;
}

CacheRecord encode_levin_record(const ComplexityResult& r) {
  CacheRecord rec;
  rec.exact = r.exact;
  if (r.witness) {
    rec.value = std::to_string(r.witness->size()) + ":" +
                std::to_string(r.witness_time.value_or(0));
    rec.witness = r.witness;
    rec.witness_time = r.witness_time;
  } else {
    rec.value = "inf";
  }
  return rec;
}

ComplexityResult decode_levin_record(const CacheRecord& rec) {
  ComplexityResult r;
  r.exact = rec.exact;
  if (rec.value == "inf") {
    r.value = SymReal::infinity();
    return r;
  }
  auto colon = rec.value.find(':');
  if (colon == std::string::npos) throw VerificationError("bad levin cache value");
  const std::uint64_t len = to_u64(rec.value.substr(0, colon));
  const std::uint64_t step = to_u64(rec.value.substr(colon + 1));
  r.value = SymReal(static_cast<std::int64_t>(len)) +
            SymReal::log2_of(std::max<std::uint64_t>(1, step));
  r.witness = rec.witness;
  r.witness_time = rec.witness_time;
  return r;
}

}  // namespace

ComplexityEngine::ComplexityEngine(ResultCache* cache, unsigned workers)
    : cache_(cache), workers_(workers) {}

ComplexityResult ComplexityEngine::plain(const BitString& x,
                                         const std::vector<BitString>& context,
                                         const Budget& budget) const {
  check_budget(budget);
  const BitString aux = encode_set(context);
  const CacheKey key{std::string(kMachineVersion), "plain", x, aux,
                     budget.max_program_bits, budget.max_steps};
  if (cache_) {
    if (auto rec = cache_->lookup(key)) return decode_plain_record(*rec);
  }

  const unsigned w = effective_workers(workers_);
  ComplexityResult res;
  bool shorter_timed_out = false;
  for (std::uint32_t len = 0; len <= budget.max_program_bits; ++len) {
    PlainLen r = scan_plain_length(len, x, aux, budget.max_steps, w);
    if (r.producer) {
      res.value = SymReal(static_cast<std::int64_t>(len));
      res.exact = !shorter_timed_out;
      res.witness = BitString::from_uint(*r.producer, len);
      res.witness_time = r.halt_steps;
      break;
    }
    shorter_timed_out = shorter_timed_out || r.timed_out;
  }
  if (!res.witness) {
    res.value = SymReal::infinity();
    // Without step-budget hits the search proves there is no producer within
    // the length budget at all.
    res.exact = !shorter_timed_out;
  }
  if (cache_) cache_->store(key, encode_plain_record(res));
  return res;
}

ComplexityResult ComplexityEngine::levin(const BitString& x,
                                         const std::vector<BitString>& context,
                                         const Budget& budget) const {
  check_budget(budget);
  const BitString aux = encode_set(context);
  const CacheKey key{std::string(kMachineVersion), "levin", x, aux,
                     budget.max_program_bits, budget.max_steps};
  if (cache_) {
    if (auto rec = cache_->lookup(key)) return decode_levin_record(*rec);
  }

  const unsigned w = effective_workers(workers_);
  struct Best {
    bool found = false;
    Int score_key;  // 2^len * clamped print step; log-monotone image of the score
    std::uint32_t len = 0;
    std::uint64_t producer = 0;
    std::uint64_t raw_step = 0;
  } best;
  for (std::uint32_t len = 0; len <= budget.max_program_bits; ++len) {
    // A longer program scores at least its own length; once that floor
    // reaches the incumbent score, no later length can win (ties lose to the
    // shorter incumbent).
    if (best.found && (Int(1) << len) >= best.score_key) break;
    LevinHit hit = scan_levin_length(len, x, aux, budget.max_steps, w);
    if (!hit.found) continue;
    Int score_key = Int(std::max<std::uint64_t>(1, hit.raw_step)) << len;
    if (!best.found || score_key < best.score_key) {
      best.found = true;
      best.score_key = std::move(score_key);
      best.len = len;
      best.producer = hit.producer;
      best.raw_step = hit.raw_step;
    }
  }

  ComplexityResult res;
  if (best.found) {
    res.value = SymReal(static_cast<std::int64_t>(best.len)) +
                SymReal::log2_of(std::max<std::uint64_t>(1, best.raw_step));
    // Exact when nothing outside the budget could do better: every program
    // over the length budget scores above the winner, and every run cut off
    // by the step budget would have printed later than log2(max_steps).
    res.exact = best.score_key <= Int(budget.max_steps) &&
                best.score_key <= (Int(1) << budget.max_program_bits);
    res.witness = BitString::from_uint(best.producer, best.len);
    res.witness_time = best.raw_step;
  } else {
    res.value = SymReal::infinity();
    res.exact = false;  // a larger budget can always reveal a printer
  }
  if (cache_) cache_->store(key, encode_levin_record(res));
  return res;
}

Rat ComplexityEngine::mass(const BitString& x, const Budget& budget) const {
  check_budget(budget);
  const BitString aux;  // the mass is unconditional
  const CacheKey key{std::string(kMachineVersion), "mass", x, aux,
                     budget.max_program_bits, budget.max_steps};
  if (cache_) {
    if (auto rec = cache_->lookup(key)) {
      try {
        return parse_rational(rec->value);
      } catch (const std::exception&) {
        throw VerificationError("bad mass cache value '" + rec->value + "'");
      }
    }
  }

  const unsigned w = effective_workers(workers_);
  Rat total = 0;
  for (std::uint32_t len = 0; len <= budget.max_program_bits; ++len) {
    const std::uint64_t space = std::uint64_t{1} << len;
    std::vector<std::uint64_t> counts((space + kChunk - 1) / kChunk, 0);
    for_chunks(space, w, [&](std::uint64_t ci, std::uint64_t lo, std::uint64_t hi) {
      std::uint64_t n = 0;
      for (std::uint64_t v = lo; v < hi; ++v) {
        RunOutcome out = run_packed(v, len, aux, budget.max_steps);
        if (out.kind == RunKind::Halted && out.output == x) ++n;
      }
      counts[ci] = n;
    });
    std::uint64_t producers = 0;
    for (std::uint64_t n : counts) producers += n;
    if (producers > 0) total += Rat(Int(producers), Int(1) << len);
  }
  if (cache_) {
    CacheRecord rec;
    rec.value = rat_to_string(total);
    rec.exact = true;  // the budgeted mass is an exact dyadic rational
    cache_->store(key, rec);
  }
  return total;
}

ComplexityResult ComplexityEngine::witness_bound(const BitString& program,
                                                 const BitString& x,
                                                 const std::vector<BitString>& context,
                                                 std::uint64_t max_steps) {
  if (max_steps == 0) throw std::invalid_argument("step budget must be positive");
  if (!program_valid(program))
    throw std::invalid_argument(
        "witness program is statically invalid: unbalanced brackets");
  const BitString aux = encode_set(context);
  RunOutcome out = run(program, aux, max_steps);
  ComplexityResult res;
  if (out.kind == RunKind::Halted && out.output == x) {
    res.value = SymReal(static_cast<std::int64_t>(program.size()));
    res.exact = false;  // an upper bound, not a minimum
    res.witness = program;
    res.witness_time = out.steps;
  } else {
    res.value = SymReal::infinity();
  }
  return res;
}

}  // namespace islab
