#include "islab/cybernetic.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "islab/errors.hpp"

namespace islab {
namespace {

constexpr std::uint32_t kMaxSymbols = 4;
constexpr std::uint32_t kMaxHorizon = 6;

void ensure_desk_scale(std::uint32_t action_count, std::uint32_t perception_count,
                       std::uint32_t m) {
  if (m == 0) throw std::invalid_argument("horizon must be at least 1");
  if (action_count > kMaxSymbols || perception_count > kMaxSymbols) {
    throw ScaleLimitError("alphabets limited to " + std::to_string(kMaxSymbols) + " symbols");
  }
  if (m > kMaxHorizon) {
    throw ScaleLimitError("horizon limited to " + std::to_string(kMaxHorizon) + " cycles");
  }
}

void ensure_alphabets_agree(const Policy& p, const Environment& env) {
  if (p.action_count() != env.actions().count ||
      p.perception_count() != env.perceptions().count) {
    throw std::invalid_argument("policy and environment alphabets disagree");
  }
}

void ensure_horizons(std::uint32_t m, const Policy* p, const Environment* env) {
  if (p && m > p->horizon()) throw std::invalid_argument("policy horizon too small");
  if (env && m > env->horizon()) throw std::invalid_argument("environment horizon too small");
}

// Backward-induction optimum with memoized (value, arg-max action) per
// partial joint history. Ties go to the smallest action.
class Expectimax {
 public:
  Expectimax(const Environment& env, std::uint32_t m) : env_(env), m_(m) {}

  const std::pair<Rat, std::uint32_t>& solve(std::vector<std::uint32_t>& ys,
                                             std::vector<std::uint32_t>& xs) {
    auto key = std::make_pair(ys, xs);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::pair<Rat, std::uint32_t> best{Rat(0), 0};
    if (xs.size() < m_) {
      bool first = true;
      for (std::uint32_t y = 0; y < env_.actions().count; ++y) {
        Rat acc(0);
        ys.push_back(y);
        for (std::uint32_t x = 0; x < env_.perceptions().count; ++x) {
          Rat p = env_.conditional(ys, xs, x);
          if (p == Rat(0)) continue;
          xs.push_back(x);
          acc += p * (Rat(env_.reward(x)) + solve(ys, xs).first);
          xs.pop_back();
        }
        ys.pop_back();
        if (first || acc > best.first) best = {acc, y};
        first = false;
      }
    }
    return memo_.emplace(std::move(key), std::move(best)).first->second;
  }

 private:
  const Environment& env_;
  std::uint32_t m_;
  std::map<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>,
           std::pair<Rat, std::uint32_t>>
      memo_;
};

std::uint64_t realized_reward(const Environment& env, const std::vector<std::uint32_t>& xs) {
  std::uint64_t total = 0;
  for (auto x : xs) total += env.reward(x);
  return total;
}

}  // namespace

void Alphabet::validate() const {
  if (bits == 0 || bits > 8) throw SchemaError("alphabet width must be between 1 and 8 bits");
  if (count == 0 || ((count - 1) >> bits) > 0) {
    throw SchemaError("alphabet count must be between 1 and 2^width");
  }
}

Environment::Environment(Alphabet actions, Alphabet perceptions,
                         std::vector<std::uint64_t> rewards, std::uint64_t reward_bound)
    : actions_(actions), perceptions_(perceptions), rewards_(std::move(rewards)),
      reward_bound_(reward_bound) {
  actions_.validate();
  perceptions_.validate();
  if (rewards_.size() != perceptions_.count) {
    throw SchemaError("reward map must cover every perception symbol");
  }
  for (auto r : rewards_) {
    if (r > reward_bound_) throw SchemaError("reward exceeds declared bound");
  }
}

std::uint64_t Environment::reward(std::uint32_t x) const {
  if (x >= rewards_.size()) throw std::invalid_argument("perception symbol out of range");
  return rewards_[x];
}

Rat Environment::history_probability(const std::vector<std::uint32_t>& ys,
                                     const std::vector<std::uint32_t>& xs) const {
  if (ys.size() != xs.size()) throw std::invalid_argument("history has unequal cycle counts");
  Rat prob(1);
  std::vector<std::uint32_t> py, px;
  for (std::size_t k = 0; k < ys.size(); ++k) {
    py.push_back(ys[k]);
    prob *= conditional(py, px, xs[k]);
    if (prob == Rat(0)) return prob;
    px.push_back(xs[k]);
  }
  return prob;
}

void Environment::validate_complete(std::uint32_t m) const {
  if (m > horizon()) throw std::invalid_argument("environment horizon too small");
  // Walk the reachable support; every row along the way must sum to 1.
  std::vector<std::uint32_t> ys, xs;
  auto walk = [&](auto&& self) -> void {
    if (xs.size() == m) return;
    for (std::uint32_t y = 0; y < actions().count; ++y) {
      ys.push_back(y);
      Rat sum(0);
      for (std::uint32_t x = 0; x < perceptions().count; ++x) {
        Rat p = conditional(ys, xs, x);
        if (p < Rat(0)) throw SchemaError("negative conditional probability");
        sum += p;
      }
      if (sum != Rat(1)) {
        throw SchemaError("environment " + name() +
                          " is not a proper measure on a reachable condition");
      }
      for (std::uint32_t x = 0; x < perceptions().count; ++x) {
        if (conditional(ys, xs, x) == Rat(0)) continue;
        xs.push_back(x);
        self(self);
        xs.pop_back();
      }
      ys.pop_back();
    }
  };
  walk(walk);
}

TableEnvironment::TableEnvironment(std::string name, Alphabet actions, Alphabet perceptions,
                                   std::vector<std::uint64_t> rewards,
                                   std::uint64_t reward_bound, std::uint32_t horizon)
    : Environment(actions, perceptions, std::move(rewards), reward_bound),
      name_(std::move(name)), horizon_(horizon) {
  if (horizon_ == 0) throw SchemaError("environment horizon must be at least 1");
}

void TableEnvironment::add_conditional(const std::vector<std::uint32_t>& condition,
                                       std::uint32_t x, const Rat& probability) {
  if (condition.size() % 2 != 1) {
    throw SchemaError("conditional key must end on an action (odd interleaved length)");
  }
  std::uint32_t cycle = static_cast<std::uint32_t>(condition.size() / 2 + 1);
  if (cycle > horizon_) throw SchemaError("conditional key deeper than the declared horizon");
  for (std::size_t i = 0; i < condition.size(); ++i) {
    std::uint32_t limit = (i % 2 == 0) ? actions().count : perceptions().count;
    if (condition[i] >= limit) throw SchemaError("conditional key symbol out of range");
  }
  if (x >= perceptions().count) throw SchemaError("conditional perception symbol out of range");
  if (probability < Rat(0)) throw SchemaError("conditional probability is negative");
  auto& row = rows_[condition];
  if (!row.emplace(x, probability).second) {
    throw SchemaError("duplicate conditional entry");
  }
}

void TableEnvironment::validate() const {
  for (const auto& [key, row] : rows_) {
    Rat sum(0);
    for (const auto& [x, p] : row) sum += p;
    if (sum > Rat(1)) throw SchemaError("conditional row sums above 1");
  }
}

Rat TableEnvironment::conditional(const std::vector<std::uint32_t>& actions,
                                  const std::vector<std::uint32_t>& perceptions,
                                  std::uint32_t x) const {
  if (actions.size() != perceptions.size() + 1) {
    throw std::invalid_argument("condition must contain exactly one pending action");
  }
  std::vector<std::uint32_t> key;
  key.reserve(actions.size() + perceptions.size());
  for (std::size_t i = 0; i < perceptions.size(); ++i) {
    key.push_back(actions[i]);
    key.push_back(perceptions[i]);
  }
  key.push_back(actions.back());
  auto it = rows_.find(key);
  if (it == rows_.end()) return Rat(0);
  auto jt = it->second.find(x);
  return jt == it->second.end() ? Rat(0) : jt->second;
}

std::string TableEnvironment::canonical_serialization() const {
  std::ostringstream os;
  os << "table " << name_ << " y=" << actions().bits << "/" << actions().count
     << " x=" << perceptions().bits << "/" << perceptions().count << " c=" << reward_bound()
     << " h=" << horizon_ << " r=";
  for (std::uint32_t x = 0; x < perceptions().count; ++x) {
    if (x) os << ",";
    os << reward(x);
  }
  for (const auto& [key, row] : rows_) {
    os << " |";
    for (auto t : key) os << " " << t;
    os << " :";
    for (const auto& [x, p] : row) os << " " << x << "=" << rat_to_string(p);
  }
  return os.str();
}

namespace {

// Closed-form 1-bit environments with reward = perception bit.
class BitEnvironment : public Environment {
 public:
  enum class Kind { Echo, Anti, Coin };

  explicit BitEnvironment(Kind kind)
      : Environment(Alphabet{1, 2}, Alphabet{1, 2}, {0, 1}, 1), kind_(kind) {}

  std::string name() const override {
    switch (kind_) {
      case Kind::Echo: return "echo";
      case Kind::Anti: return "anti";
      case Kind::Coin: return "fair-coin";
    }
    return {};
  }

  Rat conditional(const std::vector<std::uint32_t>& actions,
                  const std::vector<std::uint32_t>& perceptions,
                  std::uint32_t x) const override {
    if (actions.size() != perceptions.size() + 1) {
      throw std::invalid_argument("condition must contain exactly one pending action");
    }
    if (x >= 2) return Rat(0);
    switch (kind_) {
      case Kind::Echo: return x == actions.back() ? Rat(1) : Rat(0);
      case Kind::Anti: return x == 1 - actions.back() ? Rat(1) : Rat(0);
      case Kind::Coin: return Rat(1, 2);
    }
    return Rat(0);
  }

  std::string canonical_serialization() const override { return "builtin " + name() + " y=1/2 x=1/2 c=1 r=0,1"; }

 private:
  Kind kind_;
};

}  // namespace

std::shared_ptr<Environment> echo_environment() {
  return std::make_shared<BitEnvironment>(BitEnvironment::Kind::Echo);
}
std::shared_ptr<Environment> anti_environment() {
  return std::make_shared<BitEnvironment>(BitEnvironment::Kind::Anti);
}
std::shared_ptr<Environment> fair_coin_environment() {
  return std::make_shared<BitEnvironment>(BitEnvironment::Kind::Coin);
}

ConstPolicy::ConstPolicy(std::uint32_t action, std::uint32_t action_count,
                         std::uint32_t perception_count)
    : Policy(action_count, perception_count), action_(action) {
  if (action >= action_count) throw std::invalid_argument("constant action out of range");
}

TablePolicy::TablePolicy(std::uint32_t action_count, std::uint32_t perception_count,
                         std::uint32_t horizon,
                         std::map<std::vector<std::uint32_t>, std::uint32_t> table)
    : Policy(action_count, perception_count), horizon_(horizon), table_(std::move(table)) {
  if (horizon_ == 0 || horizon_ > kMaxHorizon) {
    throw ScaleLimitError("policy tables limited to horizon " + std::to_string(kMaxHorizon));
  }
  // Totality: one in-range action per perception history shorter than the
  // horizon, and nothing else.
  std::size_t expected = 0;
  std::vector<std::uint32_t> xs;
  auto walk = [&](auto&& self) -> void {
    ++expected;
    auto it = table_.find(xs);
    if (it == table_.end()) throw SchemaError("policy table is missing a perception history");
    if (it->second >= this->action_count()) throw SchemaError("policy action out of range");
    if (xs.size() + 1 == horizon_) return;
    for (std::uint32_t x = 0; x < this->perception_count(); ++x) {
      xs.push_back(x);
      self(self);
      xs.pop_back();
    }
  };
  walk(walk);
  if (table_.size() != expected) throw SchemaError("policy table has unreachable entries");
}

std::uint32_t TablePolicy::action(const std::vector<std::uint32_t>& perceptions) const {
  auto it = table_.find(perceptions);
  if (it == table_.end()) throw std::invalid_argument("perception history beyond policy horizon");
  return it->second;
}

void HistoryCodec::validate() const {
  if (action_bits == 0 || action_bits > 8 || perception_bits == 0 || perception_bits > 8) {
    throw SchemaError("history field widths must be between 1 and 8 bits");
  }
  if (horizon == 0) throw SchemaError("history codec horizon must be at least 1");
  if (n() > 24) throw ScaleLimitError("coded histories limited to 24 bits");
}

BitString HistoryCodec::encode(const std::vector<std::uint32_t>& ys,
                               const std::vector<std::uint32_t>& xs) const {
  validate();
  if (ys.size() != horizon || xs.size() != horizon) {
    throw std::invalid_argument("history does not span the codec horizon");
  }
  BitString out;
  for (std::uint32_t k = 0; k < horizon; ++k) {
    if ((action_bits < 32 && ys[k] >= (1u << action_bits)) ||
        (perception_bits < 32 && xs[k] >= (1u << perception_bits))) {
      throw std::invalid_argument("history symbol does not fit its field");
    }
    out.append(BitString::from_uint(ys[k], action_bits));
    out.append(BitString::from_uint(xs[k], perception_bits));
  }
  return out;
}

std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> HistoryCodec::decode(
    const BitString& coded) const {
  validate();
  if (coded.size() != n()) throw std::invalid_argument("coded history has wrong length");
  std::vector<std::uint32_t> ys, xs;
  std::size_t at = 0;
  for (std::uint32_t k = 0; k < horizon; ++k) {
    ys.push_back(static_cast<std::uint32_t>(coded.slice(at, action_bits).to_uint()));
    at += action_bits;
    xs.push_back(static_cast<std::uint32_t>(coded.slice(at, perception_bits).to_uint()));
    at += perception_bits;
  }
  return {ys, xs};
}

HistoryCodec HistoryCodec::for_env(const Environment& env, std::uint32_t m) {
  return HistoryCodec{env.actions().bits, env.perceptions().bits, m};
}

Rat value(const Policy& p, const Environment& env, std::uint32_t m) {
  ensure_alphabets_agree(p, env);
  ensure_desk_scale(env.actions().count, env.perceptions().count, m);
  ensure_horizons(m, &p, &env);
  std::vector<std::uint32_t> ys, xs;
  auto walk = [&](auto&& self) -> Rat {
    if (xs.size() == m) return Rat(0);
    std::uint32_t y = p.action(xs);
    if (y >= env.actions().count) throw std::invalid_argument("policy action out of range");
    ys.push_back(y);
    Rat acc(0);
    for (std::uint32_t x = 0; x < env.perceptions().count; ++x) {
      Rat prob = env.conditional(ys, xs, x);
      if (prob == Rat(0)) continue;
      xs.push_back(x);
      acc += prob * (Rat(env.reward(x)) + self(self));
      xs.pop_back();
    }
    ys.pop_back();
    return acc;
  };
  return walk(walk);
}

Rat optimal_value(const Environment& env, std::uint32_t m,
                  const std::vector<std::uint32_t>& ys, const std::vector<std::uint32_t>& xs) {
  ensure_desk_scale(env.actions().count, env.perceptions().count, m);
  ensure_horizons(m, nullptr, &env);
  if (ys.size() != xs.size()) throw std::invalid_argument("history has unequal cycle counts");
  if (ys.size() > m) throw std::invalid_argument("history longer than the horizon");
  for (auto y : ys) {
    if (y >= env.actions().count) throw std::invalid_argument("history action out of range");
  }
  for (auto x : xs) {
    if (x >= env.perceptions().count) throw std::invalid_argument("history perception out of range");
  }
  if (!ys.empty() && env.history_probability(ys, xs) == Rat(0)) {
    throw std::invalid_argument("history outside the environment's support");
  }
  Expectimax solver(env, m);
  std::vector<std::uint32_t> wys = ys, wxs = xs;
  return Rat(realized_reward(env, xs)) + solver.solve(wys, wxs).first;
}

TablePolicy optimal_policy(const Environment& env, std::uint32_t m) {
  ensure_desk_scale(env.actions().count, env.perceptions().count, m);
  ensure_horizons(m, nullptr, &env);
  Expectimax solver(env, m);
  std::map<std::vector<std::uint32_t>, std::uint32_t> table;
  std::vector<std::uint32_t> ys, xs;
  auto walk = [&](auto&& self) -> void {
    std::uint32_t y = solver.solve(ys, xs).second;
    table[xs] = y;
    if (xs.size() + 1 == m) return;
    ys.push_back(y);
    for (std::uint32_t x = 0; x < env.perceptions().count; ++x) {
      xs.push_back(x);
      self(self);
      xs.pop_back();
    }
    ys.pop_back();
  };
  walk(walk);
  return TablePolicy(env.actions().count, env.perceptions().count, m, std::move(table));
}

Player agent_set(const Policy& p, const HistoryCodec& codec) {
  codec.validate();
  std::uint32_t m = codec.horizon;
  ensure_desk_scale(p.action_count(), p.perception_count(), m);
  ensure_horizons(m, &p, nullptr);
  Player out(codec.n());
  std::vector<std::uint32_t> ys, xs;
  auto walk = [&](auto&& self) -> void {
    if (xs.size() == m) {
      out.insert(codec.encode(ys, xs));
      return;
    }
    std::uint32_t y = p.action(xs);
    if (y >= p.action_count()) throw std::invalid_argument("policy action out of range");
    ys.push_back(y);
    for (std::uint32_t x = 0; x < p.perception_count(); ++x) {
      xs.push_back(x);
      self(self);
      xs.pop_back();
    }
    ys.pop_back();
  };
  walk(walk);
  return out;
}

Player env_set_B(const Environment& env, const HistoryCodec& codec, const Rat& tau) {
  codec.validate();
  std::uint32_t m = codec.horizon;
  ensure_desk_scale(env.actions().count, env.perceptions().count, m);
  ensure_horizons(m, nullptr, &env);
  Player out(codec.n());
  std::vector<std::uint32_t> ys, xs;
  std::uint64_t reward_sum = 0;
  auto walk = [&](auto&& self) -> void {
    if (xs.size() == m) {
      if (Rat(reward_sum) >= tau) out.insert(codec.encode(ys, xs));
      return;
    }
    for (std::uint32_t y = 0; y < env.actions().count; ++y) {
      ys.push_back(y);
      for (std::uint32_t x = 0; x < env.perceptions().count; ++x) {
        if (env.conditional(ys, xs, x) == Rat(0)) continue;
        xs.push_back(x);
        reward_sum += env.reward(x);
        self(self);
        reward_sum -= env.reward(x);
        xs.pop_back();
      }
      ys.pop_back();
    }
  };
  walk(walk);
  return out;
}

Player env_set_D(const Environment& env, const HistoryCodec& codec, const Rat& tau) {
  codec.validate();
  std::uint32_t m = codec.horizon;
  ensure_desk_scale(env.actions().count, env.perceptions().count, m);
  ensure_horizons(m, nullptr, &env);
  Expectimax solver(env, m);
  std::vector<std::uint32_t> ys, xs;
  Rat vtotal = solver.solve(ys, xs).first;
  if (!(vtotal > Rat(0))) {
    throw std::invalid_argument("optimal value is zero; difficulty ratio undefined");
  }
  Rat floor = tau * vtotal;
  Player out(codec.n());
  std::uint64_t reward_sum = 0;
  // Prefixes that already violate the ratio bound cannot be repaired, so
  // prune there.
  auto walk = [&](auto&& self) -> void {
    if (xs.size() == m) {
      out.insert(codec.encode(ys, xs));
      return;
    }
    for (std::uint32_t y = 0; y < env.actions().count; ++y) {
      ys.push_back(y);
      for (std::uint32_t x = 0; x < env.perceptions().count; ++x) {
        if (env.conditional(ys, xs, x) == Rat(0)) continue;
        xs.push_back(x);
        reward_sum += env.reward(x);
        Rat prefix_value = Rat(reward_sum) + solver.solve(ys, xs).first;
        if (prefix_value >= floor) self(self);
        reward_sum -= env.reward(x);
        xs.pop_back();
      }
      ys.pop_back();
    }
  };
  walk(walk);
  return out;
}

InteractionResult interacts_at(const Policy& p, const Environment& env, std::uint32_t m,
                               const Rat& tau, EnvSetVariant variant) {
  ensure_alphabets_agree(p, env);
  HistoryCodec codec = HistoryCodec::for_env(env, m);
  Player a = agent_set(p, codec);
  Player s = variant == EnvSetVariant::B ? env_set_B(env, codec, tau)
                                         : env_set_D(env, codec, tau);
  Player shared = intersect(a, s);
  InteractionResult result;
  result.agent_size = a.size();
  result.env_size = s.size();
  result.shared = shared.size();
  result.interacts = !shared.empty();
  if (result.interacts) result.witness = shared.members().front();
  return result;
}

}  // namespace islab
