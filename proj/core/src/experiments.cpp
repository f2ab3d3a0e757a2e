#include "islab/experiments.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "json.hpp"

#include "islab/aixi.hpp"
#include "islab/complexity.hpp"
#include "islab/encoding.hpp"
#include "islab/errors.hpp"
#include "islab/game.hpp"
#include "islab/machine.hpp"
#include "islab/measures.hpp"
#include "islab/model.hpp"
#include "islab/theoremlab.hpp"

namespace islab {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------- json plumbing ----------

json parse_json_text(const std::string& text, const std::string& what) {
  json parsed = json::parse(text, nullptr, false);
  if (parsed.is_discarded()) throw SchemaError(what + " is not valid JSON");
  return parsed;
}

void check_fields(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw SchemaError(where + " must be a JSON object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw SchemaError("unknown field \"" + item.key() + "\" in " + where);
    }
  }
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(where + " is missing required field \"" + key + "\"");
  return *it;
}

std::string require_string(const json& obj, const std::string& key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_string()) throw SchemaError(where + "." + key + " must be a string");
  return v.get<std::string>();
}

std::uint64_t require_uint(const json& obj, const std::string& key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number_unsigned()) throw SchemaError(where + "." + key + " must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

BitString parse_bits(const json& v, const std::string& where) {
  if (!v.is_string()) throw SchemaError(where + " must be a string of 0s and 1s");
  std::string s = v.get<std::string>();
  if (s.find_first_not_of("01") != std::string::npos) {
    throw SchemaError(where + " must contain only 0s and 1s");
  }
  return BitString::parse(s);
}

Rat parse_rat(const json& v, const std::string& where) {
  if (!v.is_string()) throw SchemaError(where + " must be a rational string like \"1/2\"");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const std::exception&) {
    throw SchemaError(where + " is not a valid rational: " + v.get<std::string>());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInputError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// ---------- value rendering ----------

json sym_json(const SymReal& v) {
  json out;
  out["exact"] = v.str();
  if (v.finite()) {
    out["approx"] = v.to_double();
  } else {
    out["approx"] = nullptr;
  }
  return out;
}

json rat_json(const Rat& v) {
  json out;
  out["exact"] = rat_to_string(v);
  out["approx"] = rat_to_double(v);
  return out;
}

json player_json(const Player& p) {
  json members = json::array();
  for (const auto& m : p.members()) members.push_back(m.str());
  return json{{"n", p.n()}, {"members", members}};
}

std::string timestamp_utc() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

json report_header(const std::string& digest) {
  return json{{"machine", std::string(kMachineVersion)},
              {"config_digest", digest},
              {"generated_at", timestamp_utc()}};
}

// ---------- object references ----------

Player player_from_ref(const json& ref, const fs::path& base, const std::string& where) {
  if (ref.is_object() && ref.contains("fixture")) {
    check_fields(ref, where, {"fixture"});
    std::string name = require_string(ref, "fixture", where);
    if (name == "rps-alpha") return rps_alpha();
    if (name == "rps-beta") return rps_beta();
    throw SchemaError(where + ": unknown player fixture \"" + name + "\"");
  }
  if (ref.is_object() && ref.contains("file")) {
    check_fields(ref, where, {"file"});
    fs::path path = base / require_string(ref, "file", where);
    try {
      return Player::from_text(read_file(path));
    } catch (const SchemaError& e) {
      throw SchemaError(where + ": " + path.string() + ": " + e.what());
    }
  }
  check_fields(ref, where, {"n", "members"});
  std::uint64_t n = require_uint(ref, "n", where);
  const json& members = require(ref, "members", where);
  if (!members.is_array()) throw SchemaError(where + ".members must be an array");
  Player p(static_cast<std::uint32_t>(n));
  for (const auto& m : members) {
    BitString bits = parse_bits(m, where + ".members[]");
    if (bits.size() != n) throw SchemaError(where + ": member length does not match n");
    p.insert(bits);
  }
  return p;
}

std::shared_ptr<Environment> environment_from_value(const json& ref, const fs::path& base,
                                                    const std::string& where);

std::shared_ptr<Environment> builtin_environment(const std::string& name,
                                                 const std::string& where) {
  if (name == "echo") return echo_environment();
  if (name == "anti") return anti_environment();
  if (name == "fair-coin") return fair_coin_environment();
  throw SchemaError(where + ": unknown builtin environment \"" + name + "\"");
}

std::vector<std::uint32_t> parse_symbol_key(const std::string& key, const std::string& where) {
  std::vector<std::uint32_t> out;
  std::istringstream in(key);
  std::string token;
  while (in >> token) {
    try {
      std::size_t pos = 0;
      unsigned long v = std::stoul(token, &pos);
      if (pos != token.size() || v > 0xffffu) throw std::invalid_argument("range");
      out.push_back(static_cast<std::uint32_t>(v));
    } catch (const std::exception&) {
      throw SchemaError(where + ": bad symbol token \"" + token + "\" in key \"" + key + "\"");
    }
  }
  return out;
}

std::shared_ptr<Environment> environment_from_object(const json& obj, const std::string& where) {
  if (obj.contains("builtin")) {
    check_fields(obj, where, {"builtin"});
    return builtin_environment(require_string(obj, "builtin", where), where);
  }
  check_fields(obj, where,
               {"name", "action_bits", "action_count", "perception_bits", "perception_count",
                "rewards", "reward_bound", "horizon", "conditionals"});
  std::string name = obj.contains("name") ? require_string(obj, "name", where) : "table-env";
  Alphabet actions{static_cast<std::uint32_t>(require_uint(obj, "action_bits", where)),
                   static_cast<std::uint32_t>(require_uint(obj, "action_count", where))};
  Alphabet perceptions{static_cast<std::uint32_t>(require_uint(obj, "perception_bits", where)),
                       static_cast<std::uint32_t>(require_uint(obj, "perception_count", where))};
  const json& rewards_v = require(obj, "rewards", where);
  if (!rewards_v.is_array()) throw SchemaError(where + ".rewards must be an array");
  std::vector<std::uint64_t> rewards;
  for (const auto& r : rewards_v) {
    if (!r.is_number_unsigned()) throw SchemaError(where + ".rewards must hold nonnegative integers");
    rewards.push_back(r.get<std::uint64_t>());
  }
  std::uint64_t bound = require_uint(obj, "reward_bound", where);
  std::uint32_t horizon = static_cast<std::uint32_t>(require_uint(obj, "horizon", where));
  auto env = std::make_shared<TableEnvironment>(name, actions, perceptions, std::move(rewards),
                                                bound, horizon);
  const json& rows = require(obj, "conditionals", where);
  if (!rows.is_object()) throw SchemaError(where + ".conditionals must be an object");
  for (const auto& row : rows.items()) {
    auto condition = parse_symbol_key(row.key(), where);
    if (!row.value().is_object()) {
      throw SchemaError(where + ".conditionals rows must be objects");
    }
    for (const auto& cell : row.value().items()) {
      auto symbol = parse_symbol_key(cell.key(), where);
      if (symbol.size() != 1) {
        throw SchemaError(where + ": conditional cell key must be one perception symbol");
      }
      env->add_conditional(condition, symbol[0], parse_rat(cell.value(), where + ".conditionals"));
    }
  }
  env->validate();
  return env;
}

std::shared_ptr<Environment> environment_from_value(const json& ref, const fs::path& base,
                                                    const std::string& where) {
  if (!ref.is_object()) throw SchemaError(where + " must be an object");
  if (ref.contains("file")) {
    check_fields(ref, where, {"file"});
    fs::path path = base / require_string(ref, "file", where);
    json parsed = parse_json_text(read_file(path), path.string());
    return environment_from_object(parsed, path.string());
  }
  return environment_from_object(ref, where);
}

std::shared_ptr<Policy> policy_from_object(const json& obj, const std::string& where) {
  std::string kind = require_string(obj, "kind", where);
  if (kind == "const") {
    check_fields(obj, where, {"kind", "action", "action_count", "perception_count"});
    return std::make_shared<ConstPolicy>(
        static_cast<std::uint32_t>(require_uint(obj, "action", where)),
        static_cast<std::uint32_t>(require_uint(obj, "action_count", where)),
        static_cast<std::uint32_t>(require_uint(obj, "perception_count", where)));
  }
  if (kind == "table") {
    check_fields(obj, where, {"kind", "action_count", "perception_count", "horizon", "table"});
    const json& table_v = require(obj, "table", where);
    if (!table_v.is_object()) throw SchemaError(where + ".table must be an object");
    std::map<std::vector<std::uint32_t>, std::uint32_t> table;
    for (const auto& cell : table_v.items()) {
      if (!cell.value().is_number_unsigned()) {
        throw SchemaError(where + ".table values must be action symbols");
      }
      table[parse_symbol_key(cell.key(), where)] =
          static_cast<std::uint32_t>(cell.value().get<std::uint64_t>());
    }
    return std::make_shared<TablePolicy>(
        static_cast<std::uint32_t>(require_uint(obj, "action_count", where)),
        static_cast<std::uint32_t>(require_uint(obj, "perception_count", where)),
        static_cast<std::uint32_t>(require_uint(obj, "horizon", where)), std::move(table));
  }
  throw SchemaError(where + ": unknown policy kind \"" + kind + "\"");
}

std::shared_ptr<Policy> policy_from_value(const json& ref, const fs::path& base,
                                          const std::string& where) {
  if (!ref.is_object()) throw SchemaError(where + " must be an object");
  if (ref.contains("file")) {
    check_fields(ref, where, {"file"});
    fs::path path = base / require_string(ref, "file", where);
    json parsed = parse_json_text(read_file(path), path.string());
    return policy_from_object(parsed, path.string());
  }
  return policy_from_object(ref, where);
}

// ---------- models ----------

struct ModelChoice {
  std::unique_ptr<ComplexityModel> model;
  Budget budget;
  bool machine_backed = false;
};

Budget budget_from(const json& obj, const std::string& where) {
  Budget budget;
  budget.max_program_bits = static_cast<std::uint32_t>(require_uint(obj, "max_program_bits", where));
  budget.max_steps = require_uint(obj, "max_steps", where);
  return budget;
}

ModelChoice model_from(const json& obj, const std::string& where,
                       const ComplexityEngine& engine) {
  if (!obj.is_object()) throw SchemaError(where + " must be an object");
  std::string kind = require_string(obj, "kind", where);
  ModelChoice choice;
  if (kind == "lz78") {
    check_fields(obj, where, {"kind"});
    choice.model = std::make_unique<LZ78Model>();
    return choice;
  }
  if (kind == "exact" || kind == "levin") {
    check_fields(obj, where, {"kind", "max_program_bits", "max_steps"});
    choice.budget = budget_from(obj, where);
    choice.machine_backed = true;
    if (kind == "exact") {
      choice.model = std::make_unique<ExactBoundedModel>(engine, choice.budget);
    } else {
      choice.model = std::make_unique<LevinBoundedModel>(engine, choice.budget);
    }
    return choice;
  }
  throw SchemaError(where + ": unknown model kind \"" + kind + "\"");
}

// ---------- families ----------

PlayerFamily family_from_ref(const json& ref, const fs::path& base, const std::string& where) {
  if (!ref.is_object()) throw SchemaError(where + " must be an object");
  if (ref.contains("generator")) {
    check_fields(ref, where, {"generator", "n"});
    std::string generator = require_string(ref, "generator", where);
    std::uint32_t n = static_cast<std::uint32_t>(require_uint(ref, "n", where));
    if (generator == "pairs") return PlayerFamily::all_pairs(n);
    if (generator == "singletons") return PlayerFamily::all_singletons(n);
    throw SchemaError(where + ": unknown family generator \"" + generator + "\"");
  }
  check_fields(ref, where, {"name", "players"});
  PlayerFamily family;
  family.name = ref.contains("name") ? require_string(ref, "name", where) : "inline";
  const json& players = require(ref, "players", where);
  if (!players.is_array()) throw SchemaError(where + ".players must be an array");
  std::size_t index = 0;
  for (const auto& p : players) {
    family.members.push_back(
        player_from_ref(p, base, where + ".players[" + std::to_string(index) + "]"));
    ++index;
  }
  family.validate();
  return family;
}

// r is either a rational string or "max": the largest finite member
// complexity under the model.
SymReal threshold_from(const json& v, const PlayerFamily& family, const ComplexityModel& model,
                       const std::string& where) {
  if (v.is_string() && v.get<std::string>() == "max") {
    std::optional<SymReal> best;
    for (const auto& member : family.members) {
      SymReal cost = model(member.encoding());
      if (!cost.finite()) continue;
      if (!best || *best < cost) best = cost;
    }
    if (!best) {
      throw std::invalid_argument(where + ": no family member has finite complexity, r=max undefined");
    }
    return *best;
  }
  return SymReal(parse_rat(v, where));
}

// ---------- theorem report rendering ----------

json theorem_report_json(const TheoremReport& report) {
  json out;
  out["check"] = report.check;
  out["model"] = report.model_name;
  out["family"] = report.family_name;
  out["family_size"] = report.family_size;
  out["claim"] = report.claim;
  out["exhaustive"] = report.exhaustive;
  out["qualifying_count"] = report.qualifying_count;
  out["k"] = report.k ? json(*report.k) : json(nullptr);
  out["r"] = sym_json(report.r);
  out["c"] = report.c ? json(*report.c) : json(nullptr);
  out["witness_index"] = report.witness_index ? json(*report.witness_index) : json(nullptr);
  out["witness"] = report.witness ? player_json(*report.witness) : json(nullptr);
  if (report.claim) {
    out["witness_complexity"] = sym_json(report.witness_complexity);
    out["bound_target"] = sym_json(report.bound_target);
    out["slack"] = sym_json(report.slack);
  } else {
    out["witness_complexity"] = nullptr;
    out["bound_target"] = nullptr;
    out["slack"] = nullptr;
  }
  out["counting_lhs"] = report.counting_lhs ? sym_json(*report.counting_lhs) : json(nullptr);
  out["counting_residual"] =
      report.counting_residual ? sym_json(*report.counting_residual) : json(nullptr);
  out["witness_conditional_x"] =
      report.witness_conditional_x ? sym_json(*report.witness_conditional_x) : json(nullptr);
  out["context_levin"] = report.context_levin ? sym_json(*report.context_levin) : json(nullptr);
  out["family_description_estimate"] = report.family_description_estimate
                                           ? json(*report.family_description_estimate)
                                           : json(nullptr);
  return out;
}

// ---------- kind handlers ----------

json run_complexity(const json& config, const ComplexityEngine& engine) {
  check_fields(config, "config",
               {"kind", "op", "target", "context", "max_program_bits", "max_steps", "output",
                "workers"});
  std::string op = require_string(config, "op", "config");
  BitString target = parse_bits(require(config, "target", "config"), "config.target");
  Budget budget = budget_from(config, "config");
  std::vector<BitString> context;
  if (config.contains("context")) {
    const json& ctx = config.at("context");
    if (!ctx.is_array()) throw SchemaError("config.context must be an array");
    for (const auto& c : ctx) context.push_back(parse_bits(c, "config.context[]"));
  }
  json body;
  body["op"] = op;
  body["target"] = target.str();
  json ctx_json = json::array();
  for (const auto& c : context) ctx_json.push_back(c.str());
  body["context"] = ctx_json;
  body["budget"] = json{{"max_program_bits", budget.max_program_bits},
                        {"max_steps", budget.max_steps}};
  if (op == "plain" || op == "levin") {
    ComplexityResult result = op == "plain" ? engine.plain(target, context, budget)
                                            : engine.levin(target, context, budget);
    body["value"] = sym_json(result.value);
    body["search_exact"] = result.exact;
    body["witness"] = result.witness ? json(result.witness->str()) : json(nullptr);
    body["witness_time"] = result.witness_time ? json(*result.witness_time) : json(nullptr);
    return body;
  }
  if (op == "mass") {
    if (!context.empty()) {
      throw SchemaError("config.context is not accepted for op=mass (unconditional only)");
    }
    Rat mass = engine.mass(target, budget);
    body["value"] = rat_json(mass);
    body["search_exact"] = true;
    body["witness"] = nullptr;
    body["witness_time"] = nullptr;
    return body;
  }
  throw SchemaError("config.op must be one of plain, levin, mass");
}

json run_measures(const json& config, const fs::path& base, const ComplexityEngine& engine) {
  check_fields(config, "config", {"kind", "model", "a", "b", "x", "output", "workers"});
  ModelChoice choice = model_from(require(config, "model", "config"), "config.model", engine);
  Player a = player_from_ref(require(config, "a", "config"), base, "config.a");
  Player b = player_from_ref(require(config, "b", "config"), base, "config.b");
  BitString x;
  if (config.contains("x")) {
    x = parse_bits(config.at("x"), "config.x");
  } else {
    Player shared = intersect(a, b);
    if (shared.empty()) {
      throw std::invalid_argument("config.x omitted and the players do not interact");
    }
    x = shared.members().front();
  }
  ExchangeReport report = exchange_report(a, b, x, *choice.model);
  json body;
  body["model"] = report.model_name;
  body["x"] = x.str();
  body["card_a"] = report.card_a;
  body["card_b"] = report.card_b;
  body["card_shared"] = report.card_ab;
  body["knowledge"] = sym_json(report.knowledge);
  body["deficiency_shared"] = sym_json(report.def_subset);
  body["info_x"] = sym_json(report.info_x);
  body["deficiency_x_a"] = sym_json(report.def_x_a);
  body["deficiency_x_ab"] = sym_json(report.def_x_ab);
  body["eq2_residual"] = sym_json(report.eq2_residual);
  body["eq5_residual"] = sym_json(report.eq5_residual);
  body["eq6_residual"] = report.eq6_residual ? sym_json(*report.eq6_residual) : json(nullptr);
  body["corollary_lhs"] = sym_json(report.corollary_lhs);
  body["corollary_residual"] = sym_json(report.corollary_residual);
  return body;
}

json run_game(const json& config) {
  check_fields(config, "config", {"kind", "fixture", "normal_form", "output"});
  if (config.contains("fixture") == config.contains("normal_form")) {
    throw SchemaError("config must set exactly one of fixture, normal_form");
  }
  Player a, b;
  std::string label;
  if (config.contains("fixture")) {
    std::string fixture = require_string(config, "fixture", "config");
    if (fixture != "rps") throw SchemaError("unknown game fixture \"" + fixture + "\"");
    a = rps_alpha();
    b = rps_beta();
    label = "rps";
  } else {
    const json& nf = config.at("normal_form");
    check_fields(nf, "config.normal_form", {"action_bits", "row_payoff", "column_payoff"});
    NormalFormGame game;
    game.action_bits = static_cast<std::uint32_t>(require_uint(nf, "action_bits", "config.normal_form"));
    auto parse_table = [&](const json& v, const std::string& where) {
      if (!v.is_array()) throw SchemaError(where + " must be an array of arrays");
      std::vector<std::vector<Rat>> table;
      for (const auto& row : v) {
        if (!row.is_array()) throw SchemaError(where + " must be an array of arrays");
        std::vector<Rat> out;
        for (const auto& cell : row) out.push_back(parse_rat(cell, where));
        table.push_back(std::move(out));
      }
      return table;
    };
    game.row_payoff = parse_table(require(nf, "row_payoff", "config.normal_form"),
                                  "config.normal_form.row_payoff");
    game.column_payoff = parse_table(require(nf, "column_payoff", "config.normal_form"),
                                     "config.normal_form.column_payoff");
    std::tie(a, b) = nash_players(game);
    label = "normal-form";
  }
  Player shared = intersect(a, b);
  json members = json::array();
  for (const auto& m : shared.members()) members.push_back(m.str());
  json body;
  body["game"] = label;
  body["n"] = a.n();
  body["card_a"] = a.size();
  body["card_b"] = b.size();
  body["card_shared"] = shared.size();
  body["shared"] = members;
  return body;
}

json run_cybernetic(const json& config, const fs::path& base) {
  check_fields(config, "config",
               {"kind", "environment", "policy", "m", "tau", "variant", "output"});
  auto env = environment_from_value(require(config, "environment", "config"), base,
                                    "config.environment");
  std::uint32_t m = static_cast<std::uint32_t>(require_uint(config, "m", "config"));
  Rat tau = parse_rat(require(config, "tau", "config"), "config.tau");
  std::string variant_name = require_string(config, "variant", "config");
  if (variant_name != "B" && variant_name != "D") {
    throw SchemaError("config.variant must be \"B\" or \"D\"");
  }
  EnvSetVariant variant = variant_name == "B" ? EnvSetVariant::B : EnvSetVariant::D;
  const json& policy_ref = require(config, "policy", "config");
  std::shared_ptr<Policy> policy;
  std::string policy_label;
  if (policy_ref.is_string() && policy_ref.get<std::string>() == "optimal") {
    policy = std::make_shared<TablePolicy>(optimal_policy(*env, m));
    policy_label = "optimal";
  } else {
    policy = policy_from_value(policy_ref, base, "config.policy");
    policy_label = "explicit";
  }
  InteractionResult interaction = interacts_at(*policy, *env, m, tau, variant);
  json body;
  body["environment"] = env->name();
  body["policy"] = policy_label;
  body["m"] = m;
  body["tau"] = rat_json(tau);
  body["variant"] = variant_name;
  body["value"] = rat_json(value(*policy, *env, m));
  body["optimal_value"] = rat_json(optimal_value(*env, m));
  body["card_agent"] = interaction.agent_size;
  body["card_env_set"] = interaction.env_size;
  body["card_shared"] = interaction.shared;
  body["interacts"] = interaction.interacts;
  body["witness"] = interaction.witness ? json(interaction.witness->str()) : json(nullptr);
  return body;
}

json run_theorem(const json& config, const fs::path& base, const ComplexityEngine& engine,
                 int which) {
  std::set<std::string> allowed = {"kind", "model", "family", "output", "workers"};
  if (which == 1) { allowed.insert("x"); allowed.insert("r"); }
  if (which == 2) { allowed.insert("a"); allowed.insert("b"); allowed.insert("x"); }
  if (which == 3) { allowed.insert("a"); allowed.insert("b"); }
  if (which == 4) { allowed.insert("a"); allowed.insert("c"); allowed.insert("r"); }
  check_fields(config, "config", allowed);
  ModelChoice choice = model_from(require(config, "model", "config"), "config.model", engine);
  PlayerFamily family = family_from_ref(require(config, "family", "config"), base, "config.family");
  TheoremReport report;
  switch (which) {
    case 1: {
      BitString x = parse_bits(require(config, "x", "config"), "config.x");
      SymReal r = threshold_from(require(config, "r", "config"), family, *choice.model, "config.r");
      report = check_covering(family, x, r, *choice.model);
      break;
    }
    case 2: {
      Player a = player_from_ref(require(config, "a", "config"), base, "config.a");
      Player b = player_from_ref(require(config, "b", "config"), base, "config.b");
      BitString x = parse_bits(require(config, "x", "config"), "config.x");
      report = check_approximation(family, a, b, x, *choice.model);
      break;
    }
    case 3: {
      Player a = player_from_ref(require(config, "a", "config"), base, "config.a");
      Player b = player_from_ref(require(config, "b", "config"), base, "config.b");
      report = check_info_bound(family, a, b, *choice.model);
      break;
    }
    default: {
      Player a = player_from_ref(require(config, "a", "config"), base, "config.a");
      std::uint64_t c = require_uint(config, "c", "config");
      SymReal r = threshold_from(require(config, "r", "config"), family, *choice.model, "config.r");
      report = check_simplification(family, a, c, r, *choice.model);
      break;
    }
  }
  return theorem_report_json(report);
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += "\"\"";
    else out += ch;
  }
  return out + "\"";
}

std::string run_aixi_csv(const json& config, const fs::path& base, const std::string& digest) {
  check_fields(config, "config",
               {"kind", "environments", "weights", "taus", "m_min", "m_max", "output"});
  const json& envs = require(config, "environments", "config");
  if (!envs.is_array() || envs.empty()) {
    throw SchemaError("config.environments must be a nonempty array");
  }
  std::vector<std::shared_ptr<const Environment>> members;
  std::size_t index = 0;
  for (const auto& e : envs) {
    members.push_back(environment_from_value(
        e, base, "config.environments[" + std::to_string(index) + "]"));
    ++index;
  }
  WeightedFamily family;
  if (config.contains("weights")) {
    const json& w = config.at("weights");
    if (w.is_string() && w.get<std::string>() == "default") {
      family = WeightedFamily::with_default_weights(std::move(members));
    } else if (w.is_array()) {
      family.environments = std::move(members);
      for (const auto& cell : w) family.weights.push_back(parse_rat(cell, "config.weights[]"));
    } else {
      throw SchemaError("config.weights must be \"default\" or an array of rationals");
    }
  } else {
    family.environments = std::move(members);  // equal weights
  }
  std::vector<Rat> taus;
  const json& taus_v = require(config, "taus", "config");
  if (!taus_v.is_array() || taus_v.empty()) {
    throw SchemaError("config.taus must be a nonempty array");
  }
  for (const auto& t : taus_v) taus.push_back(parse_rat(t, "config.taus[]"));
  std::uint32_t m_min = static_cast<std::uint32_t>(require_uint(config, "m_min", "config"));
  std::uint32_t m_max = static_cast<std::uint32_t>(require_uint(config, "m_max", "config"));

  auto rows = universality_experiment(family, taus, m_min, m_max);
  std::ostringstream out;
  out << "# machine=" << kMachineVersion << " config=" << digest
      << " generated_at=" << timestamp_utc() << "\n";
  out << "environment,tau,m,defined,interacts,witness,first_interacting_m\n";
  for (const auto& row : rows) {
    for (const auto& [m, entry] : row.per_m) {
      out << csv_escape(row.env_name) << "," << rat_to_string(row.tau) << "," << m << ","
          << (entry.defined ? "yes" : "no") << ","
          << (entry.defined ? (entry.interacts ? "yes" : "no") : "") << ","
          << (entry.witness ? entry.witness->str() : "") << ","
          << (row.first_interacting_m ? std::to_string(*row.first_interacting_m) : "") << "\n";
    }
  }
  return out.str();
}

}  // namespace

RunResult run_experiment(const std::string& config_text, const fs::path& base_dir,
                         ResultCache* cache, std::optional<unsigned> workers) {
  json config = parse_json_text(config_text, "config");
  if (!config.is_object()) throw SchemaError("config must be a JSON object");
  std::string kind = require_string(config, "kind", "config");
  std::string digest = digest_hex(config_text);

  unsigned worker_count = 0;
  if (workers) {
    worker_count = *workers;
  } else if (config.contains("workers")) {
    worker_count = static_cast<unsigned>(require_uint(config, "workers", "config"));
  }
  ComplexityEngine engine(cache, worker_count);

  RunResult result;
  result.kind = kind;
  if (kind == "aixi") {
    result.csv = true;
    result.report = run_aixi_csv(config, base_dir, digest);
  } else {
    json body;
    if (kind == "complexity") {
      body = run_complexity(config, engine);
    } else if (kind == "measures") {
      body = run_measures(config, base_dir, engine);
    } else if (kind == "game") {
      body = run_game(config);
    } else if (kind == "cybernetic") {
      body = run_cybernetic(config, base_dir);
    } else if (kind == "theorem1") {
      body = run_theorem(config, base_dir, engine, 1);
    } else if (kind == "theorem2") {
      body = run_theorem(config, base_dir, engine, 2);
    } else if (kind == "theorem3") {
      body = run_theorem(config, base_dir, engine, 3);
    } else if (kind == "theorem4") {
      body = run_theorem(config, base_dir, engine, 4);
    } else {
      throw SchemaError("unknown config kind \"" + kind + "\"");
    }
    json report;
    report["header"] = report_header(digest);
    report["kind"] = kind;
    report["result"] = body;
    result.report = report.dump(2) + "\n";
  }

  if (config.contains("output")) {
    const json& out_v = config.at("output");
    if (!out_v.is_string()) throw SchemaError("config.output must be a string path");
    fs::path out_path = base_dir / out_v.get<std::string>();
    if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw MissingInputError("cannot write output file " + out_path.string());
    out << result.report;
    result.output_path = out_path;
  }
  return result;
}

std::shared_ptr<Environment> environment_from_json(const std::string& text) {
  json parsed = parse_json_text(text, "environment");
  return environment_from_object(parsed, "environment");
}

std::shared_ptr<Policy> policy_from_json(const std::string& text) {
  json parsed = parse_json_text(text, "policy");
  if (!parsed.is_object()) throw SchemaError("policy must be a JSON object");
  return policy_from_object(parsed, "policy");
}

std::string digest_hex(const std::string& text) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 1099511628211ull;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

}  // namespace islab
