// islab: single front-end binary. Subcommands cover experiment configs
// (run), raw reference-machine execution (machine run), the prefix-free
// encoders (encode pair/set), and cache administration (cache
// stats/verify/clear).

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "islab/cache.hpp"
#include "islab/encoding.hpp"
#include "islab/errors.hpp"
#include "islab/experiments.hpp"
#include "islab/machine.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

islab::BitString bits_arg(const std::string& text, const std::string& what) {
  if (text.find_first_not_of("01") != std::string::npos) {
    throw islab::SchemaError(what + " must contain only 0s and 1s");
  }
  return islab::BitString::parse(text);
}

// The store lives where ISLAB_CACHE_DIR points; without it the cache is
// memory-only for this process (nothing is written to disk un-asked).
islab::ResultCache open_cache() {
  if (auto dir = islab::ResultCache::env_dir()) return islab::ResultCache(*dir);
  return islab::ResultCache();
}

int cmd_run(const std::string& config_path, std::optional<unsigned> workers) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) throw islab::MissingInputError("cannot open config " + config_path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  fs::path base = fs::path(config_path).parent_path();
  if (base.empty()) base = ".";
  islab::ResultCache cache = open_cache();
  islab::RunResult result = islab::run_experiment(buffer.str(), base, &cache, workers);
  std::cout << result.report;
  return 0;
}

int cmd_machine_run(const std::string& program, const std::string& aux,
                    std::uint64_t max_steps) {
  islab::RunOutcome outcome =
      islab::run(bits_arg(program, "--program"), bits_arg(aux, "--aux"), max_steps);
  const char* kind = outcome.kind == islab::RunKind::Halted      ? "halted"
                     : outcome.kind == islab::RunKind::OutOfBudget ? "out-of-budget"
                                                                   : "failed";
  json report;
  report["machine"] = std::string(islab::kMachineVersion);
  report["kind"] = kind;
  report["output"] = outcome.output.str();
  report["steps"] = outcome.steps;
  report["print_steps"] = outcome.print_steps;
  std::cout << report.dump(2) << "\n";
  return 0;
}

int cmd_cache_stats() {
  islab::ResultCache cache = open_cache();
  islab::CacheStats stats = cache.stats();
  json report;
  report["machine"] = std::string(islab::kMachineVersion);
  report["directory"] =
      cache.directory() ? json(cache.directory()->string()) : json(nullptr);
  report["total"] = stats.total;
  report["per_op"] = stats.per_op;
  report["per_version"] = stats.per_version;
  report["corrupt_lines"] = stats.corrupt_lines;
  std::cout << report.dump(2) << "\n";
  return 0;
}

int cmd_cache_verify() {
  islab::ResultCache cache = open_cache();
  islab::VerifyReport rep = cache.verify();
  json report;
  report["machine"] = std::string(islab::kMachineVersion);
  report["checked"] = rep.checked;
  report["passed"] = rep.passed;
  report["failed"] = rep.failed;
  report["skipped"] = rep.skipped;
  report["failures"] = rep.failures;
  std::cout << report.dump(2) << "\n";
  return rep.ok() ? 0 : 5;
}

int cmd_cache_clear() {
  islab::ResultCache cache = open_cache();
  std::size_t removed = cache.clear_stale();
  json report;
  report["machine"] = std::string(islab::kMachineVersion);
  report["removed"] = removed;
  std::cout << report.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"interaction-as-intersection workbench"};
  app.require_subcommand(1);

  unsigned workers = 0;
  CLI::Option* workers_opt = app.add_option(
      "--workers", workers,
      "parallel workers for complexity searches (default: all cores)");

  std::string config_path;
  CLI::App* run_cmd = app.add_subcommand("run", "execute a declarative experiment config");
  run_cmd->add_option("config", config_path, "JSON config file")->required();

  CLI::App* machine_cmd = app.add_subcommand("machine", "reference machine utilities");
  machine_cmd->require_subcommand(1);
  std::string program_bits;
  std::string aux_bits;
  std::uint64_t max_steps = 10000;
  CLI::App* machine_run = machine_cmd->add_subcommand("run", "execute one program");
  machine_run->add_option("--program", program_bits, "program bits")->required();
  machine_run->add_option("--aux", aux_bits, "auxiliary input bits");
  machine_run->add_option("--max-steps", max_steps, "step budget");

  CLI::App* encode_cmd = app.add_subcommand("encode", "prefix-free encoders");
  encode_cmd->require_subcommand(1);
  std::string pair_x;
  std::string pair_y;
  CLI::App* encode_pair_cmd = encode_cmd->add_subcommand("pair", "encode an ordered pair");
  encode_pair_cmd->add_option("x", pair_x, "first component")->required();
  encode_pair_cmd->add_option("y", pair_y, "second component");
  std::vector<std::string> set_members;
  CLI::App* encode_set_cmd = encode_cmd->add_subcommand("set", "encode a finite set");
  encode_set_cmd->add_option("members", set_members, "set members");

  CLI::App* cache_cmd = app.add_subcommand("cache", "result cache administration");
  cache_cmd->require_subcommand(1);
  CLI::App* cache_stats_cmd = cache_cmd->add_subcommand("stats", "entry counts by kind");
  CLI::App* cache_verify_cmd =
      cache_cmd->add_subcommand("verify", "re-run every stored witness");
  CLI::App* cache_clear_cmd =
      cache_cmd->add_subcommand("clear", "drop entries from older machine versions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run_cmd) {
      std::optional<unsigned> w;
      if (workers_opt->count() > 0) w = workers;
      return cmd_run(config_path, w);
    }
    if (*machine_run) return cmd_machine_run(program_bits, aux_bits, max_steps);
    if (*encode_pair_cmd) {
      std::cout << islab::encode_pair(bits_arg(pair_x, "x"), bits_arg(pair_y, "y")).str()
                << "\n";
      return 0;
    }
    if (*encode_set_cmd) {
      std::vector<islab::BitString> members;
      members.reserve(set_members.size());
      for (const auto& m : set_members) members.push_back(bits_arg(m, "member"));
      std::cout << islab::encode_set(std::move(members)).str() << "\n";
      return 0;
    }
    if (*cache_stats_cmd) return cmd_cache_stats();
    if (*cache_verify_cmd) return cmd_cache_verify();
    if (*cache_clear_cmd) return cmd_cache_clear();
  } catch (const islab::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const islab::MissingInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const islab::ScaleLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const islab::VerificationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
