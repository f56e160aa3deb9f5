// Command-line front end: simulate, cohort, summarize, enumerate-tiers.
//
// Exit codes: 0 success, 1 data error (bad file contents, unwritable
// paths), 2 usage error (bad flags or names).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "castlesim/trace_io.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw castlesim::ConfigError(out_path, "cannot open output file for writing");
  out << content;
  if (!out) throw castlesim::ConfigError(out_path, "write failed");
}

struct SimulateOptions {
  double skill = -1.0;
  std::string profile;
  std::string policy = "fixed";
  int games = 1;
  uint64_t seed = 0;
  std::string out = "-";
  std::string config_path;
};

int run_simulate(const SimulateOptions& opt) {
  const auto kind = castlesim::policy_from_string(opt.policy);
  if (!kind) throw UsageError("unknown policy '" + opt.policy + "' (fixed, dda-v1, dda-v2)");
  if (opt.games < 1) throw UsageError("--games must be >= 1");
  if ((opt.skill >= 0.0) == !opt.profile.empty()) {
    throw UsageError("exactly one of --skill or --profile is required");
  }

  castlesim::CombatParams params;
  if (!opt.config_path.empty()) {
    params = castlesim::load_config_file(opt.config_path).combat;
  }

  castlesim::PlayerAgent agent;
  if (!opt.profile.empty()) {
    const auto label = castlesim::profile_from_string(opt.profile);
    if (!label || *label == castlesim::ProfileLabel::kCustom) {
      throw UsageError("unknown profile '" + opt.profile + "' (weak, average, strong)");
    }
    castlesim::Rng rng(castlesim::derive_stream_seed(
        opt.seed, {castlesim::StreamPurpose::kAgentSetup, 0, 0, 0}));
    agent = castlesim::sample_agent(0, castlesim::SkillProfile::builtin(*label), rng);
  } else {
    if (opt.skill > 1.0) throw UsageError("--skill must be in [0, 1]");
    agent.skill = opt.skill;
    agent.profile = castlesim::ProfileLabel::kCustom;
  }

  std::string lines;
  for (int g = 0; g < opt.games; ++g) {
    castlesim::Rng rng(castlesim::derive_stream_seed(
        opt.seed,
        {castlesim::StreamPurpose::kGamePlay, 0, 0, static_cast<uint16_t>(g)}));
    castlesim::GameResult result;
    result.game_id = "a000-c0-g" + std::to_string(g);
    result.agent_id = 0;
    result.profile = agent.profile;
    result.skill = agent.skill;
    result.condition = *kind;
    result.condition_index = 0;
    result.game_index = g;
    result.trace = castlesim::play_game(agent.skill, castlesim::make_policy(*kind), params, rng);
    result.levels_reached = result.trace.levels_reached;
    result.duration_min = result.trace.total_duration_s / 60.0;
    result.difficulty = castlesim::difficulty_proxy(result.trace);
    lines += castlesim::trace_record_to_line(result) + "\n";
  }
  write_output(opt.out, lines);
  return kExitOk;
}

struct CohortOptions {
  std::string config_path;
  std::string out_dir;
  int threads = 1;
  bool print_config = false;
  std::optional<uint64_t> seed_override;
};

int run_cohort_cmd(const CohortOptions& opt) {
  if (opt.print_config) {
    castlesim::CohortConfig defaults;
    write_output(opt.out_dir.empty() ? "-" : opt.out_dir,
                 castlesim::config_to_json(defaults).dump(2) + "\n");
    return kExitOk;
  }
  if (opt.config_path.empty()) throw UsageError("--config is required (or use --print-config)");
  if (opt.out_dir.empty()) throw UsageError("--out is required");
  if (opt.threads < 1) throw UsageError("--threads must be >= 1");

  castlesim::CohortConfig config = castlesim::load_config_file(opt.config_path);
  if (opt.seed_override) config.master_seed = *opt.seed_override;
  const castlesim::CohortResults results = castlesim::run_cohort(config, opt.threads);
  castlesim::write_cohort_results(results, opt.out_dir);
  std::cerr << "wrote " << results.games.size() << " trace records to " << opt.out_dir << "\n";
  return kExitOk;
}

struct SummarizeOptions {
  std::string in_dir;
  std::string format = "text";
  std::string out = "-";
};

int run_summarize(const SummarizeOptions& opt) {
  if (opt.format != "csv" && opt.format != "text") {
    throw UsageError("unknown format '" + opt.format + "' (csv, text)");
  }
  const castlesim::CohortResults results = castlesim::read_cohort_dir(opt.in_dir);
  const castlesim::SummaryTable table = castlesim::summarize(results);
  write_output(opt.out, opt.format == "csv" ? castlesim::render_summary_csv(table)
                                            : castlesim::render_summary_text(table));
  return kExitOk;
}

struct EnumerateOptions {
  std::string scheme;
  std::string format = "text";
  std::string out = "-";
};

int run_enumerate(const EnumerateOptions& opt) {
  const auto variant = castlesim::scheme_from_string(opt.scheme);
  if (!variant) throw UsageError("unknown scheme '" + opt.scheme + "' (v1, v2)");
  if (opt.format != "csv" && opt.format != "text") {
    throw UsageError("unknown format '" + opt.format + "' (csv, text)");
  }
  const castlesim::TierScheme& scheme = *variant == castlesim::SchemeVariant::kV1
                                            ? castlesim::TierScheme::v1()
                                            : castlesim::TierScheme::v2();
  write_output(opt.out, opt.format == "csv" ? castlesim::render_tier_table_csv(scheme)
                                            : castlesim::render_tier_table_text(scheme));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"castlesim: tier-based difficulty adjustment simulation lab"};
  app.require_subcommand(1);

  SimulateOptions sim;
  CLI::App* simulate = app.add_subcommand("simulate", "Run games for one agent, write JSONL traces");
  simulate->add_option("--skill", sim.skill, "fixed skill in [0, 1]");
  simulate->add_option("--profile", sim.profile, "sample skill from a profile: weak, average, strong");
  simulate->add_option("--policy", sim.policy, "spawn policy: fixed, dda-v1, dda-v2");
  simulate->add_option("--games", sim.games, "number of games");
  simulate->add_option("--seed", sim.seed, "master seed");
  simulate->add_option("--out", sim.out, "output file, '-' for stdout");
  simulate->add_option("--config", sim.config_path, "config file supplying combat parameters");

  CohortOptions cohort;
  CLI::App* cohort_cmd = app.add_subcommand("cohort", "Run a full cohort study from a config file");
  cohort_cmd->add_option("--config", cohort.config_path, "config file (JSON)");
  cohort_cmd->add_option("--out", cohort.out_dir, "results directory");
  cohort_cmd->add_option("--threads", cohort.threads, "worker threads");
  cohort_cmd->add_flag("--print-config", cohort.print_config, "print the default config and exit");
  uint64_t seed_override = 0;
  CLI::Option* seed_opt =
      cohort_cmd->add_option("--seed", seed_override, "override the config master seed");

  SummarizeOptions summarize_opt;
  CLI::App* summarize_cmd =
      app.add_subcommand("summarize", "Aggregate a results directory into a summary table");
  summarize_cmd->add_option("--in", summarize_opt.in_dir, "results directory")->required();
  summarize_cmd->add_option("--format", summarize_opt.format, "csv or text");
  summarize_cmd->add_option("--out", summarize_opt.out, "output file, '-' for stdout");

  EnumerateOptions enumerate_opt;
  CLI::App* enumerate_cmd =
      app.add_subcommand("enumerate-tiers", "Print the full (gate, player) -> tier grid");
  enumerate_cmd->add_option("--scheme", enumerate_opt.scheme, "v1 or v2")->required();
  enumerate_cmd->add_option("--format", enumerate_opt.format, "csv or text");
  enumerate_cmd->add_option("--out", enumerate_opt.out, "output file, '-' for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim);
    if (cohort_cmd->parsed()) {
      if (seed_opt->count() > 0) cohort.seed_override = seed_override;
      return run_cohort_cmd(cohort);
    }
    if (summarize_cmd->parsed()) return run_summarize(summarize_opt);
    if (enumerate_cmd->parsed()) return run_enumerate(enumerate_opt);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
