#include "castlesim/experiments.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

namespace castlesim {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

std::string make_game_id(int agent_id, int condition_index, int game_index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "a%03d-c%d-g%d", agent_id, condition_index, game_index);
  return buf;
}

}  // namespace

void CohortConfig::validate() const {
  require(weak_count >= 0 && average_count >= 0 && strong_count >= 0,
          "profile counts must be >= 0");
  require(total_agents() >= 1, "cohort needs at least one agent");
  require(games_per_condition >= 1, "games_per_condition must be >= 1");
  require(!conditions.empty(), "conditions list must not be empty");
  require(learning_rate >= 0.0, "learning_rate must be >= 0");
  require(total_agents() < (1 << 24), "too many agents for stream labels");
  require(static_cast<int>(conditions.size()) < (1 << 16), "too many conditions");
  require(games_per_condition < (1 << 16), "too many games per condition");
  combat.validate();
}

CohortResults run_cohort(const CohortConfig& config, int threads) {
  config.validate();
  require(threads >= 1, "threads must be >= 1");

  // Agents are numbered weak block first, then average, then strong. Skill
  // comes from a per-agent set-up stream so the roster is independent of
  // how many games get played.
  std::vector<PlayerAgent> agents;
  agents.reserve(config.total_agents());
  for (int i = 0; i < config.total_agents(); ++i) {
    SkillProfile profile = SkillProfile::weak();
    if (i >= config.weak_count + config.average_count) {
      profile = SkillProfile::strong();
    } else if (i >= config.weak_count) {
      profile = SkillProfile::average();
    }
    Rng rng(derive_stream_seed(config.master_seed,
                               StreamLabel{StreamPurpose::kAgentSetup,
                                           static_cast<uint32_t>(i), 0, 0}));
    agents.push_back(sample_agent(i, profile, rng, config.learning_rate));
  }

  const int conditions = static_cast<int>(config.conditions.size());
  const int games_per = config.games_per_condition;
  const size_t total = static_cast<size_t>(config.total_games());

  CohortResults results;
  results.config = config;
  results.games.resize(total);

  auto run_one = [&](size_t index) {
    const int game_index = static_cast<int>(index % games_per);
    const int condition_index = static_cast<int>((index / games_per) % conditions);
    const int agent_index = static_cast<int>(index / (static_cast<size_t>(games_per) * conditions));
    const PlayerAgent& agent = agents[agent_index];

    // Conditions run in listed order, so learning (when enabled) counts
    // every game played before this one.
    const int plays_before = condition_index * games_per + game_index;
    const double skill = apply_learning(agent, plays_before).skill;

    Rng rng(derive_stream_seed(
        config.master_seed,
        StreamLabel{StreamPurpose::kGamePlay, static_cast<uint32_t>(agent_index),
                    static_cast<uint16_t>(condition_index),
                    static_cast<uint16_t>(game_index)}));

    GameResult& result = results.games[index];
    result.game_id = make_game_id(agent.agent_id, condition_index, game_index);
    result.agent_id = agent.agent_id;
    result.profile = agent.profile;
    result.skill = skill;
    result.condition = config.conditions[condition_index];
    result.condition_index = condition_index;
    result.game_index = game_index;
    result.trace = play_game(skill, make_policy(result.condition), config.combat, rng);
    result.levels_reached = result.trace.levels_reached;
    result.duration_min = result.trace.total_duration_s / 60.0;
    result.difficulty = difficulty_proxy(result.trace);
  };

  if (threads == 1) {
    for (size_t i = 0; i < total; ++i) run_one(i);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (size_t i = t; i < total; i += threads) run_one(i);
      });
    }
    for (auto& worker : pool) worker.join();
  }
  return results;
}

double difficulty_proxy(const GameTrace& trace) {
  long long sum_half_points = 0;
  int completed = 0;
  for (const LevelRecord& record : trace.levels) {
    if (!record.outcome.survived) continue;
    sum_half_points +=
        combined_score(TierScheme::v1(), record.outcome.end_gate, record.outcome.end_player)
            .half_points();
    ++completed;
  }
  if (completed == 0) return 5.0;
  const double mean_score = static_cast<double>(sum_half_points) / (2.0 * completed);
  return std::clamp(1.0 + 4.0 * (1.0 - mean_score / 100.0), 1.0, 5.0);
}

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::kLevelReached: return "level_reached";
    case Metric::kTimeTakenMin: return "time_taken_min";
    default: return "difficulty";
  }
}

namespace {

double metric_value(const GameResult& game, Metric metric) {
  switch (metric) {
    case Metric::kLevelReached: return static_cast<double>(game.levels_reached);
    case Metric::kTimeTakenMin: return game.duration_min;
    default: return game.difficulty;
  }
}

// Per-agent game means for one (group, condition, metric) cell, then the
// mean across agents. Values are sorted before summation so the result is
// bit-identical no matter what order the traces arrive in.
struct CellAccumulator {
  std::map<int, std::vector<double>> per_agent;

  void add(int agent_id, double value) { per_agent[agent_id].push_back(value); }

  bool empty() const { return per_agent.empty(); }

  double mean() const {
    double sum = 0.0;
    for (const auto& [agent, values] : per_agent) {
      std::vector<double> sorted = values;
      std::sort(sorted.begin(), sorted.end());
      double agent_sum = 0.0;
      for (const double v : sorted) agent_sum += v;
      sum += agent_sum / static_cast<double>(sorted.size());
    }
    return sum / static_cast<double>(per_agent.size());
  }
};

}  // namespace

SummaryTable summarize(const CohortResults& results) {
  // Baseline = first fixed condition; treatment = first dynamic one.
  int without_index = -1;
  int with_index = -1;
  for (size_t i = 0; i < results.config.conditions.size(); ++i) {
    if (results.config.conditions[i] == PolicyKind::kFixed) {
      if (without_index < 0) without_index = static_cast<int>(i);
    } else if (with_index < 0) {
      with_index = static_cast<int>(i);
    }
  }
  if (without_index < 0 || with_index < 0) {
    throw std::invalid_argument("summarize: both conditions required (fixed baseline and a DDA condition)");
  }

  constexpr Metric kMetrics[] = {Metric::kLevelReached, Metric::kTimeTakenMin,
                                 Metric::kDifficulty};
  constexpr ProfileLabel kGroups[] = {ProfileLabel::kWeak, ProfileLabel::kStrong,
                                      ProfileLabel::kAverage};

  SummaryTable table;
  for (const Metric metric : kMetrics) {
    for (const ProfileLabel group : kGroups) {
      CellAccumulator without_acc;
      CellAccumulator with_acc;
      for (const GameResult& game : results.games) {
        if (game.profile != group) continue;
        if (game.condition_index == without_index) {
          without_acc.add(game.agent_id, metric_value(game, metric));
        } else if (game.condition_index == with_index) {
          with_acc.add(game.agent_id, metric_value(game, metric));
        }
      }
      if (without_acc.empty() || with_acc.empty()) continue;  // group absent
      SummaryRow row;
      row.group = group;
      row.metric = metric;
      row.without_dda = without_acc.mean();
      row.with_dda = with_acc.mean();
      row.difference = row.with_dda - row.without_dda;
      table.rows.push_back(row);
    }
  }
  return table;
}

int expected_sign(ProfileLabel group, Metric metric) {
  if (metric == Metric::kDifficulty) {
    return group == ProfileLabel::kWeak ? -1 : +1;
  }
  return group == ProfileLabel::kWeak ? +1 : -1;
}

SignReport compare_conditions(const CohortResults& results) {
  const SummaryTable table = summarize(results);

  SignReport report;
  report.all_match = true;
  constexpr ProfileLabel kGroups[] = {ProfileLabel::kWeak, ProfileLabel::kStrong};
  constexpr Metric kMetrics[] = {Metric::kLevelReached, Metric::kTimeTakenMin,
                                 Metric::kDifficulty};
  for (const ProfileLabel group : kGroups) {
    for (const Metric metric : kMetrics) {
      SignCheck check;
      check.group = group;
      check.metric = metric;
      check.expected = expected_sign(group, metric);
      for (const SummaryRow& row : table.rows) {
        if (row.group == group && row.metric == metric) {
          check.available = true;
          check.difference = row.difference;
          break;
        }
      }
      if (check.available) {
        const int actual = check.difference > 0 ? 1 : (check.difference < 0 ? -1 : 0);
        check.matches = actual == check.expected;
      }
      if (!check.available || !check.matches) report.all_match = false;
      report.checks.push_back(check);
    }
  }
  return report;
}

}  // namespace castlesim
