#include "doctest.h"

#include <algorithm>

#include "castlesim/experiments.h"

using namespace castlesim;

namespace {

LevelRecord completed_level(int level, int gh, int ph) {
  LevelRecord record;
  record.level = level;
  record.wave = Wave{5, 5};
  record.outcome.survived = true;
  record.outcome.end_gate = Health(gh);
  record.outcome.end_player = Health(ph);
  record.next_size = 13;
  return record;
}

LevelRecord death_level(int level) {
  LevelRecord record;
  record.level = level;
  record.wave = Wave{5, 5};
  record.outcome.survived = false;
  record.outcome.end_gate = Health(50);
  record.outcome.end_player = Health(0);
  record.outcome.enemies_remaining = 4;
  return record;
}

GameResult synthetic_game(int agent_id, ProfileLabel profile, int condition_index,
                          PolicyKind condition, double levels, double minutes,
                          double difficulty) {
  GameResult game;
  game.agent_id = agent_id;
  game.profile = profile;
  game.condition = condition;
  game.condition_index = condition_index;
  game.levels_reached = static_cast<int>(levels);
  game.duration_min = minutes;
  game.difficulty = difficulty;
  return game;
}

CohortConfig two_condition_config() {
  CohortConfig config;
  config.conditions = {PolicyKind::kFixed, PolicyKind::kDdaV2};
  return config;
}

}  // namespace

TEST_CASE("difficulty proxy anchors") {
  GameTrace flawless;
  flawless.levels = {completed_level(1, 100, 100), completed_level(2, 100, 100)};
  flawless.outcome = GameOutcome::kPlayerDeath;
  CHECK(difficulty_proxy(flawless) == 1.0);

  GameTrace instant_death;
  instant_death.levels = {death_level(1)};
  instant_death.outcome = GameOutcome::kPlayerDeath;
  CHECK(difficulty_proxy(instant_death) == 5.0);

  // Completed-level V1 scores 70 and 40: proxy = 1 + 4 * (1 - 0.55) = 2.8.
  GameTrace mixed;
  mixed.levels = {completed_level(1, 100, 40), completed_level(2, 40, 40), death_level(3)};
  mixed.outcome = GameOutcome::kPlayerDeath;
  CHECK(difficulty_proxy(mixed) == doctest::Approx(2.8).epsilon(1e-12));
}

TEST_CASE("difficulty proxy stays in bounds and ignores the death level") {
  GameTrace trace;
  trace.levels = {completed_level(1, 10, 10), death_level(2)};
  const double proxy = difficulty_proxy(trace);  // mean score 10 -> 4.6
  CHECK(proxy == doctest::Approx(4.6));
  trace.levels = {completed_level(1, 100, 100)};
  CHECK(difficulty_proxy(trace) >= 1.0);
  CHECK(difficulty_proxy(trace) <= 5.0);
}

TEST_CASE("default cohort runs the full study grid deterministically") {
  CohortConfig config;  // 30 agents, 2 conditions, 3 games
  config.combat.max_levels = 20;  // keep the unit suite quick
  const CohortResults first = run_cohort(config);
  CHECK(first.games.size() == 180);
  CHECK(first.config.total_games() == 180);

  const CohortResults second = run_cohort(config);
  REQUIRE(second.games.size() == first.games.size());
  for (size_t i = 0; i < first.games.size(); ++i) {
    CHECK(first.games[i].game_id == second.games[i].game_id);
    CHECK(first.games[i].skill == second.games[i].skill);
    CHECK(first.games[i].levels_reached == second.games[i].levels_reached);
    CHECK(first.games[i].duration_min == second.games[i].duration_min);
    CHECK(first.games[i].difficulty == second.games[i].difficulty);
  }

  // Agents are numbered weak block, average block, strong block.
  CHECK(first.games.front().profile == ProfileLabel::kWeak);
  CHECK(first.games.back().profile == ProfileLabel::kStrong);
}

TEST_CASE("parallel cohort execution reproduces the sequential results") {
  CohortConfig config;
  config.combat.max_levels = 20;
  const CohortResults sequential = run_cohort(config, 1);
  const CohortResults parallel = run_cohort(config, 4);
  REQUIRE(sequential.games.size() == parallel.games.size());
  for (size_t i = 0; i < sequential.games.size(); ++i) {
    CHECK(sequential.games[i].game_id == parallel.games[i].game_id);
    CHECK(sequential.games[i].skill == parallel.games[i].skill);
    CHECK(sequential.games[i].levels_reached == parallel.games[i].levels_reached);
    CHECK(sequential.games[i].duration_min == parallel.games[i].duration_min);
    CHECK(sequential.games[i].difficulty == parallel.games[i].difficulty);
  }
}

TEST_CASE("a one-agent one-game one-condition cohort yields exactly one trace") {
  CohortConfig config;
  config.weak_count = 1;
  config.average_count = 0;
  config.strong_count = 0;
  config.games_per_condition = 1;
  config.conditions = {PolicyKind::kFixed};
  const CohortResults results = run_cohort(config);
  CHECK(results.games.size() == 1);
  CHECK(results.games[0].profile == ProfileLabel::kWeak);
  CHECK(results.games[0].condition == PolicyKind::kFixed);
}

TEST_CASE("learning raises the skill of later plays when enabled") {
  CohortConfig config;
  config.weak_count = 1;
  config.average_count = 0;
  config.strong_count = 0;
  config.games_per_condition = 2;
  config.learning_rate = 0.05;
  config.combat.max_levels = 10;
  const CohortResults results = run_cohort(config);
  REQUIRE(results.games.size() == 4);
  // Plays are ordered (condition, game); each play adds one learning step.
  const double base = results.games[0].skill;
  CHECK(results.games[1].skill == doctest::Approx(base + 0.05));
  CHECK(results.games[2].skill == doctest::Approx(base + 0.10));
  CHECK(results.games[3].skill == doctest::Approx(base + 0.15));
}

TEST_CASE("invalid cohort configs are rejected") {
  CohortConfig config;
  config.conditions.clear();
  CHECK_THROWS_AS(run_cohort(config), std::invalid_argument);
  config = CohortConfig{};
  config.weak_count = 0;
  config.average_count = 0;
  config.strong_count = 0;
  CHECK_THROWS_AS(run_cohort(config), std::invalid_argument);
  config = CohortConfig{};
  config.games_per_condition = 0;
  CHECK_THROWS_AS(run_cohort(config), std::invalid_argument);
  config = CohortConfig{};
  CHECK_THROWS_AS(run_cohort(config, 0), std::invalid_argument);
}

TEST_CASE("summarize averages games per agent first, then agents") {
  CohortResults results;
  results.config = two_condition_config();
  // Two weak agents; agent 0 plays twice per condition.
  results.games = {
      synthetic_game(0, ProfileLabel::kWeak, 0, PolicyKind::kFixed, 3, 3.0, 4.0),
      synthetic_game(0, ProfileLabel::kWeak, 0, PolicyKind::kFixed, 3, 3.0, 4.0),
      synthetic_game(1, ProfileLabel::kWeak, 0, PolicyKind::kFixed, 3, 3.0, 4.0),
      synthetic_game(0, ProfileLabel::kWeak, 1, PolicyKind::kDdaV2, 5, 5.0, 3.0),
      synthetic_game(0, ProfileLabel::kWeak, 1, PolicyKind::kDdaV2, 5, 5.0, 3.0),
      synthetic_game(1, ProfileLabel::kWeak, 1, PolicyKind::kDdaV2, 5, 5.0, 3.0),
  };
  const SummaryTable table = summarize(results);
  REQUIRE(table.rows.size() == 3);  // one group, three metrics
  const SummaryRow& level = table.rows[0];
  CHECK(level.group == ProfileLabel::kWeak);
  CHECK(level.metric == Metric::kLevelReached);
  CHECK(level.without_dda == 3.0);
  CHECK(level.with_dda == 5.0);
  CHECK(level.difference == 2.0);
  CHECK(table.rows[1].metric == Metric::kTimeTakenMin);
  CHECK(table.rows[1].difference == 2.0);
  CHECK(table.rows[2].metric == Metric::kDifficulty);
  CHECK(table.rows[2].difference == -1.0);
}

TEST_CASE("summarize output is independent of trace order") {
  CohortConfig config;
  config.combat.max_levels = 15;
  CohortResults results = run_cohort(config);
  const SummaryTable forward = summarize(results);
  std::reverse(results.games.begin(), results.games.end());
  const SummaryTable reversed = summarize(results);
  REQUIRE(forward.rows.size() == reversed.rows.size());
  for (size_t i = 0; i < forward.rows.size(); ++i) {
    CHECK(forward.rows[i].group == reversed.rows[i].group);
    CHECK(forward.rows[i].metric == reversed.rows[i].metric);
    CHECK(forward.rows[i].without_dda == reversed.rows[i].without_dda);
    CHECK(forward.rows[i].with_dda == reversed.rows[i].with_dda);
    CHECK(forward.rows[i].difference == reversed.rows[i].difference);
  }
}

TEST_CASE("summarize requires both a fixed and a dynamic condition") {
  CohortResults results;
  results.config.conditions = {PolicyKind::kFixed};
  results.games = {synthetic_game(0, ProfileLabel::kWeak, 0, PolicyKind::kFixed, 3, 3.0, 4.0)};
  CHECK_THROWS_WITH_AS(summarize(results),
                       "summarize: both conditions required (fixed baseline and a DDA condition)",
                       std::invalid_argument);
  results.config.conditions = {PolicyKind::kDdaV1, PolicyKind::kDdaV2};
  CHECK_THROWS_AS(summarize(results), std::invalid_argument);
}

TEST_CASE("expected difference directions follow the study's hypotheses") {
  CHECK(expected_sign(ProfileLabel::kWeak, Metric::kLevelReached) == +1);
  CHECK(expected_sign(ProfileLabel::kWeak, Metric::kTimeTakenMin) == +1);
  CHECK(expected_sign(ProfileLabel::kWeak, Metric::kDifficulty) == -1);
  CHECK(expected_sign(ProfileLabel::kStrong, Metric::kLevelReached) == -1);
  CHECK(expected_sign(ProfileLabel::kStrong, Metric::kTimeTakenMin) == -1);
  CHECK(expected_sign(ProfileLabel::kStrong, Metric::kDifficulty) == +1);
}

TEST_CASE("identical conditions produce zero differences and raise every flag") {
  CohortResults results;
  results.config = two_condition_config();
  for (const int condition : {0, 1}) {
    results.games.push_back(synthetic_game(0, ProfileLabel::kWeak, condition,
                                           results.config.conditions[condition], 3, 3.0, 4.0));
    results.games.push_back(synthetic_game(1, ProfileLabel::kStrong, condition,
                                           results.config.conditions[condition], 8, 10.0, 2.0));
  }
  const SignReport report = compare_conditions(results);
  CHECK_FALSE(report.all_match);
  REQUIRE(report.checks.size() == 6);
  for (const SignCheck& check : report.checks) {
    CHECK(check.available);
    CHECK(check.difference == 0.0);
    CHECK_FALSE(check.matches);
  }
}

TEST_CASE("a weak-only cohort marks the strong checks unavailable") {
  CohortResults results;
  results.config = two_condition_config();
  results.games = {
      synthetic_game(0, ProfileLabel::kWeak, 0, PolicyKind::kFixed, 3, 3.0, 4.0),
      synthetic_game(0, ProfileLabel::kWeak, 1, PolicyKind::kDdaV2, 5, 5.0, 3.0),
  };
  const SignReport report = compare_conditions(results);
  CHECK_FALSE(report.all_match);
  int unavailable = 0;
  for (const SignCheck& check : report.checks) {
    if (check.group == ProfileLabel::kStrong) {
      CHECK_FALSE(check.available);
      ++unavailable;
    } else {
      CHECK(check.available);
      CHECK(check.matches);
    }
  }
  CHECK(unavailable == 3);
}

TEST_CASE("a fabricated treatment effect matches every expected sign") {
  CohortResults results;
  results.config = two_condition_config();
  results.games = {
      synthetic_game(0, ProfileLabel::kWeak, 0, PolicyKind::kFixed, 3, 3.0, 4.0),
      synthetic_game(0, ProfileLabel::kWeak, 1, PolicyKind::kDdaV2, 5, 5.0, 3.0),
      synthetic_game(1, ProfileLabel::kStrong, 0, PolicyKind::kFixed, 9, 11.0, 2.0),
      synthetic_game(1, ProfileLabel::kStrong, 1, PolicyKind::kDdaV2, 7, 8.0, 3.0),
  };
  const SignReport report = compare_conditions(results);
  CHECK(report.all_match);
  for (const SignCheck& check : report.checks) CHECK(check.matches);
}
