#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "castlesim/agents.h"
#include "castlesim/engine.h"

namespace castlesim {

// Study layout: how many agents per profile, how many games each agent
// plays per condition, and the ordered condition list (baseline first, then
// the adaptive policy, mirroring the study this reproduces).
struct CohortConfig {
  int weak_count = 8;
  int average_count = 14;
  int strong_count = 8;
  int games_per_condition = 3;
  std::vector<PolicyKind> conditions = {PolicyKind::kFixed, PolicyKind::kDdaV2};
  double learning_rate = 0.0;
  CombatParams combat;
  uint64_t master_seed = 20250810;

  int total_agents() const { return weak_count + average_count + strong_count; }
  int total_games() const {
    return total_agents() * static_cast<int>(conditions.size()) * games_per_condition;
  }

  void validate() const;
};

// One played game with the scalars the study analyses.
struct GameResult {
  std::string game_id;
  int agent_id = 0;
  ProfileLabel profile = ProfileLabel::kCustom;
  double skill = 0.0;
  PolicyKind condition = PolicyKind::kFixed;
  int condition_index = 0;
  int game_index = 0;
  GameTrace trace;
  int levels_reached = 0;
  double duration_min = 0.0;
  double difficulty = 0.0;
};

struct CohortResults {
  CohortConfig config;
  std::vector<GameResult> games;  // (agent, condition, game) order
};

// Runs every (agent, condition, game) cell. Each cell gets its own RNG
// stream derived from the master seed, so results are identical whether the
// games run sequentially or across `threads` workers.
CohortResults run_cohort(const CohortConfig& config, int threads = 1);

// Mechanical 1-5 stand-in for self-reported difficulty: 5 if no level was
// completed, otherwise 1 + 4 * (1 - mean/100) where mean is the average V1
// combined score over completed levels. V1 is used under every condition so
// the measuring stick never changes with the treatment.
double difficulty_proxy(const GameTrace& trace);

enum class Metric {
  kLevelReached,
  kTimeTakenMin,
  kDifficulty,
};

std::string_view to_string(Metric metric);

// One summary row: group means without and with the adaptive policy, and
// their difference. Means average each agent's games first, then the
// agents, so an agent with early deaths is not down-weighted.
struct SummaryRow {
  ProfileLabel group = ProfileLabel::kWeak;
  Metric metric = Metric::kLevelReached;
  double without_dda = 0.0;
  double with_dda = 0.0;
  double difference = 0.0;  // with - without
};

struct SummaryTable {
  std::vector<SummaryRow> rows;  // metric-major; weak, strong, then average
};

// Aggregates a two-condition run. Requires one fixed condition (the
// baseline) and one dynamic condition; throws std::invalid_argument when
// either is missing.
SummaryTable summarize(const CohortResults& results);

// Expected direction of each (group, metric) difference under the adaptive
// policy: weak players reach further, play longer, and see less difficulty;
// strong players the opposite.
int expected_sign(ProfileLabel group, Metric metric);

struct SignCheck {
  ProfileLabel group = ProfileLabel::kWeak;
  Metric metric = Metric::kLevelReached;
  bool available = false;  // false when the cohort has no such agents
  double difference = 0.0;
  int expected = 0;
  bool matches = false;
};

struct SignReport {
  std::vector<SignCheck> checks;  // weak and strong groups, three metrics each
  bool all_match = false;
};

// Checks the six weak/strong difference signs against their expected
// directions. Zero differences never match. Average agents are summarized
// but not sign-checked: the adaptive policy is not supposed to move them.
SignReport compare_conditions(const CohortResults& results);

}  // namespace castlesim
