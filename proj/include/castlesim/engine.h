#pragma once

#include <optional>
#include <vector>

#include "castlesim/difficulty.h"
#include "castlesim/rng.h"

namespace castlesim {

// One level's worth of enemies. Tankers move on the player character,
// zombies ignore the player and move on the gate.
struct Wave {
  int tankers = 0;
  int zombies = 0;

  int size() const { return tankers + zombies; }
};

// Draws the tanker/zombie split for a wave: the zombie fraction is uniform
// in [0.3, 0.7] and rounded to a head count, so neither type ever fully
// vanishes from a large wave.
Wave compose_wave(int size, Rng& rng);

// Tunable constants of the abstract combat model. The shipped defaults come
// from the calibration run in tools/calibrate.cpp (see README); they place
// weak/average/strong agents in the intended level and game-time bands
// under the fixed +3 baseline.
struct CombatParams {
  // Wave size that gives pressure factor 1.
  int reference_wave_size = 10;
  // Hit attempts each enemy makes over a level.
  int attempts_per_enemy = 3;
  // Per-attempt hit probability coefficients at pressure 1 and skill 0.
  double tanker_hit_coeff = 0.47;
  double zombie_hit_coeff = 0.133;
  // Exponent on (wave size / reference size). Restricted to multiples of
  // 0.25 so the power can be computed from multiplications and square
  // roots only, which IEEE requires to be correctly rounded; pow() carries
  // no such guarantee across libms.
  double pressure_exponent = 0.25;
  // Skill discount applied to zombie pressure. May exceed 1: skilled
  // players intercept gate attackers entirely (probability clamps at 0).
  double zombie_skill_discount = 1.5;
  // Kill throughput, kills per second: kill_rate_base + kill_rate_slope * s.
  double kill_rate_base = 0.113;
  double kill_rate_slope = 0.587;
  // Downtime between levels, seconds.
  double inter_level_pause_s = 30.0;
  // Hard stop so near-zero hit probabilities cannot loop forever.
  int max_levels = 50;

  double kill_rate(double skill) const {
    return kill_rate_base + kill_rate_slope * skill;
  }

  // Throws std::invalid_argument on out-of-domain values.
  void validate() const;
};

// Resolved end-of-level state. end_player is the pre-regeneration value:
// the player refills to 100 before the next wave, but tier allocation reads
// the health the level actually ended with.
struct LevelOutcome {
  bool survived = false;
  Health end_gate;
  Health end_player;
  int player_hits_taken = 0;
  int gate_hits_taken = 0;
  int enemies_remaining = 0;
  double duration_s = 0.0;
};

// Plays out one wave. Each tanker rolls Binomial(attempts, p_player) hits
// on the player and each zombie Binomial(attempts, p_gate) hits on the
// gate, where
//
//   lambda   = wave size / reference_wave_size
//   p_player = clamp(tanker_hit_coeff * lambda^gamma * (1 - s), 0, 1)
//   p_gate   = clamp(zombie_hit_coeff * lambda^gamma * (1 - discount * s), 0, 1)
//
// All hit events plus one down-marker per enemy are shuffled uniformly and
// processed in order; processing stops at the first health that reaches
// zero. Unprocessed down-markers are the enemies still standing when the
// game ended. Duration is kills / kill_rate(s).
LevelOutcome resolve_level(double skill, const Wave& wave, Health gate,
                           const CombatParams& params, Rng& rng);

enum class GameOutcome {
  kPlayerDeath,
  kGateDestroyed,
  kLevelCapReached,
};

std::string_view to_string(GameOutcome outcome);
std::optional<GameOutcome> game_outcome_from_string(std::string_view name);

// Per-level entry of a game trace. score/tier are present only under a
// dynamic policy (they are what the controller read); next_size is present
// only for survived levels and echoes the controller's decision.
struct LevelRecord {
  int level = 0;
  Wave wave;
  LevelOutcome outcome;
  std::optional<Score> score;
  std::optional<Tier> tier;
  std::optional<int> next_size;
};

// Full record of one game.
struct GameTrace {
  std::vector<LevelRecord> levels;
  GameOutcome outcome = GameOutcome::kPlayerDeath;
  int levels_reached = 0;  // highest level entered
  double total_duration_s = 0.0;
};

// Runs a whole game: level 1 starts with 10 enemies, the player regenerates
// to full between levels, the gate carries its damage forward, and the next
// wave size comes from the active policy. Ends on player death, gate
// destruction, or the level cap.
GameTrace play_game(double skill, const SpawnPolicy& policy,
                    const CombatParams& params, Rng& rng);

}  // namespace castlesim
