#include "castlesim/engine.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace castlesim {

namespace {

enum class CombatEvent : uint8_t {
  kPlayerHit,
  kGateHit,
  kEnemyDown,
};

// lambda^exponent for quarter-step exponents, via an integer power and two
// square roots. Multiplication and sqrt are correctly rounded under IEEE
// 754, so the result is identical on every conforming platform.
double pressure_factor(double lambda, double exponent) {
  const int quarters = static_cast<int>(std::lround(exponent * 4.0));
  double power = 1.0;
  for (int i = 0; i < quarters; ++i) power *= lambda;
  return std::sqrt(std::sqrt(power));
}

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

void CombatParams::validate() const {
  require(reference_wave_size >= 1, "reference_wave_size must be >= 1");
  require(attempts_per_enemy >= 0, "attempts_per_enemy must be >= 0");
  require(tanker_hit_coeff >= 0.0, "tanker_hit_coeff must be >= 0");
  require(zombie_hit_coeff >= 0.0, "zombie_hit_coeff must be >= 0");
  require(pressure_exponent >= 0.0, "pressure_exponent must be >= 0");
  require(std::lround(pressure_exponent * 4.0) * 0.25 == pressure_exponent,
          "pressure_exponent must be a multiple of 0.25");
  require(zombie_skill_discount >= 0.0, "zombie_skill_discount must be >= 0");
  require(kill_rate_base > 0.0, "kill_rate_base must be > 0");
  require(kill_rate_slope >= 0.0, "kill_rate_slope must be >= 0");
  require(inter_level_pause_s >= 0.0, "inter_level_pause_s must be >= 0");
  require(max_levels >= 1, "max_levels must be >= 1");
}

Wave compose_wave(int size, Rng& rng) {
  require(size >= 1, "compose_wave: wave size must be >= 1");
  const double ratio = rng.uniform(0.3, 0.7);
  const int zombies = static_cast<int>(std::lround(ratio * size));
  return Wave{size - zombies, zombies};
}

LevelOutcome resolve_level(double skill, const Wave& wave, Health gate,
                           const CombatParams& params, Rng& rng) {
  params.validate();
  require(skill >= 0.0 && skill <= 1.0, "skill must be in [0, 1]");
  require(wave.tankers >= 0 && wave.zombies >= 0 && wave.size() >= 1,
          "resolve_level: wave must hold at least one enemy");
  require(!gate.destroyed(), "resolve_level: gate already destroyed");

  const double lambda =
      static_cast<double>(wave.size()) / static_cast<double>(params.reference_wave_size);
  const double pressure = pressure_factor(lambda, params.pressure_exponent);
  const double p_player = clamp01(params.tanker_hit_coeff * pressure * (1.0 - skill));
  const double p_gate = clamp01(params.zombie_hit_coeff * pressure *
                                (1.0 - params.zombie_skill_discount * skill));

  std::vector<CombatEvent> events;
  events.reserve(static_cast<size_t>(wave.size()) * (params.attempts_per_enemy + 1));
  for (int i = 0; i < wave.tankers; ++i) {
    const int hits = rng.binomial(params.attempts_per_enemy, p_player);
    events.insert(events.end(), hits, CombatEvent::kPlayerHit);
    events.push_back(CombatEvent::kEnemyDown);
  }
  for (int i = 0; i < wave.zombies; ++i) {
    const int hits = rng.binomial(params.attempts_per_enemy, p_gate);
    events.insert(events.end(), hits, CombatEvent::kGateHit);
    events.push_back(CombatEvent::kEnemyDown);
  }
  rng.shuffle(events);

  LevelOutcome out;
  Health player = Health::full();
  Health gate_now = gate;
  int enemies_down = 0;
  bool ended_early = false;
  for (const CombatEvent event : events) {
    if (event == CombatEvent::kPlayerHit) {
      player = player.after_hit();
      ++out.player_hits_taken;
      if (player.destroyed()) {
        ended_early = true;
        break;
      }
    } else if (event == CombatEvent::kGateHit) {
      gate_now = gate_now.after_hit();
      ++out.gate_hits_taken;
      if (gate_now.destroyed()) {
        ended_early = true;
        break;
      }
    } else {
      ++enemies_down;
    }
  }

  out.survived = !ended_early;
  out.end_gate = gate_now;
  out.end_player = player;
  out.enemies_remaining = wave.size() - enemies_down;
  out.duration_s = static_cast<double>(enemies_down) / params.kill_rate(skill);
  return out;
}

std::string_view to_string(GameOutcome outcome) {
  switch (outcome) {
    case GameOutcome::kPlayerDeath: return "player_death";
    case GameOutcome::kGateDestroyed: return "gate_destroyed";
    default: return "level_cap";
  }
}

std::optional<GameOutcome> game_outcome_from_string(std::string_view name) {
  if (name == "player_death") return GameOutcome::kPlayerDeath;
  if (name == "gate_destroyed") return GameOutcome::kGateDestroyed;
  if (name == "level_cap") return GameOutcome::kLevelCapReached;
  return std::nullopt;
}

GameTrace play_game(double skill, const SpawnPolicy& policy,
                    const CombatParams& params, Rng& rng) {
  params.validate();

  GameTrace trace;
  ControllerState state;
  Health gate = Health::full();
  double total_s = 0.0;

  for (int level = 1; level <= params.max_levels; ++level) {
    const Wave wave = compose_wave(state.current_wave_size, rng);
    const LevelOutcome outcome = resolve_level(skill, wave, gate, params, rng);

    LevelRecord record;
    record.level = level;
    record.wave = wave;
    record.outcome = outcome;
    total_s += outcome.duration_s;

    if (!outcome.survived) {
      trace.levels.push_back(record);
      trace.outcome = outcome.end_player.destroyed() ? GameOutcome::kPlayerDeath
                                                     : GameOutcome::kGateDestroyed;
      break;
    }

    // Level cleared: the player regenerates to full, the gate does not.
    total_s += params.inter_level_pause_s;
    gate = outcome.end_gate;

    const WaveStep step = next_wave_size(state, policy, outcome.end_gate, outcome.end_player);
    if (policy.is_dynamic()) {
      record.score = combined_score(policy.scheme(), outcome.end_gate, outcome.end_player);
      record.tier = step.state.last_tier;
    }
    record.next_size = step.size;
    state = step.state;
    trace.levels.push_back(record);

    if (level == params.max_levels) {
      trace.outcome = GameOutcome::kLevelCapReached;
      break;
    }
  }

  trace.levels_reached = static_cast<int>(trace.levels.size());
  trace.total_duration_s = total_s;
  return trace;
}

}  // namespace castlesim
