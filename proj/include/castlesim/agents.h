#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "castlesim/rng.h"

namespace castlesim {

enum class ProfileLabel {
  kWeak,
  kAverage,
  kStrong,
  kCustom,
};

std::string_view to_string(ProfileLabel label);
std::optional<ProfileLabel> profile_from_string(std::string_view name);

// A skill band agents are drawn from. The built-in bands are disjoint, so
// every weak sample is below every average sample is below every strong
// sample.
struct SkillProfile {
  ProfileLabel label = ProfileLabel::kCustom;
  double low = 0.0;
  double high = 1.0;

  static SkillProfile weak();     // [0.15, 0.35]
  static SkillProfile average();  // [0.40, 0.60]
  static SkillProfile strong();   // [0.65, 0.85]
  static SkillProfile custom(double low, double high);

  static SkillProfile builtin(ProfileLabel label);
};

// A simulated participant: a single skill scalar plus an optional per-game
// learning increment (off by default so condition comparisons isolate the
// spawn policy).
struct PlayerAgent {
  int agent_id = 0;
  double skill = 0.0;
  ProfileLabel profile = ProfileLabel::kCustom;
  double learning_rate = 0.0;
};

// Draws an agent's skill uniformly from the profile band.
PlayerAgent sample_agent(int agent_id, const SkillProfile& profile, Rng& rng,
                         double learning_rate = 0.0);

// Skill after a number of prior games, clamped to 1.
PlayerAgent apply_learning(const PlayerAgent& agent, int games_played);

}  // namespace castlesim
