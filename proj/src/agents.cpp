#include "castlesim/agents.h"

#include <algorithm>
#include <stdexcept>

namespace castlesim {

std::string_view to_string(ProfileLabel label) {
  switch (label) {
    case ProfileLabel::kWeak: return "weak";
    case ProfileLabel::kAverage: return "average";
    case ProfileLabel::kStrong: return "strong";
    default: return "custom";
  }
}

std::optional<ProfileLabel> profile_from_string(std::string_view name) {
  if (name == "weak") return ProfileLabel::kWeak;
  if (name == "average") return ProfileLabel::kAverage;
  if (name == "strong") return ProfileLabel::kStrong;
  if (name == "custom") return ProfileLabel::kCustom;
  return std::nullopt;
}

SkillProfile SkillProfile::weak() { return {ProfileLabel::kWeak, 0.15, 0.35}; }
SkillProfile SkillProfile::average() { return {ProfileLabel::kAverage, 0.40, 0.60}; }
SkillProfile SkillProfile::strong() { return {ProfileLabel::kStrong, 0.65, 0.85}; }

SkillProfile SkillProfile::custom(double low, double high) {
  if (!(0.0 <= low && low <= high && high <= 1.0)) {
    throw std::invalid_argument("custom profile needs 0 <= low <= high <= 1");
  }
  return {ProfileLabel::kCustom, low, high};
}

SkillProfile SkillProfile::builtin(ProfileLabel label) {
  switch (label) {
    case ProfileLabel::kWeak: return weak();
    case ProfileLabel::kAverage: return average();
    case ProfileLabel::kStrong: return strong();
    default: throw std::invalid_argument("custom profile has no built-in range");
  }
}

PlayerAgent sample_agent(int agent_id, const SkillProfile& profile, Rng& rng,
                         double learning_rate) {
  if (learning_rate < 0.0) throw std::invalid_argument("learning_rate must be >= 0");
  PlayerAgent agent;
  agent.agent_id = agent_id;
  agent.skill = rng.uniform(profile.low, profile.high);
  agent.profile = profile.label;
  agent.learning_rate = learning_rate;
  return agent;
}

PlayerAgent apply_learning(const PlayerAgent& agent, int games_played) {
  if (games_played < 0) throw std::invalid_argument("games_played must be >= 0");
  PlayerAgent updated = agent;
  updated.skill = std::min(1.0, agent.skill + agent.learning_rate * games_played);
  return updated;
}

}  // namespace castlesim
