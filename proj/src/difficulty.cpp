#include "castlesim/difficulty.h"

#include <stdexcept>
#include <string>

namespace castlesim {

namespace {

Score hp(int half_points) { return Score::from_half_points(half_points); }

}  // namespace

Health::Health(int value) : value_(value) {
  if (value < 0 || value > kMax || value % kHitDamage != 0) {
    throw std::invalid_argument("health must be a multiple of 10 in [0, 100], got " +
                                std::to_string(value));
  }
}

Health Health::after_hit() const {
  return Health(value_ == 0 ? 0 : value_ - kHitDamage);
}

Tier::Tier(int index) : index_(index) {
  if (index < 1 || index > 5) {
    throw std::invalid_argument("tier index must be in 1..5, got " + std::to_string(index));
  }
}

std::string_view Tier::name() const {
  switch (index_) {
    case 1: return "Poor";
    case 2: return "Below Average";
    case 3: return "Average";
    case 4: return "Above Average";
    default: return "Very Good";
  }
}

std::string format_score(Score score) {
  const int half = score.half_points();
  std::string out = std::to_string(half / 2);
  if (half % 2 != 0) out += ".5";
  return out;
}

std::string_view to_string(SchemeVariant variant) {
  return variant == SchemeVariant::kV1 ? "v1" : "v2";
}

std::optional<SchemeVariant> scheme_from_string(std::string_view name) {
  if (name == "v1") return SchemeVariant::kV1;
  if (name == "v2") return SchemeVariant::kV2;
  return std::nullopt;
}

const TierScheme& TierScheme::v1() {
  // 10-27, 28-45, 46-63, 64-81, 82-100.
  static const TierScheme scheme(SchemeVariant::kV1,
                                 {ScoreInterval{hp(20), hp(54)}, ScoreInterval{hp(56), hp(90)},
                                  ScoreInterval{hp(92), hp(126)}, ScoreInterval{hp(128), hp(162)},
                                  ScoreInterval{hp(164), hp(200)}});
  return scheme;
}

const TierScheme& TierScheme::v2() {
  // 7.5-21, 21.5-35, 35.5-49, 49.5-62, 62.5-75.
  static const TierScheme scheme(SchemeVariant::kV2,
                                 {ScoreInterval{hp(15), hp(42)}, ScoreInterval{hp(43), hp(70)},
                                  ScoreInterval{hp(71), hp(98)}, ScoreInterval{hp(99), hp(124)},
                                  ScoreInterval{hp(125), hp(150)}});
  return scheme;
}

Score combined_score(const TierScheme& scheme, Health gate, Health player) {
  if (gate.destroyed() || player.destroyed()) {
    throw std::invalid_argument("combined_score: destroyed entity, game is over");
  }
  // In half-point units: V1 is GH + PH, V2 is GH/2 + PH. Healths are
  // multiples of 10, so both are exact integers.
  const int half_points = scheme.variant() == SchemeVariant::kV1
                              ? gate.value() + player.value()
                              : gate.value() / 2 + player.value();
  return Score::from_half_points(half_points);
}

Tier tier_for_score(const TierScheme& scheme, Score score) {
  if (score < scheme.min_score() || score > scheme.max_score()) {
    throw std::invalid_argument("score " + format_score(score) + " outside scheme range " +
                                format_score(scheme.min_score()) + ".." +
                                format_score(scheme.max_score()));
  }
  const auto& ranges = scheme.ranges();
  for (int i = 0; i < 5; ++i) {
    if (score <= ranges[i].high) return Tier(i + 1);
  }
  return Tier(5);  // unreachable: score <= max_score == ranges[4].high
}

Tier allocate_tier(const TierScheme& scheme, Health gate, Health player) {
  return tier_for_score(scheme, combined_score(scheme, gate, player));
}

int spawn_increment(Tier tier) { return tier.index(); }

std::vector<TierCell> tier_table(const TierScheme& scheme) {
  std::vector<TierCell> cells;
  cells.reserve(100);
  for (int gh = 10; gh <= 100; gh += 10) {
    for (int ph = 10; ph <= 100; ph += 10) {
      const Health gate(gh);
      const Health player(ph);
      const Score score = combined_score(scheme, gate, player);
      cells.push_back(TierCell{gate, player, score, tier_for_score(scheme, score)});
    }
  }
  return cells;
}

SpawnPolicy SpawnPolicy::fixed() { return SpawnPolicy(); }

SpawnPolicy SpawnPolicy::dynamic(const TierScheme& scheme) {
  SpawnPolicy policy;
  policy.scheme_ = &scheme;
  return policy;
}

const TierScheme& SpawnPolicy::scheme() const {
  if (!scheme_) throw std::logic_error("fixed policy has no tier scheme");
  return *scheme_;
}

SpawnPolicy make_policy(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kFixed: return SpawnPolicy::fixed();
    case PolicyKind::kDdaV1: return SpawnPolicy::dynamic(TierScheme::v1());
    default: return SpawnPolicy::dynamic(TierScheme::v2());
  }
}

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kFixed: return "fixed";
    case PolicyKind::kDdaV1: return "dda-v1";
    default: return "dda-v2";
  }
}

std::optional<PolicyKind> policy_from_string(std::string_view name) {
  if (name == "fixed") return PolicyKind::kFixed;
  if (name == "dda-v1") return PolicyKind::kDdaV1;
  if (name == "dda-v2") return PolicyKind::kDdaV2;
  return std::nullopt;
}

WaveStep next_wave_size(const ControllerState& state, const SpawnPolicy& policy,
                        Health end_gate, Health end_player) {
  if (end_gate.destroyed() || end_player.destroyed()) {
    throw std::invalid_argument("next_wave_size: destroyed entity, game is over");
  }
  WaveStep step;
  step.state = state;
  if (policy.is_dynamic()) {
    const Tier tier = allocate_tier(policy.scheme(), end_gate, end_player);
    step.size = state.current_wave_size + spawn_increment(tier);
    step.state.last_tier = tier;
  } else {
    step.size = state.current_wave_size + kFixedSpawnIncrement;
    step.state.last_tier.reset();
  }
  step.state.current_wave_size = step.size;
  return step;
}

}  // namespace castlesim
