#pragma once

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace castlesim {

// Hit points for the player character and the castle gate. Both sustain
// damage in 10-point hits and are destroyed at zero, so legal values are
// {0, 10, ..., 100}. An entity that finished a level alive is at 10 or more.
class Health {
 public:
  static constexpr int kMax = 100;
  static constexpr int kHitDamage = 10;

  Health() : value_(kMax) {}
  explicit Health(int value);

  static Health full() { return Health(kMax); }

  int value() const { return value_; }
  bool destroyed() const { return value_ == 0; }

  // One hit of damage; never drops below zero.
  Health after_hit() const;

  friend auto operator<=>(Health, Health) = default;

 private:
  int value_;
};

// Performance band T1 (Poor) through T5 (Very Good).
class Tier {
 public:
  explicit Tier(int index);

  int index() const { return index_; }
  std::string_view name() const;

  friend auto operator<=>(Tier, Tier) = default;

 private:
  int index_;
};

// End-of-level performance score. Every achievable score is a multiple of
// 0.5 (V1 scores are multiples of 5, V2 of 2.5), so scores are held exactly
// in half-point units and interval membership never touches floating point.
class Score {
 public:
  static Score from_half_points(int half_points) { return Score(half_points); }

  int half_points() const { return half_points_; }
  double points() const { return half_points_ / 2.0; }

  friend auto operator<=>(Score, Score) = default;

 private:
  explicit Score(int half_points) : half_points_(half_points) {}
  int half_points_;
};

// "35" for whole scores, "17.5" for half scores.
std::string format_score(Score score);

enum class SchemeVariant {
  kV1,  // score = (GH + PH) / 2, ranges 10..100
  kV2,  // score = (GH/2 + PH) / 2, ranges 7.5..75
};

std::string_view to_string(SchemeVariant variant);
std::optional<SchemeVariant> scheme_from_string(std::string_view name);

// Inclusive score interval attached to one tier.
struct ScoreInterval {
  Score low;
  Score high;

  bool contains(Score s) const { return low <= s && s <= high; }
};

// A scoring scheme: the combined-score formula variant plus the five tier
// intervals it maps onto. The intervals are stored as explicit tables, not
// derived from a width formula; the printed bounds (including the V2
// half-point gaps such as 21 -> 21.5) are authoritative.
class TierScheme {
 public:
  static const TierScheme& v1();
  static const TierScheme& v2();

  SchemeVariant variant() const { return variant_; }
  const std::array<ScoreInterval, 5>& ranges() const { return ranges_; }
  Score min_score() const { return ranges_.front().low; }
  Score max_score() const { return ranges_.back().high; }

 private:
  TierScheme(SchemeVariant variant, std::array<ScoreInterval, 5> ranges)
      : variant_(variant), ranges_(ranges) {}

  SchemeVariant variant_;
  std::array<ScoreInterval, 5> ranges_;
};

// Combined end-of-level score from the gate and player health. Both
// entities must have survived the level (health >= 10); a destroyed entity
// means the game is over and no score or tier exists.
Score combined_score(const TierScheme& scheme, Health gate, Health player);

// Maps a score to its tier: the first interval whose upper bound is >= the
// score. For scores inside an interval this is ordinary membership; for
// scores in an inter-interval gap (unreachable from valid healths) it
// resolves to the next tier up, keeping the mapping total and monotone.
// Scores outside [min_score, max_score] are rejected.
Tier tier_for_score(const TierScheme& scheme, Score score);

// tier_for_score(combined_score(...)).
Tier allocate_tier(const TierScheme& scheme, Health gate, Health player);

// Extra enemies granted for the next wave: +1 for T1 through +5 for T5.
int spawn_increment(Tier tier);

// One cell of the exhaustive (gate, player) -> tier map.
struct TierCell {
  Health gate;
  Health player;
  Score score;
  Tier tier;
};

// All 100 (gate, player) combinations over {10..100 step 10}^2, gate-major.
std::vector<TierCell> tier_table(const TierScheme& scheme);

inline constexpr int kInitialWaveSize = 10;
inline constexpr int kFixedSpawnIncrement = 3;

// How the next wave grows: the fixed +3 baseline, or +spawn_increment of
// the tier allocated from end-of-level healths.
class SpawnPolicy {
 public:
  static SpawnPolicy fixed();
  static SpawnPolicy dynamic(const TierScheme& scheme);

  bool is_dynamic() const { return scheme_ != nullptr; }
  const TierScheme& scheme() const;

 private:
  SpawnPolicy() = default;
  const TierScheme* scheme_ = nullptr;  // points at a static scheme
};

// Named policy selection used by config files and the CLI.
enum class PolicyKind {
  kFixed,
  kDdaV1,
  kDdaV2,
};

SpawnPolicy make_policy(PolicyKind kind);
std::string_view to_string(PolicyKind kind);
std::optional<PolicyKind> policy_from_string(std::string_view name);

// Wave-size bookkeeping across levels. Starts at 10 enemies; sizes are
// strictly increasing because every increment is at least one.
struct ControllerState {
  int current_wave_size = kInitialWaveSize;
  std::optional<Tier> last_tier;
};

struct WaveStep {
  ControllerState state;
  int size;
};

// Advances the controller after a survived level. Rejects destroyed
// healths under either policy: a finished game allocates no tier.
WaveStep next_wave_size(const ControllerState& state, const SpawnPolicy& policy,
                        Health end_gate, Health end_player);

}  // namespace castlesim
