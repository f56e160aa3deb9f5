#include "doctest.h"

#include <stdexcept>

#include <cmath>
#include <vector>

#include "castlesim/engine.h"

using namespace castlesim;

namespace {

// Exact Binomial(n, p) CDF by summing the pmf iteratively.
double binomial_cdf(int n, double p, int k) {
  if (k < 0) return 0.0;
  if (k >= n) return 1.0;
  double pmf = std::pow(1.0 - p, n);  // P(X = 0)
  double cdf = pmf;
  for (int i = 1; i <= k; ++i) {
    pmf *= (static_cast<double>(n - i + 1) / i) * (p / (1.0 - p));
    cdf += pmf;
  }
  return cdf;
}

// Independent survival oracle. A level is survived exactly when the total
// tanker hits stay below the player's 10-hit capacity AND the total zombie
// hits stay below the gate's remaining capacity; the event interleaving
// cannot change that, so the probability factors into two binomial tails.
double survival_oracle(double skill, const Wave& wave, Health gate, const CombatParams& p) {
  const double lambda = static_cast<double>(wave.size()) / p.reference_wave_size;
  const double pressure = std::sqrt(std::sqrt(std::pow(lambda, std::lround(p.pressure_exponent * 4))));
  const double p_player = std::clamp(p.tanker_hit_coeff * pressure * (1.0 - skill), 0.0, 1.0);
  const double p_gate = std::clamp(
      p.zombie_hit_coeff * pressure * (1.0 - p.zombie_skill_discount * skill), 0.0, 1.0);
  const int player_cap = Health::kMax / Health::kHitDamage;
  const int gate_cap = gate.value() / Health::kHitDamage;
  return binomial_cdf(wave.tankers * p.attempts_per_enemy, p_player, player_cap - 1) *
         binomial_cdf(wave.zombies * p.attempts_per_enemy, p_gate, gate_cap - 1);
}

}  // namespace

TEST_CASE("compose_wave splits every size it is given") {
  Rng rng(31);
  for (int size = 1; size <= 60; ++size) {
    for (int rep = 0; rep < 25; ++rep) {
      const Wave wave = compose_wave(size, rng);
      CHECK(wave.tankers >= 0);
      CHECK(wave.zombies >= 0);
      CHECK(wave.size() == size);
    }
  }
  CHECK_THROWS_AS(compose_wave(0, rng), std::invalid_argument);
}

TEST_CASE("compose_wave zombie share matches the uniform ratio") {
  // E[round(10r)] over r ~ U(0.3, 0.7) is exactly 5.
  Rng rng(2024);
  long long zombies = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const Wave wave = compose_wave(10, rng);
    zombies += wave.zombies;
    CHECK(wave.zombies >= 3);
    CHECK(wave.zombies <= 7);
  }
  const double mean = static_cast<double>(zombies) / draws;
  CHECK(mean > 4.9);
  CHECK(mean < 5.1);
}

TEST_CASE("harmless enemies leave everything untouched") {
  CombatParams params;
  params.tanker_hit_coeff = 0.0;
  params.zombie_hit_coeff = 0.0;
  Rng rng(1);
  const LevelOutcome out = resolve_level(0.5, Wave{6, 4}, Health(80), params, rng);
  CHECK(out.survived);
  CHECK(out.player_hits_taken == 0);
  CHECK(out.gate_hits_taken == 0);
  CHECK(out.end_player.value() == 100);
  CHECK(out.end_gate.value() == 80);
  CHECK(out.enemies_remaining == 0);
  CHECK(out.duration_s == doctest::Approx(10.0 / params.kill_rate(0.5)));
}

TEST_CASE("twelve certain hits end the level at exactly ten") {
  CombatParams params;
  params.tanker_hit_coeff = 1.0;
  params.zombie_hit_coeff = 0.0;
  params.pressure_exponent = 0.0;
  params.attempts_per_enemy = 1;
  Rng rng(99);
  const LevelOutcome out = resolve_level(0.0, Wave{12, 0}, Health(100), params, rng);
  CHECK_FALSE(out.survived);
  CHECK(out.player_hits_taken == 10);
  CHECK(out.end_player.value() == 0);
  CHECK(out.end_gate.value() == 100);
  CHECK(out.gate_hits_taken == 0);
}

TEST_CASE("level resolution conserves hit arithmetic under randomized parameters") {
  Rng meta(555);
  for (int rep = 0; rep < 400; ++rep) {
    CombatParams params;
    params.tanker_hit_coeff = meta.uniform(0.0, 0.9);
    params.zombie_hit_coeff = meta.uniform(0.0, 0.9);
    params.pressure_exponent = 0.25 * static_cast<double>(meta.below(5));
    params.zombie_skill_discount = meta.uniform(0.0, 2.0);
    const double skill = meta.uniform(0.0, 1.0);
    const int size = 1 + static_cast<int>(meta.below(40));
    const int gate_value = 10 * (1 + static_cast<int>(meta.below(10)));

    Rng rng(meta.next_u64());
    const Wave wave = compose_wave(size, rng);
    const LevelOutcome out = resolve_level(skill, wave, Health(gate_value), params, rng);

    CHECK(out.player_hits_taken * 10 == Health::kMax - out.end_player.value());
    CHECK(out.gate_hits_taken * 10 == gate_value - out.end_gate.value());
    CHECK(out.enemies_remaining >= 0);
    CHECK(out.enemies_remaining <= size);
    if (out.survived) {
      CHECK(out.enemies_remaining == 0);
      CHECK(out.end_player.value() >= 10);
      CHECK(out.end_gate.value() >= 10);
    } else {
      CHECK((out.end_player.destroyed() || out.end_gate.destroyed()));
    }
    CHECK(out.duration_s ==
          doctest::Approx((size - out.enemies_remaining) / params.kill_rate(skill)));
  }
}

TEST_CASE("simulated survival frequency matches the independent oracle") {
  const CombatParams params;  // shipped defaults

  struct Scenario {
    double skill;
    Wave wave;
    int gate;
  };
  const Scenario scenarios[] = {
      {0.5, Wave{5, 5}, 100},
      {0.6, Wave{8, 6}, 40},
      {0.25, Wave{7, 6}, 100},
  };
  for (const Scenario& sc : scenarios) {
    const double expected = survival_oracle(sc.skill, sc.wave, Health(sc.gate), params);
    Rng rng(808);
    const int runs = 100000;
    int survived = 0;
    for (int i = 0; i < runs; ++i) {
      if (resolve_level(sc.skill, sc.wave, Health(sc.gate), params, rng).survived) ++survived;
    }
    const double frequency = static_cast<double>(survived) / runs;
    CHECK(std::abs(frequency - expected) < 0.01);
  }
}

TEST_CASE("resolve_level rejects bad inputs") {
  CombatParams params;
  Rng rng(3);
  CHECK_THROWS_AS(resolve_level(0.5, Wave{5, 5}, Health(0), params, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(resolve_level(-0.1, Wave{5, 5}, Health(100), params, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(resolve_level(1.1, Wave{5, 5}, Health(100), params, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(resolve_level(0.5, Wave{0, 0}, Health(100), params, rng),
                  std::invalid_argument);
  CombatParams bad;
  bad.pressure_exponent = 0.3;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = CombatParams{};
  bad.kill_rate_base = 0.0;
  bad.kill_rate_slope = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("harmless game runs to the level cap on the fixed schedule") {
  CombatParams params;
  params.tanker_hit_coeff = 0.0;
  params.zombie_hit_coeff = 0.0;
  params.max_levels = 12;
  Rng rng(17);
  const GameTrace trace = play_game(0.3, SpawnPolicy::fixed(), params, rng);
  CHECK(trace.outcome == GameOutcome::kLevelCapReached);
  CHECK(trace.levels_reached == 12);
  REQUIRE(trace.levels.size() == 12);
  for (size_t i = 0; i < trace.levels.size(); ++i) {
    CHECK(trace.levels[i].wave.size() == 10 + 3 * static_cast<int>(i));
    CHECK(trace.levels[i].outcome.survived);
    CHECK_FALSE(trace.levels[i].score.has_value());
    CHECK(trace.levels[i].next_size.has_value());
  }
}

TEST_CASE("lethal level 1 ends the game immediately") {
  CombatParams params;
  params.tanker_hit_coeff = 1.0;
  params.pressure_exponent = 0.0;
  Rng rng(21);
  const GameTrace trace = play_game(0.0, SpawnPolicy::dynamic(TierScheme::v2()), params, rng);
  CHECK(trace.outcome == GameOutcome::kPlayerDeath);
  CHECK(trace.levels_reached == 1);
  REQUIRE(trace.levels.size() == 1);
  CHECK_FALSE(trace.levels[0].score.has_value());
  CHECK_FALSE(trace.levels[0].next_size.has_value());
}

TEST_CASE("identical seeds replay identically, different seeds do not") {
  const CombatParams params;
  auto signature = [&](uint64_t seed, const SpawnPolicy& policy) {
    Rng rng(seed);
    const GameTrace trace = play_game(0.4, policy, params, rng);
    std::vector<double> sig;
    sig.push_back(static_cast<double>(trace.levels_reached));
    sig.push_back(trace.total_duration_s);
    sig.push_back(static_cast<double>(trace.outcome));
    for (const LevelRecord& record : trace.levels) {
      sig.push_back(record.wave.tankers);
      sig.push_back(record.wave.zombies);
      sig.push_back(record.outcome.end_gate.value());
      sig.push_back(record.outcome.end_player.value());
      sig.push_back(record.outcome.duration_s);
      sig.push_back(record.score ? record.score->points() : -1.0);
      sig.push_back(record.tier ? record.tier->index() : -1.0);
      sig.push_back(record.next_size ? *record.next_size : -1.0);
    }
    return sig;
  };
  for (const PolicyKind kind : {PolicyKind::kFixed, PolicyKind::kDdaV2}) {
    const SpawnPolicy policy = make_policy(kind);
    CHECK(signature(1234, policy) == signature(1234, policy));
    CHECK(signature(1234, policy) != signature(1235, policy));
  }
}

TEST_CASE("traces obey the game-loop invariants and replay their controller") {
  const CombatParams params;
  for (const PolicyKind kind : {PolicyKind::kFixed, PolicyKind::kDdaV1, PolicyKind::kDdaV2}) {
    const SpawnPolicy policy = make_policy(kind);
    for (uint64_t seed = 0; seed < 300; ++seed) {
      Rng rng(derive_stream_seed(4040, {StreamPurpose::kGamePlay,
                                        static_cast<uint32_t>(seed),
                                        static_cast<uint16_t>(kind), 0}));
      const double skill = 0.1 + 0.8 * ((seed % 9) / 8.0);
      const GameTrace trace = play_game(skill, policy, params, rng);
      REQUIRE(!trace.levels.empty());
      CHECK(trace.levels_reached == static_cast<int>(trace.levels.size()));
      CHECK(trace.levels.front().wave.size() == kInitialWaveSize);

      ControllerState state;
      int gate = Health::kMax;
      double duration = 0.0;
      int completed = 0;
      for (size_t i = 0; i < trace.levels.size(); ++i) {
        const LevelRecord& record = trace.levels[i];
        CHECK(record.level == static_cast<int>(i) + 1);
        CHECK(record.wave.size() == state.current_wave_size);
        // Gate damage only ever accumulates.
        CHECK(record.outcome.end_gate.value() <= gate);
        duration += record.outcome.duration_s;

        if (record.outcome.survived) {
          ++completed;
          const WaveStep step =
              next_wave_size(state, policy, record.outcome.end_gate, record.outcome.end_player);
          REQUIRE(record.next_size.has_value());
          CHECK(*record.next_size == step.size);
          if (policy.is_dynamic()) {
            REQUIRE(record.score.has_value());
            REQUIRE(record.tier.has_value());
            CHECK(*record.score == combined_score(policy.scheme(), record.outcome.end_gate,
                                                  record.outcome.end_player));
            CHECK(*record.tier == *step.state.last_tier);
          } else {
            CHECK_FALSE(record.score.has_value());
          }
          state = step.state;
          gate = record.outcome.end_gate.value();
        } else {
          CHECK(i + 1 == trace.levels.size());
          CHECK_FALSE(record.next_size.has_value());
          const bool player_died = record.outcome.end_player.destroyed();
          CHECK(trace.outcome ==
                (player_died ? GameOutcome::kPlayerDeath : GameOutcome::kGateDestroyed));
        }
      }
      CHECK(trace.total_duration_s ==
            doctest::Approx(duration + params.inter_level_pause_s * completed));
      if (trace.outcome == GameOutcome::kLevelCapReached) {
        CHECK(trace.levels_reached == params.max_levels);
      }
    }
  }
}

TEST_CASE("mean levels reached increase with skill under the fixed policy") {
  const CombatParams params;
  double previous = 0.0;
  for (const double skill : {0.2, 0.5, 0.8}) {
    double total = 0.0;
    const int games = 300;
    for (int i = 0; i < games; ++i) {
      Rng rng(derive_stream_seed(606, {StreamPurpose::kGamePlay, static_cast<uint32_t>(i),
                                       static_cast<uint16_t>(skill * 10), 0}));
      total += play_game(skill, SpawnPolicy::fixed(), params, rng).levels_reached;
    }
    const double mean = total / games;
    CHECK(mean > previous);
    previous = mean;
  }
}
