#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace castlesim {

// Finalizer step of SplitMix64. Bijective on uint64_t, which is what the
// seed-derivation distinctness guarantee below rests on.
uint64_t mix64(uint64_t z);

// What a derived stream is used for. Keeps game-play streams and agent
// set-up streams from ever colliding.
enum class StreamPurpose : uint8_t {
  kGamePlay = 0,
  kAgentSetup = 1,
};

// Label identifying one RNG stream within an experiment. The packed form is
// purpose(8) | agent(24) | condition(16) | game(16), so labels are unique as
// long as agent < 2^24 and condition/game < 2^16.
struct StreamLabel {
  StreamPurpose purpose = StreamPurpose::kGamePlay;
  uint32_t agent = 0;
  uint16_t condition = 0;
  uint16_t game = 0;

  uint64_t packed() const;
};

// Derives the seed for one stream:
//
//   seed = mix64(master_seed ^ mix64(label.packed() ^ 0x9E3779B97F4A7C15))
//
// mix64 is a bijection, so for a fixed master seed distinct labels always
// produce distinct stream seeds. The derivation is pure integer arithmetic
// and identical on every platform; tests/test_rng.cpp pins golden values.
uint64_t derive_stream_seed(uint64_t master_seed, const StreamLabel& label);

// xoshiro256++ generator, state seeded by SplitMix64 expansion of a 64-bit
// seed. All distributions are implemented here rather than pulled from
// <random> so that streams are reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t next_u64();

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01();

  // Uniform in [lo, hi).
  double uniform(double lo, double hi);

  // Unbiased uniform integer in [0, bound). bound must be nonzero.
  uint64_t below(uint64_t bound);

  bool bernoulli(double p);

  // Number of successes in `attempts` independent trials at probability p.
  int binomial(int attempts, double p);

  // Fisher-Yates shuffle, walking from the back of the vector.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  uint64_t state_[4];
};

}  // namespace castlesim
