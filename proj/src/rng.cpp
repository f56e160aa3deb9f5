#include "castlesim/rng.h"

#include <stdexcept>

namespace castlesim {

namespace {

constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

uint64_t StreamLabel::packed() const {
  return (static_cast<uint64_t>(purpose) << 56) |
         (static_cast<uint64_t>(agent & 0xFFFFFFu) << 32) |
         (static_cast<uint64_t>(condition) << 16) | static_cast<uint64_t>(game);
}

uint64_t derive_stream_seed(uint64_t master_seed, const StreamLabel& label) {
  return mix64(master_seed ^ mix64(label.packed() ^ kGolden));
}

Rng::Rng(uint64_t seed) {
  // SplitMix64 state expansion, the reference seeding for xoshiro.
  uint64_t s = seed;
  for (auto& word : state_) {
    s += kGolden;
    word = mix64(s);
  }
}

uint64_t Rng::next_u64() {
  // xoshiro256++
  const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

uint64_t Rng::below(uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below: zero bound");
  // Rejection sampling over the largest multiple of bound.
  const uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

bool Rng::bernoulli(double p) { return uniform01() < p; }

int Rng::binomial(int attempts, double p) {
  int successes = 0;
  for (int i = 0; i < attempts; ++i) {
    if (bernoulli(p)) ++successes;
  }
  return successes;
}

}  // namespace castlesim
