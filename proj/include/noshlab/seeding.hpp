#pragma once

#include <cstdint>
#include <initializer_list>

namespace noshlab {

/// SplitMix64 finaliser: a bijective avalanche on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Sequential SplitMix64 stream for deriving independent sub-seeds.
class SeedSequence {
 public:
  explicit constexpr SeedSequence(std::uint64_t seed) noexcept : state_(seed) {}
  constexpr std::uint64_t next() noexcept {
    const std::uint64_t out = splitmix64(state_);
    state_ += 0x9e3779b97f4a7c15ULL;
    return out;
  }

 private:
  std::uint64_t state_;
};

/// Order-sensitive hash of a tuple of words. Each step is a bijection of the
/// running state for a fixed word, so tuples differing in one position never collide.
constexpr std::uint64_t mix_words(std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t h = 0x6a09e667f3bcc908ULL;
  for (std::uint64_t w : words) h = splitmix64(h ^ splitmix64(w));
  return h;
}

}  // namespace noshlab
