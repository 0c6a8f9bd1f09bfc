#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace bgc {

// splitmix64 finalizer (Stafford variant). Every seeded choice in the library
// (fingerprint hashing, shuffles, per-task seeds) goes through this mixer so
// that results are bit-stable across platforms; std::shuffle and the standard
// distributions are implementation-defined and deliberately avoided.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic 64-bit stream (splitmix64).
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  // Value in [0, bound), bound > 0. Fixed-point reduction; the ~2^-64
  // bias is irrelevant here and keeps the sequence platform-stable.
  constexpr std::uint64_t next_below(std::uint64_t bound) noexcept {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

 private:
  std::uint64_t state_;
};

// Fisher-Yates driven by SplitMix64.
template <class T>
void shuffle_span(std::span<T> values, SplitMix64& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace bgc
