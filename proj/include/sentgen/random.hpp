#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace sentgen {

// Anything that yields doubles in [0, 1).
template <typename T>
concept UnitSource = requires(T& t) {
  { t.next() } -> std::convertible_to<double>;
};

// The POSIX 48-bit linear congruential generator behind srand48()/drand48().
class Lcg48 {
 public:
  static constexpr std::uint64_t kMultiplier = 0x5DEECE66DULL;
  static constexpr std::uint64_t kIncrement = 0xB;
  static constexpr std::uint64_t kMask = (std::uint64_t{1} << 48) - 1;
  static constexpr std::uint64_t kSeedLow = 0x330E;

  explicit Lcg48(std::uint64_t seed = 0) { reseed(seed); }

  // srand48(): high 32 bits from the seed, low 16 bits fixed.
  void reseed(std::uint64_t seed) { state_ = ((seed & 0xFFFFFFFFULL) << 16) | kSeedLow; }

  std::uint64_t state() const { return state_; }

  double next() {
    state_ = (kMultiplier * state_ + kIncrement) & kMask;
    return static_cast<double>(state_) * 0x1.0p-48;
  }

 private:
  std::uint64_t state_ = kSeedLow;
};

// Not stream-compatible with the original; 53-bit doubles from mt19937_64.
class Mt64Source {
 public:
  explicit Mt64Source(std::uint64_t seed = 0) : engine_(seed) {}

  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

enum class RngMode { lcg48, implementation_default };

inline std::string_view to_string(RngMode m) { return m == RngMode::lcg48 ? "lcg48" : "default"; }

inline RngMode parse_rng_mode(std::string_view s) {
  if (s == "lcg48") return RngMode::lcg48;
  if (s == "default" || s == "mt64") return RngMode::implementation_default;
  throw std::invalid_argument("unknown rng mode '" + std::string(s) + "' (expected lcg48 or default)");
}

// Runtime-selected generator; the sequence is a pure function of (mode, seed).
class RandomSource {
 public:
  RandomSource(RngMode mode, std::uint64_t seed) {
    if (mode == RngMode::lcg48) impl_.emplace<Lcg48>(seed);
    else impl_.emplace<Mt64Source>(seed);
  }

  RngMode mode() const { return std::holds_alternative<Lcg48>(impl_) ? RngMode::lcg48 : RngMode::implementation_default; }

  double next() {
    return std::visit([](auto& g) { return g.next(); }, impl_);
  }

 private:
  std::variant<Lcg48, Mt64Source> impl_;
};

// Index in [0, n). Computed as u / (1/n), the same expression the original
// used; the clamp only matters for u within an ulp of 1.
template <UnitSource Source>
std::size_t choose_uniform(Source& source, std::size_t n) {
  double u = source.next();
  auto idx = static_cast<std::size_t>(u / (1.0 / static_cast<double>(n)));
  return idx < n ? idx : n - 1;
}

// Wraps another source and counts draws.
template <UnitSource Inner>
class CountingSource {
 public:
  explicit CountingSource(Inner inner) : inner_(std::move(inner)) {}

  double next() {
    ++draws_;
    return inner_.next();
  }

  std::size_t draws() const { return draws_; }

 private:
  Inner inner_;
  std::size_t draws_ = 0;
};

}  // namespace sentgen
