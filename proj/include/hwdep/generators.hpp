#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hwdep {

// 64-bit avalanche mixer over a Weyl counter. Serves as the control
// generator (its output is statistically indistinguishable from random for
// these purposes) and as the state filler for deterministic seeding of the
// linear families.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed = 0) : x_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (x_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t x_;
};

namespace detail {

template <std::size_t N>
inline void seed_state(std::array<std::uint64_t, N>& s, std::uint64_t seed) {
  SplitMix64 mix(seed);
  bool nonzero = false;
  for (auto& w : s) {
    w = mix.next();
    nonzero |= w != 0;
  }
  if (!nonzero) s[0] = 0x9E3779B97F4A7C15ull;  // linear families need state != 0
}

}  // namespace detail

// The original 128-bit xorshift on four 32-bit lanes, shift triple
// (11, 19, 8). Two consecutive 32-bit outputs are glued, low half first,
// into each 64-bit word.
class Xorshift128 {
 public:
  explicit Xorshift128(std::uint64_t seed = 1) {
    SplitMix64 mix(seed);
    const std::uint64_t a = mix.next(), b = mix.next();
    x_ = static_cast<std::uint32_t>(a);
    y_ = static_cast<std::uint32_t>(a >> 32);
    z_ = static_cast<std::uint32_t>(b);
    w_ = static_cast<std::uint32_t>(b >> 32);
    if ((x_ | y_ | z_ | w_) == 0) x_ = 0x9E3779B9u;
  }

  void set_state(std::uint32_t x, std::uint32_t y, std::uint32_t z, std::uint32_t w) {
    x_ = x;
    y_ = y;
    z_ = z;
    w_ = w;
  }

  std::uint32_t next32() noexcept {
    const std::uint32_t t = x_ ^ (x_ << 11);
    x_ = y_;
    y_ = z_;
    z_ = w_;
    return w_ = w_ ^ (w_ >> 19) ^ t ^ (t >> 8);
  }

  std::uint64_t next() noexcept {
    const std::uint64_t lo = next32();
    return lo | (std::uint64_t(next32()) << 32);
  }

 private:
  std::uint32_t x_, y_, z_, w_;
};

// Same engine with the + scrambler: outputs the sum of the two state words
// taken before the update.
class Xorshift128Plus {
 public:
  explicit Xorshift128Plus(std::uint64_t seed = 1) { detail::seed_state(s_, seed); }

  void set_state(std::uint64_t a, std::uint64_t b) { s_ = {a, b}; }

  std::uint64_t next() noexcept {
    std::uint64_t s1 = s_[0];
    const std::uint64_t s0 = s_[1];
    const std::uint64_t result = s0 + s1;
    s_[0] = s0;
    s1 ^= s1 << 23;
    s_[1] = s1 ^ s0 ^ (s1 >> 18) ^ (s0 >> 5);
    return result;
  }

 private:
  std::array<std::uint64_t, 2> s_;
};

// The linear xorshift engine on sixteen 64-bit words cycled through an
// index, shift triple (31, 11, 30); outputs the freshly computed word.
class Xorshift1024 {
 public:
  explicit Xorshift1024(std::uint64_t seed = 1) { detail::seed_state(s_, seed); }

  void set_state(const std::array<std::uint64_t, 16>& s, int index = 0) {
    s_ = s;
    p_ = index & 15;
  }

  std::uint64_t next() noexcept {
    const std::uint64_t s0 = s_[p_];
    std::uint64_t s1 = s_[p_ = (p_ + 1) & 15];
    s1 ^= s1 << 31;
    return s_[p_] = s1 ^ s0 ^ (s1 >> 11) ^ (s0 >> 30);
  }

 private:
  std::array<std::uint64_t, 16> s_;
  int p_ = 0;
};

// Same engine with a + scrambler: the freshly computed word plus the word it
// replaced.
class Xorshift1024Plus {
 public:
  explicit Xorshift1024Plus(std::uint64_t seed = 1) { detail::seed_state(s_, seed); }

  void set_state(const std::array<std::uint64_t, 16>& s, int index = 0) {
    s_ = s;
    p_ = index & 15;
  }

  std::uint64_t next() noexcept {
    const std::uint64_t s0 = s_[p_];
    std::uint64_t s1 = s_[p_ = (p_ + 1) & 15];
    s1 ^= s1 << 31;
    return (s_[p_] = s1 ^ s0 ^ (s1 >> 11) ^ (s0 >> 30)) + s0;
  }

 private:
  std::array<std::uint64_t, 16> s_;
  int p_ = 0;
};

// The linear xoroshiro engine on two 64-bit words, constants (24, 16, 37);
// outputs the first state word before the update.
class Xoroshiro128 {
 public:
  explicit Xoroshiro128(std::uint64_t seed = 1) { detail::seed_state(s_, seed); }

  void set_state(std::uint64_t a, std::uint64_t b) { s_ = {a, b}; }

  std::uint64_t next() noexcept {
    const std::uint64_t s0 = s_[0];
    std::uint64_t s1 = s_[1];
    const std::uint64_t result = s0;
    s1 ^= s0;
    s_[0] = std::rotl(s0, 24) ^ s1 ^ (s1 << 16);
    s_[1] = std::rotl(s1, 37);
    return result;
  }

 private:
  std::array<std::uint64_t, 2> s_;
};

// Same engine with the + scrambler: sum of the two state words before the
// update.
class Xoroshiro128Plus {
 public:
  explicit Xoroshiro128Plus(std::uint64_t seed = 1) { detail::seed_state(s_, seed); }

  void set_state(std::uint64_t a, std::uint64_t b) { s_ = {a, b}; }

  std::uint64_t next() noexcept {
    const std::uint64_t s0 = s_[0];
    std::uint64_t s1 = s_[1];
    const std::uint64_t result = s0 + s1;
    s1 ^= s0;
    s_[0] = std::rotl(s0, 24) ^ s1 ^ (s1 << 16);
    s_[1] = std::rotl(s1, 37);
    return result;
  }

 private:
  std::array<std::uint64_t, 2> s_;
};

// The linear xoroshiro engine on sixteen 64-bit words, constants
// (25, 27, 36); outputs the newly selected word before the update.
class Xoroshiro1024 {
 public:
  explicit Xoroshiro1024(std::uint64_t seed = 1) { detail::seed_state(s_, seed); }

  void set_state(const std::array<std::uint64_t, 16>& s, int index = 0) {
    s_ = s;
    p_ = index & 15;
  }

  std::uint64_t next() noexcept {
    const int q = p_;
    const std::uint64_t s0 = s_[p_ = (p_ + 1) & 15];
    std::uint64_t s15 = s_[q];
    const std::uint64_t result = s0;
    s15 ^= s0;
    s_[q] = std::rotl(s0, 25) ^ s15 ^ (s15 << 27);
    s_[p_] = std::rotl(s15, 36);
    return result;
  }

 private:
  std::array<std::uint64_t, 16> s_;
  int p_ = 0;
};

// Same engine with a + scrambler: sum of the two words read before the
// update.
class Xoroshiro1024Plus {
 public:
  explicit Xoroshiro1024Plus(std::uint64_t seed = 1) { detail::seed_state(s_, seed); }

  void set_state(const std::array<std::uint64_t, 16>& s, int index = 0) {
    s_ = s;
    p_ = index & 15;
  }

  std::uint64_t next() noexcept {
    const int q = p_;
    const std::uint64_t s0 = s_[p_ = (p_ + 1) & 15];
    std::uint64_t s15 = s_[q];
    const std::uint64_t result = s0 + s15;
    s15 ^= s0;
    s_[q] = std::rotl(s0, 25) ^ s15 ^ (s15 << 27);
    s_[p_] = std::rotl(s15, 36);
    return result;
  }

 private:
  std::array<std::uint64_t, 16> s_;
  int p_ = 0;
};

enum class Family {
  xorshift128,
  xorshift128plus,
  xorshift1024,
  xorshift1024plus,
  xoroshiro128,
  xoroshiro128plus,
  xoroshiro1024,
  xoroshiro1024plus,
  control,
};

inline Family parse_family(std::string_view name) {
  auto canon = std::string(name);
  if (auto pos = canon.find("plus"); pos != std::string::npos)
    canon.replace(pos, 4, "+");
  if (canon == "xorshift128") return Family::xorshift128;
  if (canon == "xorshift128+") return Family::xorshift128plus;
  if (canon == "xorshift1024") return Family::xorshift1024;
  if (canon == "xorshift1024+") return Family::xorshift1024plus;
  if (canon == "xoroshiro128") return Family::xoroshiro128;
  if (canon == "xoroshiro128+") return Family::xoroshiro128plus;
  if (canon == "xoroshiro1024") return Family::xoroshiro1024;
  if (canon == "xoroshiro1024+") return Family::xoroshiro1024plus;
  if (canon == "control") return Family::control;
  throw std::invalid_argument("unknown generator family: " + std::string(name));
}

inline const char* family_name(Family f) noexcept {
  switch (f) {
    case Family::xorshift128: return "xorshift128";
    case Family::xorshift128plus: return "xorshift128+";
    case Family::xorshift1024: return "xorshift1024";
    case Family::xorshift1024plus: return "xorshift1024+";
    case Family::xoroshiro128: return "xoroshiro128";
    case Family::xoroshiro128plus: return "xoroshiro128+";
    case Family::xoroshiro1024: return "xoroshiro1024";
    case Family::xoroshiro1024plus: return "xoroshiro1024+";
    case Family::control: return "control";
  }
  return "?";
}

inline int state_bits(Family f) noexcept {
  switch (f) {
    case Family::xorshift128:
    case Family::xorshift128plus:
    case Family::xoroshiro128:
    case Family::xoroshiro128plus:
      return 128;
    case Family::xorshift1024:
    case Family::xorshift1024plus:
    case Family::xoroshiro1024:
    case Family::xoroshiro1024plus:
      return 1024;
    case Family::control:
      return 64;
  }
  return 0;
}

}  // namespace hwdep
