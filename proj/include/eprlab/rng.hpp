#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace eprlab {

// Philox4x64-10 counter-based generator. Stateless: every 256-bit output
// block is a pure function of (counter, key), so independent streams are
// addressed rather than advanced and results do not depend on evaluation
// order or thread count.
struct Philox4x64 {
  static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
  static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
  static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

  static std::array<std::uint64_t, 4> block(std::array<std::uint64_t, 4> counter,
                                            std::array<std::uint64_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      const auto prod0 = mul128(kMul0, counter[0]);
      const auto prod1 = mul128(kMul1, counter[2]);
      counter = {prod1.hi ^ counter[1] ^ key[0], prod1.lo,
                 prod0.hi ^ counter[3] ^ key[1], prod0.lo};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return counter;
  }

 private:
  struct U128 {
    std::uint64_t hi, lo;
  };
  static U128 mul128(std::uint64_t a, std::uint64_t b) {
    const unsigned __int128 p =
        static_cast<unsigned __int128>(a) * static_cast<unsigned __int128>(b);
    return {static_cast<std::uint64_t>(p >> 64), static_cast<std::uint64_t>(p)};
  }
};

// Addressed random draws: one (stream, counter) pair identifies one draw
// event. Consumers never share a counter between different draw kinds.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  std::array<std::uint64_t, 4> raw(std::uint64_t counter) const {
    return Philox4x64::block({counter, stream_, 0, 0}, {seed_, 0});
  }

  // One uniform in [0, 1) from the top 53 bits of word 0.
  double uniform(std::uint64_t counter) const { return to_unit(raw(counter)[0]); }

  // Two independent uniforms from one block.
  std::array<double, 2> uniform_pair(std::uint64_t counter) const {
    const auto b = raw(counter);
    return {to_unit(b[0]), to_unit(b[1])};
  }

  // Box-Muller pair of standard normals from one block.
  std::array<double, 2> normal_pair(std::uint64_t counter) const {
    const auto b = raw(counter);
    // Guard u1 away from 0 so log stays finite.
    const double u1 = (static_cast<double>(b[0] >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = to_unit(b[1]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  static double to_unit(std::uint64_t w) {
    return static_cast<double>(w >> 11) * 0x1.0p-53;
  }
  std::uint64_t seed_;
  std::uint64_t stream_;
};

}  // namespace eprlab
