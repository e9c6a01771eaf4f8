#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace dagbuild {

// Philox4x64-10 counter-based generator (multipliers and Weyl constants from
// the Random123 family; the stream matches numpy.random.Philox for the same
// key and a zero counter). Every random draw in the library flows through
// this engine, so all outputs are bit-reproducible for a given seed.
class Philox4x64 {
 public:
  explicit Philox4x64(std::uint64_t seed) : key_{seed, kKeyTweak} {}
  Philox4x64(std::uint64_t key0, std::uint64_t key1) : key_{key0, key1} {}

  std::uint64_t next_u64() {
    if (pos_ == 4) {
      fill_block();
      pos_ = 0;
    }
    return block_[pos_++];
  }

 private:
  static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ull;
  static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ull;
  static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
  static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73Bull;
  // Second key word used when seeding from a single 64-bit value.
  static constexpr std::uint64_t kKeyTweak = 0x9E3779B97F4A7C15ull;

  static void mul_hi_lo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                        std::uint64_t& lo) {
    const unsigned __int128 p =
        static_cast<unsigned __int128>(a) * static_cast<unsigned __int128>(b);
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
  }

  void fill_block() {
    // the 256-bit counter is bumped before each block, as numpy does
    for (int w = 0; w < 4; ++w) {
      if (++counter_[w] != 0) break;
    }
    std::array<std::uint64_t, 4> x = counter_;
    std::array<std::uint64_t, 2> k = key_;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        k[0] += kWeyl0;
        k[1] += kWeyl1;
      }
      std::uint64_t hi0, lo0, hi1, lo1;
      mul_hi_lo(kMul0, x[0], hi0, lo0);
      mul_hi_lo(kMul1, x[2], hi1, lo1);
      x = {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
    }
    block_ = x;
  }

  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> counter_{0, 0, 0, 0};
  std::array<std::uint64_t, 4> block_{};
  int pos_ = 4;
};

// Sampling front end over Philox4x64. The mappings below are fixed so that
// the same seed always produces the same values:
//   uniform01      : top 53 bits -> [0, 1)
//   uniform01_open : top 53 bits + 1 -> (0, 1]
//   normal         : Box-Muller transform of one (0,1] x [0,1) pair
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_.next_u64(); }

  // [0, 1) with 53-bit resolution
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // (0, 1]; never zero, safe under log()
  double uniform01_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // (lo, hi]
  double uniform(double lo, double hi) {
    return lo + uniform01_open() * (hi - lo);
  }

  // unbiased draw from [0, bound) by rejection
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // standard normal via Box-Muller; the second value of each pair is cached
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01_open();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
  }

  // uniformly random permutation of {0..n-1} (Fisher-Yates)
  std::vector<int> permutation(int n) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    for (int i = n - 1; i > 0; --i) {
      const auto j = static_cast<int>(below(static_cast<std::uint64_t>(i) + 1));
      std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
    }
    return p;
  }

 private:
  Philox4x64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace dagbuild
