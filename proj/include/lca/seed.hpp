/* Copyright 2026 The lca Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Seeds and the deterministic hash primitives every other module draws its
// randomness from. All functions here are pure; the exact bit layout is
// fixed so experiment outputs reproduce across platforms:
//
//   mix64(z)          SplitMix64 finalizer
//   absorb(h, w)      mix64((h ^ w) + 0x9e3779b97f4a7c15)
//   keyed_hash(k, x)  mix64(mix64((x ^ k) + 0x9e3779b97f4a7c15) + k)
//   Seed::digest(t)   absorb over t, key[0..3], ensemble (in that order)
//   derive_subseed    lane i of the child key is the absorb chain over
//                     (0x5eed0000 + i, key[0..3], ensemble, |label|,
//                      label as little-endian 8-byte words, zero padded)

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "lca/error.hpp"

namespace lca {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t absorb(std::uint64_t h, std::uint64_t w) noexcept {
  return mix64((h ^ w) + kGolden);
}

constexpr std::uint64_t keyed_hash(std::uint64_t key, std::uint64_t x) noexcept {
  return mix64(mix64((x ^ key) + kGolden) + key);
}

// Domain tags for Seed::digest.
namespace domain {
inline constexpr std::uint64_t kRank = 0x72616e6b;     // "rank"
inline constexpr std::uint64_t kRange = 0x72616e6765;  // "range"
inline constexpr std::uint64_t kStream = 0x7374726d;   // "strm"
inline constexpr std::uint64_t kCoin = 0x636f696e;     // "coin"
}  // namespace domain

struct Seed {
  std::array<std::uint64_t, 4> key{};
  std::uint64_t ensemble = 0;

  friend bool operator==(const Seed&, const Seed&) = default;

  static Seed from_u64(std::uint64_t x, std::uint64_t ensemble = 0) {
    return Seed{{x, 0, 0, 0}, ensemble};
  }

  // Parses exactly 64 hex digits; key[0] holds the first 16.
  static Seed from_hex(std::string_view hex) {
    LCA_REQUIRE(hex.size() == 64, "seed must be exactly 64 hex characters");
    Seed s;
    for (std::size_t i = 0; i < 64; ++i) {
      const char c = hex[i];
      std::uint64_t nibble;
      if (c >= '0' && c <= '9') {
        nibble = static_cast<std::uint64_t>(c - '0');
      } else if (c >= 'a' && c <= 'f') {
        nibble = static_cast<std::uint64_t>(c - 'a' + 10);
      } else if (c >= 'A' && c <= 'F') {
        nibble = static_cast<std::uint64_t>(c - 'A' + 10);
      } else {
        throw InvalidArgument("seed contains a non-hex character");
      }
      s.key[i / 16] = (s.key[i / 16] << 4) | nibble;
    }
    return s;
  }

  std::string to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out(64, '0');
    for (std::size_t i = 0; i < 64; ++i) {
      const unsigned shift = static_cast<unsigned>(60 - 4 * (i % 16));
      out[i] = kDigits[(key[i / 16] >> shift) & 0xf];
    }
    return out;
  }

  Seed with_ensemble(std::uint64_t e) const {
    Seed s = *this;
    s.ensemble = e;
    return s;
  }

  std::uint64_t digest(std::uint64_t tag) const noexcept {
    std::uint64_t h = tag;
    for (auto w : key) h = absorb(h, w);
    return absorb(h, ensemble);
  }
};

inline Seed derive_subseed(const Seed& seed, std::string_view label) {
  Seed out;
  out.ensemble = seed.ensemble;
  for (std::size_t lane = 0; lane < 4; ++lane) {
    std::uint64_t h = 0x5eed0000ULL + lane;
    for (auto w : seed.key) h = absorb(h, w);
    h = absorb(h, seed.ensemble);
    h = absorb(h, label.size());
    for (std::size_t i = 0; i < label.size(); i += 8) {
      std::uint64_t word = 0;
      for (std::size_t j = 0; j < 8 && i + j < label.size(); ++j) {
        word |= static_cast<std::uint64_t>(static_cast<unsigned char>(label[i + j])) << (8 * j);
      }
      h = absorb(h, word);
    }
    out.key[lane] = h;
  }
  return out;
}

inline Seed derive_subseed(const Seed& seed, std::string_view label, std::uint64_t index) {
  return derive_subseed(seed, std::string(label) + "/" + std::to_string(index));
}

// SplitMix64 sequence. Satisfies UniformRandomBitGenerator so it can feed
// <random> distributions, but below() and uniform01() are what the library
// uses when bit-exact output matters.
class SeedStream {
 public:
  using result_type = std::uint64_t;

  explicit SeedStream(std::uint64_t state) noexcept : state_(state) {}
  explicit SeedStream(const Seed& seed) noexcept : state_(seed.digest(domain::kStream)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    state_ += kGolden;
    return mix64(state_);
  }

  // Unbiased integer in [0, bound) by multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound) {
    LCA_REQUIRE(bound > 0, "bound must be positive");
    std::uint64_t x = (*this)();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        x = (*this)();
        m = static_cast<__uint128_t>(x) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) noexcept { return uniform01() < p; }

 private:
  std::uint64_t state_;
};

inline std::uint64_t random_in_range(const Seed& seed, std::string_view label, std::uint64_t bound) {
  LCA_REQUIRE(bound > 0, "random_in_range: bound must be positive");
  SeedStream stream(derive_subseed(seed, label).digest(domain::kRange));
  return stream.below(bound);
}

// Fisher-Yates with SeedStream, so shuffles do not depend on the standard
// library's unspecified std::shuffle.
template <typename Container>
void shuffle(Container& items, SeedStream& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace lca
