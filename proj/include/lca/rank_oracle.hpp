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

// Arrival order of the simulated online algorithm. Every LCA query derives
// ranks from the same (seed, ordering kind), so all queries see one
// permutation without ever materializing it.

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lca/error.hpp"
#include "lca/seed.hpp"

namespace lca {

// Position in the arrival order: value / 2^64 is a point in [0, 1).
// Ordered lexicographically by (value, owner), so distinct owners never tie.
struct Rank {
  std::uint64_t value = 0;
  std::uint64_t owner = 0;

  friend constexpr auto operator<=>(const Rank&, const Rank&) = default;

  double as_unit() const noexcept { return static_cast<double>(value) * 0x1.0p-64; }
};

constexpr std::strong_ordering compare(const Rank& a, const Rank& b) noexcept { return a <=> b; }

struct FullPseudorandom {
  friend bool operator==(const FullPseudorandom&, const FullPseudorandom&) = default;
};

struct KWiseIndependent {
  std::uint32_t k = 1;
  std::uint64_t prime = 0;
  friend bool operator==(const KWiseIndependent&, const KWiseIndependent&) = default;
};

using OrderingKind = std::variant<FullPseudorandom, KWiseIndependent>;

inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) noexcept {
  return static_cast<std::uint64_t>(static_cast<__uint128_t>(a) * b % p);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t p) noexcept {
  std::uint64_t result = 1 % p;
  base %= p;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, p);
    base = mulmod(base, base, p);
    exp >>= 1;
  }
  return result;
}

}  // namespace detail

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
inline bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = detail::powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = detail::mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// x -> sum_{i<k} a_i x^i mod p. Values at any k distinct points are
// independent and uniform over the field when the coefficients are.
class KWisePolynomial {
 public:
  KWisePolynomial(std::vector<std::uint64_t> coefficients, std::uint64_t prime)
      : coefficients_(std::move(coefficients)), prime_(prime) {
    LCA_REQUIRE(!coefficients_.empty(), "k-wise polynomial needs k >= 1 coefficients");
    LCA_REQUIRE(prime_ >= 2 && prime_ < (std::uint64_t{1} << 63), "k-wise prime must lie in [2, 2^63)");
    for (auto& a : coefficients_) a %= prime_;
  }

  // Coefficients a_i = random_in_range(seed, "kwise/coef/i", p).
  static KWisePolynomial from_seed(const Seed& seed, std::uint32_t k, std::uint64_t prime) {
    LCA_REQUIRE(k >= 1, "k-wise ordering needs k >= 1");
    std::vector<std::uint64_t> coefficients(k);
    for (std::uint32_t i = 0; i < k; ++i) {
      coefficients[i] = random_in_range(seed, "kwise/coef/" + std::to_string(i), prime);
    }
    return KWisePolynomial(std::move(coefficients), prime);
  }

  std::uint64_t evaluate(std::uint64_t x) const noexcept {
    x %= prime_;
    std::uint64_t acc = 0;
    for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
      acc = detail::mulmod(acc, x, prime_) + *it;
      if (acc >= prime_) acc -= prime_;
    }
    return acc;
  }

  // floor(evaluate(x) * 2^64 / p); monotone, so field order equals rank order.
  std::uint64_t scaled(std::uint64_t x) const noexcept {
    return static_cast<std::uint64_t>((static_cast<__uint128_t>(evaluate(x)) << 64) / prime_);
  }

  std::uint64_t prime() const noexcept { return prime_; }
  std::size_t k() const noexcept { return coefficients_.size(); }

 private:
  std::vector<std::uint64_t> coefficients_;
  std::uint64_t prime_;
};

// Ranks for ids in [0, universe). Construction validates the ordering kind;
// lookups are then O(1) (full pseudorandom) or O(k) (k-wise).
class RankOracle {
 public:
  RankOracle(const Seed& seed, const OrderingKind& kind, std::uint64_t universe)
      : universe_(universe), kind_(kind) {
    if (const auto* kw = std::get_if<KWiseIndependent>(&kind)) {
      LCA_REQUIRE(kw->k >= 1, "k-wise ordering needs k >= 1");
      LCA_REQUIRE(kw->prime > universe, "k-wise prime must exceed the universe size");
      LCA_REQUIRE(is_prime(kw->prime), "k-wise modulus must be prime");
      polynomial_.emplace_back(KWisePolynomial::from_seed(derive_subseed(seed, "kwise"), kw->k, kw->prime));
    } else {
      key_ = seed.digest(domain::kRank);
    }
  }

  Rank rank_of(std::uint64_t id) const {
    if (id >= universe_) {
      throw InvalidArgument("rank_of: id " + std::to_string(id) + " outside universe of size " +
                            std::to_string(universe_));
    }
    if (polynomial_.empty()) return Rank{keyed_hash(key_, id), id};
    return Rank{polynomial_.front().scaled(id), id};
  }

  Rank operator()(std::uint64_t id) const { return rank_of(id); }

  std::uint64_t universe() const noexcept { return universe_; }
  const OrderingKind& kind() const noexcept { return kind_; }

 private:
  std::uint64_t universe_;
  OrderingKind kind_;
  std::uint64_t key_ = 0;
  std::vector<KWisePolynomial> polynomial_;  // empty or one element
};

inline Rank rank_of(const Seed& seed, const OrderingKind& kind, std::uint64_t universe, std::uint64_t id) {
  return RankOracle(seed, kind, universe).rank_of(id);
}

inline std::string describe(const OrderingKind& kind) {
  if (const auto* kw = std::get_if<KWiseIndependent>(&kind)) {
    return "kwise(k=" + std::to_string(kw->k) + ",p=" + std::to_string(kw->prime) + ")";
  }
  return "full";
}

}  // namespace lca
