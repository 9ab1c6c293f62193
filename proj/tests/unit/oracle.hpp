#pragma once

// Deliberately naive reference implementations used to cross-check the library.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;

inline bool trial_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::vector<bool> sieve(u64 n) {
  std::vector<bool> prime(n + 1, true);
  prime[0] = false;
  if (n >= 1) prime[1] = false;
  for (u64 i = 2; i * i <= n; ++i) {
    if (!prime[i]) continue;
    for (u64 j = i * i; j <= n; j += i) prime[j] = false;
  }
  return prime;
}

// Affine point or infinity (nullopt) on y^2 = x^3 + a x + b over Q.
using Pt = std::optional<std::pair<mpq_class, mpq_class>>;

struct Curve {
  mpq_class a, b;

  Pt add(const Pt& P, const Pt& Q) const {
    if (!P) return Q;
    if (!Q) return P;
    const auto& [x1, y1] = *P;
    const auto& [x2, y2] = *Q;
    mpq_class lambda;
    if (x1 == x2) {
      if (y1 + y2 == 0) return std::nullopt;
      lambda = (3 * x1 * x1 + a) / (2 * y1);
    } else {
      lambda = (y2 - y1) / (x2 - x1);
    }
    mpq_class x3 = lambda * lambda - x1 - x2;
    mpq_class y3 = lambda * (x1 - x3) - y1;
    x3.canonicalize();
    y3.canonicalize();
    return std::make_pair(x3, y3);
  }

  // n >= 0 by repeated addition.
  Pt times(u64 n, const Pt& P) const {
    Pt R;
    for (u64 i = 0; i < n; ++i) R = add(R, P);
    return R;
  }

  bool on(const Pt& P) const {
    if (!P) return true;
    const auto& [x, y] = *P;
    return y * y == x * x * x + a * x + b;
  }
};

// #E(F_p) by trying every (x, y).
inline u64 count_points(long a, long b, u64 p) {
  u64 count = 1;
  const long P = static_cast<long>(p);
  auto mod = [&](long v) { return ((v % P) + P) % P; };
  for (long x = 0; x < P; ++x) {
    const long rhs = mod(mod(mod(x * x) * x) + mod(a) * x + mod(b));
    for (long y = 0; y < P; ++y) {
      if (mod(y * y) == rhs) ++count;
    }
  }
  return count;
}

// Order of (x, y) mod p by repeated addition in F_p.
inline u64 order_mod_p(long a, long x0, long y0, u64 p) {
  const long P = static_cast<long>(p);
  auto mod = [&](long v) { return ((v % P) + P) % P; };
  auto inv = [&](long v) {
    long r = 1, e = P - 2, base = mod(v);
    while (e) {
      if (e & 1) r = r * base % P;
      base = base * base % P;
      e >>= 1;
    }
    return r;
  };
  std::optional<std::pair<long, long>> R;
  const std::pair<long, long> A{mod(x0), mod(y0)};
  for (u64 n = 1;; ++n) {
    if (!R) {
      R = A;
    } else {
      const auto [x1, y1] = *R;
      const auto [x2, y2] = A;
      long lambda;
      if (x1 == x2) {
        if (mod(y1 + y2) == 0) {
          R.reset();
          return n;
        }
        lambda = mod(mod(3 * x1 % P * x1 + a) * inv(2 * y1));
      } else {
        lambda = mod(mod(y2 - y1) * inv(mod(x2 - x1)));
      }
      const long x3 = mod(lambda * lambda - x1 - x2);
      const long y3 = mod(lambda * mod(x1 - x3) - y1);
      R = std::make_pair(x3, y3);
    }
  }
}

// Direct transcription of the greedy rule: include the next prime iff a/z < r.
inline std::pair<u64, u64> greedy_half(u64 steps) {
  u64 a = 1, z = 1;  // A_1 = Z_1 = {first prime}
  for (u64 i = 1; i < steps; ++i) {
    if (2 * a < z) ++a;  // a/z < 1/2
    ++z;
  }
  return {a, z};
}

}  // namespace oracle
