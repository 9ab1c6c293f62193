#include "edsq/arith.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "edsq/error.hpp"

namespace edsq {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 b, u64 e, u64 m) {
  u64 r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

bool miller_rabin_u64(u64 n, u64 a) {
  if (a % n == 0) return true;
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  u64 x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

// Primes cache shared by trial division and prime_pi.
struct SieveCache {
  std::mutex mu;
  u64 bound = 0;
  std::shared_ptr<const std::vector<u64>> primes = std::make_shared<std::vector<u64>>();

  std::shared_ptr<const std::vector<u64>> ensure(u64 b) {
    std::lock_guard lock(mu);
    if (b > bound) {
      u64 nb = std::max<u64>(b, 2 * bound);
      primes = std::make_shared<const std::vector<u64>>(primes_up_to(nb));
      bound = nb;
    }
    return primes;
  }
};

SieveCache& sieve_cache() {
  static SieveCache cache;
  return cache;
}

Int rho_brent(const Int& n, u64 c0, u64 max_rounds) {
  // f(x) = x^2 + c mod n, Brent's cycle detection with batched gcds.
  Int y = 2, x, ys, q = 1, g = 1, c = c0, tmp;
  u64 r = 1, rounds = 0;
  const u64 m = 128;
  while (g == 1) {
    x = y;
    for (u64 i = 0; i < r; ++i) {
      y = (y * y + c) % n;
    }
    u64 k = 0;
    while (k < r && g == 1) {
      ys = y;
      u64 lim = std::min(m, r - k);
      for (u64 i = 0; i < lim; ++i) {
        y = (y * y + c) % n;
        tmp = x - y;
        q = (q * abs(tmp)) % n;
      }
      g = gcd(q, n);
      k += m;
      rounds += lim;
      if (rounds > max_rounds) return 1;
    }
    r *= 2;
  }
  if (g == n) {
    do {
      ys = (ys * ys + c) % n;
      tmp = x - ys;
      g = gcd(abs(tmp), n);
    } while (g == 1);
  }
  return g;
}

// n = root^k with k prime, if n is a perfect power.
std::optional<std::pair<Int, unsigned>> perfect_power_root(const Int& n) {
  if (!mpz_perfect_power_p(n.get_mpz_t())) return std::nullopt;
  const u64 bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  Int root;
  for (u64 k = 2; k <= bits; k = next_prime_after(k)) {
    if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k)) return std::make_pair(root, static_cast<unsigned>(k));
  }
  return std::nullopt;
}

void add_factor(std::map<Int, unsigned>& acc, const Int& p, unsigned e) { acc[p] += e; }

// Splits a cofactor with no factors below the trial bound.
void split(const Int& n, const FactorBudget& budget, std::map<Int, unsigned>& acc,
           std::vector<Int>& stuck, unsigned mult) {
  if (n == 1) return;
  if (is_prime(n)) {
    add_factor(acc, n, mult);
    return;
  }
  if (auto pp = perfect_power_root(n)) {
    split(pp->first, budget, acc, stuck, mult * pp->second);
    return;
  }
  if (mpz_sizeinbase(n.get_mpz_t(), 2) > budget.max_bits) {
    for (unsigned i = 0; i < mult; ++i) stuck.push_back(n);
    return;
  }
  for (u64 c = 1; c <= 3; ++c) {
    Int f = rho_brent(n, c, budget.rho_rounds / 3 + 1);
    if (f != 1 && f != n) {
      Int other = n / f;
      split(f, budget, acc, stuck, mult);
      split(other, budget, acc, stuck, mult);
      return;
    }
  }
  for (unsigned i = 0; i < mult; ++i) stuck.push_back(n);
}

}  // namespace

Int to_int(std::uint64_t v) {
  Int r;
  mpz_import(r.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return r;
}

bool fits_u64(const Int& v) { return sgn(v) >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64; }

std::uint64_t to_u64(const Int& v) {
  if (!fits_u64(v)) fail_argument("integer does not fit in 64 bits: " + v.get_str());
  std::uint64_t r = 0;
  if (v != 0) mpz_export(&r, nullptr, 1, sizeof(r), 0, 0, v.get_mpz_t());
  return r;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t bound) {
  std::vector<std::uint64_t> out;
  if (bound < 2) return out;
  std::vector<bool> composite(bound + 1, false);
  for (u64 i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    if (i <= bound / i) {
      for (u64 j = i * i; j <= bound; j += i) composite[j] = true;
    }
  }
  return out;
}

std::uint64_t prime_pi(std::uint64_t x) {
  if (x < 2) return 0;
  const auto ps = sieve_cache().ensure(x);
  return static_cast<u64>(std::upper_bound(ps->begin(), ps->end(), x) - ps->begin());
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (!miller_rabin_u64(n, a)) return false;
  }
  return true;
}

bool is_prime(const Int& n) {
  if (n < 2) return false;
  if (fits_u64(n)) return is_prime_u64(to_u64(n));
  return mpz_probab_prime_p(n.get_mpz_t(), 64) != 0;
}

std::uint64_t next_prime_after(std::uint64_t n) {
  u64 c = n + 1;
  while (!is_prime_u64(c)) ++c;
  return c;
}

Int PartialFactorization::product() const {
  Int r = cofactor;
  for (const auto& f : factors) {
    Int pe;
    mpz_pow_ui(pe.get_mpz_t(), f.prime.get_mpz_t(), f.exponent);
    r *= pe;
  }
  return r;
}

std::vector<Int> PartialFactorization::primes() const {
  std::vector<Int> out;
  out.reserve(factors.size());
  for (const auto& f : factors) out.push_back(f.prime);
  return out;
}

PartialFactorization factor_u64(std::uint64_t n) {
  if (n == 0) fail_argument("factor: n must be positive");
  PartialFactorization out;
  for (u64 p = 2; p <= n / p; p += (p == 2 ? 1 : 2)) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.factors.push_back({to_int(p), e});
  }
  if (n > 1) out.factors.push_back({to_int(n), 1});
  return out;
}

PartialFactorization factor(const Int& n_in, const FactorBudget& budget) {
  if (n_in < 1) fail_argument("factor: n must be positive");
  std::map<Int, unsigned> acc;
  Int n = n_in;
  const auto ps = sieve_cache().ensure(std::max<u64>(budget.trial_bound, 2));
  for (u64 p : *ps) {
    if (p > budget.trial_bound) break;
    if (n == 1) break;
    if (fits_u64(n) && p > to_u64(n) / p) break;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      unsigned e = 0;
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
        mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
        ++e;
      }
      acc[to_int(p)] += e;
    }
  }
  std::vector<Int> stuck;
  if (n > 1) {
    // Everything left has no factor <= trial bound (or n itself is prime).
    split(n, budget, acc, stuck, 1);
  }
  PartialFactorization out;
  for (const auto& [p, e] : acc) out.factors.push_back({p, e});
  out.cofactor = 1;
  for (const auto& s : stuck) out.cofactor *= s;
  out.complete = (out.cofactor == 1);
  return out;
}

long ord_at(const Int& p, const Int& n) {
  if (n == 0) fail_argument("ord_at: zero has no valuation");
  Int m = abs(n);
  return static_cast<long>(strip_prime(m, p));
}

long ord_at(const Int& p, const Rat& q) {
  if (q == 0) fail_argument("ord_at: zero has no valuation");
  return ord_at(p, q.get_num()) - ord_at(p, q.get_den());
}

unsigned strip_prime(Int& n, const Int& p) {
  if (p < 2) fail_argument("strip_prime: p must be >= 2");
  if (n == 0) return 0;
  return static_cast<unsigned>(mpz_remove(n.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

DistinctPrimeBound distinct_prime_bound(const Int& c, std::size_t max_bits) {
  if (c < 1) fail_argument("distinct_prime_bound: c must be positive");
  if (c == 1) return {0, true};
  if (mpz_sizeinbase(c.get_mpz_t(), 2) > max_bits) return {1, false};
  if (is_prime(c)) return {1, true};
  if (auto pp = perfect_power_root(c)) return distinct_prime_bound(pp->first, max_bits);
  // Composite and not a perfect power: cannot be a prime power.
  return {2, false};
}

Int rat_mod(const Rat& q, const Int& m) {
  Int inv;
  Int den = q.get_den();
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t()) == 0) {
    fail_argument("rat_mod: denominator not invertible modulo " + m.get_str());
  }
  Int r = (q.get_num() * inv) % m;
  if (r < 0) r += m;
  return r;
}

std::string to_string(const Int& v) { return v.get_str(); }

std::string to_string(const Rat& v) {
  if (v.get_den() == 1) return v.get_num().get_str();
  return v.get_num().get_str() + "/" + v.get_den().get_str();
}

}  // namespace edsq
