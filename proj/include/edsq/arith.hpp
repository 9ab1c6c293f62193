#pragma once

// Exact integer / rational helpers, primality, and budgeted factoring.

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace edsq {

using Int = mpz_class;
using Rat = mpq_class;

Int to_int(std::uint64_t v);
std::uint64_t to_u64(const Int& v);  // throws if v does not fit
bool fits_u64(const Int& v);

/// Sorted list of all primes <= bound (sieve of Eratosthenes).
std::vector<std::uint64_t> primes_up_to(std::uint64_t bound);

/// Number of primes <= x, backed by a cached sieve (x <= 2^32).
std::uint64_t prime_pi(std::uint64_t x);

/// Deterministic below 2^64; 64 Miller-Rabin rounds beyond.
bool is_prime(const Int& n);
bool is_prime_u64(std::uint64_t n);

/// Smallest prime strictly greater than n.
std::uint64_t next_prime_after(std::uint64_t n);

struct FactorBudget {
  std::uint64_t trial_bound = 1'000'000;
  std::uint64_t rho_rounds = 200'000;  // per cofactor
  std::size_t max_bits = 4096;         // cofactors beyond this skip rho
  std::size_t classify_bits = 16384;   // prime / prime-power tests give up beyond this
};

struct PrimePower {
  Int prime;
  unsigned exponent = 0;
};

/// factors sorted ascending by prime; product(factors) * cofactor == input.
struct PartialFactorization {
  std::vector<PrimePower> factors;
  Int cofactor = 1;
  bool complete = true;

  Int product() const;
  std::vector<Int> primes() const;
};

PartialFactorization factor(const Int& n, const FactorBudget& budget = {});
PartialFactorization factor_u64(std::uint64_t n);

/// Exponent of p in q; q must be nonzero.
long ord_at(const Int& p, const Rat& q);
long ord_at(const Int& p, const Int& n);

/// Removes every factor p from n in place and returns how many were removed.
unsigned strip_prime(Int& n, const Int& p);

/// How many distinct prime factors a number with no small factors has,
/// as far as primality / perfect-power tests can tell.
struct DistinctPrimeBound {
  unsigned at_least = 0;
  bool exact = false;
};

/// Classifies c > 0: 1 -> 0 primes; prime power -> 1; composite and not a
/// perfect power of a prime -> at least 2. Numbers wider than max_bits that
/// are > 1 only get the bound "at least 1".
DistinctPrimeBound distinct_prime_bound(const Int& c, std::size_t max_bits = 65536);

/// Reduces a rational modulo m (denominator must be a unit mod m).
Int rat_mod(const Rat& q, const Int& m);

std::string to_string(const Int& v);
std::string to_string(const Rat& v);

}  // namespace edsq
