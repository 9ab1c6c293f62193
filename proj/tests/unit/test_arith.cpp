#include <gtest/gtest.h>

#include <random>

#include "edsq/arith.hpp"
#include "edsq/error.hpp"
#include "oracle.hpp"

using namespace edsq;
using u64 = std::uint64_t;

TEST(IsPrime, SmallExamples) {
  EXPECT_FALSE(is_prime(Int(1)));
  // oracle: trial division
  ASSERT_TRUE(oracle::trial_prime(2521));
  ASSERT_FALSE(oracle::trial_prime(841));
  EXPECT_TRUE(is_prime(Int(2521)));
  EXPECT_FALSE(is_prime(Int(841)));
}

TEST(IsPrime, AgreesWithSieveBelowOneMillion) {
  const auto sieve = oracle::sieve(1'000'000);
  for (u64 n = 0; n <= 1'000'000; ++n) {
    ASSERT_EQ(is_prime_u64(n), sieve[n]) << n;
  }
}

TEST(IsPrime, LargeKnownValues) {
  EXPECT_TRUE(is_prime_u64(18446744073709551557ull));  // largest prime below 2^64
  EXPECT_FALSE(is_prime_u64(3215031751ull));           // strong pseudoprime to bases 2, 3, 5, 7
  Int mersenne;
  mpz_ui_pow_ui(mersenne.get_mpz_t(), 2, 127);
  EXPECT_TRUE(is_prime(mersenne - 1));
  EXPECT_FALSE(is_prime(mersenne + 1));
}

TEST(PrimesUpTo, CountsMatchSieve) {
  EXPECT_EQ(primes_up_to(1).size(), 0u);
  EXPECT_EQ(primes_up_to(2), (std::vector<u64>{2}));
  const auto sieve = oracle::sieve(100'000);
  u64 count = 0;
  for (bool b : sieve) count += b;
  EXPECT_EQ(primes_up_to(100'000).size(), count);
  EXPECT_EQ(prime_pi(100'000), count);
  EXPECT_EQ(prime_pi(1'000'000), 78498u);
  EXPECT_EQ(next_prime_after(2520), 2521u);
}

TEST(Factor, Examples) {
  auto f1 = factor(Int(1));
  EXPECT_TRUE(f1.factors.empty());
  EXPECT_EQ(f1.cofactor, 1);
  EXPECT_TRUE(f1.complete);

  auto f100 = factor(Int(100));
  ASSERT_EQ(f100.factors.size(), 2u);
  EXPECT_EQ(f100.factors[0].prime, 2);
  EXPECT_EQ(f100.factors[0].exponent, 2u);
  EXPECT_EQ(f100.factors[1].prime, 5);
  EXPECT_EQ(f100.factors[1].exponent, 2u);

  // oracle: 7^6 by repeated multiplication
  u64 v = 1;
  for (int i = 0; i < 6; ++i) v *= 7;
  ASSERT_EQ(v, 117649u);
  auto f7 = factor(Int(117649));
  ASSERT_EQ(f7.factors.size(), 1u);
  EXPECT_EQ(f7.factors[0].prime, 7);
  EXPECT_EQ(f7.factors[0].exponent, 6u);
  EXPECT_TRUE(f7.complete);

  EXPECT_THROW(factor(Int(0)), Error);
}

TEST(Factor, CompleteAndReassemblesBelowOneMillion) {
  for (u64 n = 1; n <= 1'000'000; ++n) {
    const auto f = factor(to_int(n));
    ASSERT_TRUE(f.complete) << n;
    ASSERT_EQ(f.product(), to_int(n)) << n;
  }
}

TEST(Factor, RhoSplitsSemiprimesBeyondTrialBound) {
  const Int p("1000000007"), q("998244353");
  FactorBudget b;
  b.trial_bound = 1000;
  const auto f = factor(p * q, b);
  ASSERT_TRUE(f.complete);
  ASSERT_EQ(f.factors.size(), 2u);
  EXPECT_EQ(f.factors[0].prime, q);
  EXPECT_EQ(f.factors[1].prime, p);
}

TEST(Factor, IncompleteCofactorExceedsTrialBound) {
  // product of two 80-bit primes, rho gets almost no rounds
  Int p, q;
  mpz_nextprime(p.get_mpz_t(), Int("1208925819614629174706176").get_mpz_t());
  mpz_nextprime(q.get_mpz_t(), Int("1208925819614629174706500").get_mpz_t());
  FactorBudget b;
  b.trial_bound = 1000;
  b.rho_rounds = 3;
  const auto f = factor(6 * p * q, b);
  EXPECT_EQ(f.product(), 6 * p * q);
  for (const auto& pp : f.factors) EXPECT_TRUE(is_prime(pp.prime));
  EXPECT_EQ(f.complete, f.cofactor == 1);
  if (!f.complete) {
    auto rest = factor(f.cofactor);  // full budget now
    for (const auto& pp : rest.factors) EXPECT_GT(pp.prime, 1000);
  }
}

TEST(OrdAt, Examples) {
  EXPECT_EQ(ord_at(Int(3), Rat(-20, 9)), -2);
  EXPECT_EQ(ord_at(Int(5), Rat(100)), 2);
  // oracle: 343 = 7^3 and 2108 = 4 * 17 * 31
  ASSERT_EQ(2108 % 7, 1);
  EXPECT_EQ(ord_at(Int(7), Rat(-2108, 343)), -3);
  EXPECT_THROW(ord_at(Int(3), Rat(0)), Error);
}

TEST(OrdAt, IsAdditiveOnProducts) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 500; ++k) {
    const long an = static_cast<long>(rng() % 20000) - 10000, bn = static_cast<long>(rng() % 20000) - 10000;
    const long ad = static_cast<long>(rng() % 9999) + 1, bd = static_cast<long>(rng() % 9999) + 1;
    if (an == 0 || bn == 0) continue;
    Rat a(an, ad), b(bn, bd);
    a.canonicalize();
    b.canonicalize();
    for (long p : {2, 3, 5, 7, 11}) {
      const Rat prod = a * b;
      ASSERT_EQ(ord_at(Int(p), prod), ord_at(Int(p), a) + ord_at(Int(p), b));
    }
  }
}

TEST(DistinctPrimeBound, Classification) {
  EXPECT_EQ(distinct_prime_bound(Int(1)).at_least, 0u);
  auto prime = distinct_prime_bound(Int(1000003));
  EXPECT_EQ(prime.at_least, 1u);
  EXPECT_TRUE(prime.exact);
  auto power = distinct_prime_bound(Int(1000003) * 1000003 * 1000003);
  EXPECT_EQ(power.at_least, 1u);
  EXPECT_TRUE(power.exact);
  auto semi = distinct_prime_bound(Int(1000003) * 1000033);
  EXPECT_EQ(semi.at_least, 2u);
  EXPECT_FALSE(semi.exact);
  auto wide = distinct_prime_bound(Int(1000003) * 1000033, 8);
  EXPECT_EQ(wide.at_least, 1u);
  EXPECT_FALSE(wide.exact);
}

TEST(RatMod, ReducesWithInverse) {
  EXPECT_EQ(rat_mod(Rat(1, 2), Int(7)), 4);
  EXPECT_EQ(rat_mod(Rat(-20, 9), Int(7)), ((-20 * 4) % 7 + 7) % 7);  // 9^{-1} = 4 mod 7
  EXPECT_THROW(rat_mod(Rat(1, 7), Int(7)), Error);
}

TEST(U64, RoundTrip) {
  EXPECT_EQ(to_u64(to_int(18446744073709551615ull)), 18446744073709551615ull);
  EXPECT_FALSE(fits_u64(Int(-1)));
  EXPECT_THROW(to_u64(Int("18446744073709551616")), Error);
}
