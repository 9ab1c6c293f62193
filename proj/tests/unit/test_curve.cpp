#include <gtest/gtest.h>

#include "edsq/curve.hpp"
#include "edsq/eds.hpp"
#include "edsq/error.hpp"
#include "oracle.hpp"

using namespace edsq;
using u64 = std::uint64_t;

namespace {

const Curve kE(-16, 16);
const Point kQ(0, 4);

oracle::Pt to_oracle(const Point& A) {
  if (A.is_infinity()) return std::nullopt;
  return std::make_pair(A.x(), A.y());
}

}  // namespace

TEST(Curve, SingularModelRejected) {
  EXPECT_THROW(Curve(0, 0), Error);
  EXPECT_THROW(Curve(-3, 2), Error);  // (x-1)^2 (x+2)
}

TEST(Curve, Discriminant) {
  // -16 (4 (-16)^3 + 27 * 16^2) = 2^12 * 37
  EXPECT_EQ(kE.discriminant(), Int(4096 * 37));
  EXPECT_FALSE(kE.good_reduction(2));
  EXPECT_FALSE(kE.good_reduction(37));
  EXPECT_TRUE(kE.good_reduction(3));
}

TEST(GroupLaw, KnownMultiples) {
  ASSERT_TRUE(on_curve(kE, kQ));
  const Point Q2 = add(kE, kQ, kQ);
  EXPECT_EQ(Q2, Point(4, 4));
  EXPECT_EQ(add(kE, Q2, kQ), Point(-4, -4));
  EXPECT_EQ(scalar_mul(kE, 7, kQ), Point(Rat(-20, 9), Rat(172, 27)));
  EXPECT_EQ(scalar_mul(kE, 9, kQ), Point(Rat(-80, 49), Rat(-2108, 343)));
  EXPECT_EQ(scalar_mul(kE, -1, kQ), Point(0, -4));
  EXPECT_TRUE(scalar_mul(kE, 0, kQ).is_infinity());
  EXPECT_TRUE(add(kE, kQ, negate(kQ)).is_infinity());
}

TEST(GroupLaw, MatchesRepeatedAdditionOracle) {
  const oracle::Curve oc{-16, 16};
  const auto Q = to_oracle(kQ);
  for (long n = 1; n <= 30; ++n) {
    const auto expect = oc.times(static_cast<u64>(n), Q);
    ASSERT_TRUE(oc.on(expect));
    ASSERT_EQ(to_oracle(scalar_mul(kE, n, kQ)), expect) << n;
  }
}

TEST(GroupLaw, Identities) {
  for (long m = -6; m <= 6; ++m) {
    for (long n = -6; n <= 6; ++n) {
      const Point A = scalar_mul(kE, m, kQ), B = scalar_mul(kE, n, kQ);
      ASSERT_EQ(add(kE, A, B), add(kE, B, A));
      ASSERT_EQ(add(kE, A, B), scalar_mul(kE, m + n, kQ));
      ASSERT_EQ(scalar_mul(kE, m, B), scalar_mul(kE, m * n, kQ));
      const Point C = scalar_mul(kE, 3, kQ);
      ASSERT_EQ(add(kE, add(kE, A, B), C), add(kE, A, add(kE, B, C)));
    }
  }
}

TEST(ReduceStats, SmallPrimes) {
  EXPECT_FALSE(reduce_stats(kE, 2).good_reduction);
  EXPECT_EQ(reduce_stats(kE, 2).order, 0u);
  ASSERT_EQ(oracle::count_points(-16, 16, 5), 8u);
  ASSERT_EQ(oracle::count_points(-16, 16, 3), 7u);
  const auto s5 = reduce_stats(kE, 5);
  EXPECT_TRUE(s5.good_reduction);
  EXPECT_EQ(s5.order, 8u);
  EXPECT_EQ(s5.omega, 1u);
  EXPECT_EQ(reduce_stats(kE, 3).order, 7u);
}

TEST(ReduceStats, HasseAndBruteForceBelowTwoThousand) {
  for (u64 p : primes_up_to(2000)) {
    const auto s = reduce_stats(kE, p);
    if (p == 2 || p == 37) {
      ASSERT_FALSE(s.good_reduction);
      continue;
    }
    ASSERT_EQ(s.order, oracle::count_points(-16, 16, p)) << p;
  }
}

TEST(PointOrder, SmallPrimes) {
  EXPECT_EQ(point_order_mod_p(kE, kQ, 3), 7u);
  EXPECT_EQ(point_order_mod_p(kE, kQ, 5), 8u);
  EXPECT_EQ(point_order_mod_p(kE, kQ, 7), 9u);
  for (u64 p : {3, 5, 7, 11, 13}) {
    EXPECT_EQ(point_order_mod_p(kE, kQ, p), oracle::order_mod_p(-16, 0, 4, p)) << p;
  }
}

TEST(PointOrder, DividesGroupOrderUpToTenThousand) {
  for (u64 p : primes_up_to(10'000)) {
    if (p == 2 || p == 37) continue;
    const auto s = reduce_stats(kE, p);
    // Hasse: |#E - p - 1| <= 2 sqrt p
    const long diff = static_cast<long>(s.order) - static_cast<long>(p) - 1;
    ASSERT_LE(diff * diff, 4 * static_cast<long>(p)) << p;
    const u64 r = point_order_mod_p(kE, kQ, p);
    ASSERT_EQ(s.order % r, 0u) << p;
    ASSERT_EQ(psi_triple_mod(kE, kQ, r, Int(p)).cur, 0) << p;
    if (p < 1500) { ASSERT_EQ(r, oracle::order_mod_p(-16, 0, 4, p)) << p; }
  }
}

TEST(PointOrder, LargePrimeUsesBsgs) {
  // p above the point-counting range; the order kills Q mod p and is within Hasse.
  const u64 p = 1'000'003;
  const u64 r = point_order_mod_p(kE, kQ, p);
  EXPECT_GT(r, 1u);
  EXPECT_LE(r, p + 1 + 2 * 1001);
  EXPECT_EQ(psi_triple_mod(kE, kQ, r, Int(p)).cur, 0);
  for (u64 d : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
    if (r % d == 0) { EXPECT_NE(psi_triple_mod(kE, kQ, r / d, Int(p)).cur, 0) << d; }
  }
}

TEST(Torsion, Examples) {
  EXPECT_EQ(torsion_order(kE), 1u);
  EXPECT_EQ(torsion_order(Curve(0, 1)), 6u);
  EXPECT_EQ(torsion_order(Curve(1, 0)), 2u);
  EXPECT_FALSE(is_torsion(kE, kQ));
  const Curve E6(0, 1);
  EXPECT_TRUE(is_torsion(E6, Point(2, 3)));
  EXPECT_TRUE(scalar_mul(E6, 6, Point(2, 3)).is_infinity());
}

TEST(IntegralModel, ScalesSevenQ) {
  const Point P7 = scalar_mul(kE, 7, kQ);
  const auto m = integral_model(kE, P7);
  EXPECT_EQ(m.u, 3);
  EXPECT_EQ(m.curve.a4, Int(-16 * 81));
  EXPECT_EQ(m.curve.a6, Int(16 * 729));
  EXPECT_EQ(m.point, Point(-20, 172));
  EXPECT_TRUE(on_curve(m.curve, m.point));
  EXPECT_TRUE(m.point.is_integral());

  const auto id = integral_model(kE, kQ);
  EXPECT_EQ(id.u, 1);
  EXPECT_EQ(id.curve, kE);
}
