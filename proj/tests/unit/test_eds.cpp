#include <gtest/gtest.h>

#include "edsq/eds.hpp"
#include "edsq/error.hpp"
#include "oracle.hpp"

using namespace edsq;
using u64 = std::uint64_t;

namespace {
const Curve kE(-16, 16);
const Point kQ(0, 4);
}  // namespace

TEST(Psi, InitialValues) {
  // psi_1 = 1, psi_2 = 2y, psi_3 = 3x^4 + 6 a x^2 + 12 b x - a^2 at x = 0
  const auto t2 = psi_triple(kE, kQ, 2);
  EXPECT_EQ(t2.prev, 1);
  EXPECT_EQ(t2.cur, 8);
  EXPECT_EQ(t2.next, -256);
}

TEST(Psi, LadderMatchesGroupLaw) {
  const oracle::Curve oc{-16, 16};
  oracle::Pt R;
  const oracle::Pt Q = std::make_pair(mpq_class(0), mpq_class(4));
  for (u64 n = 1; n <= 60; ++n) {
    R = oc.add(R, Q);
    ASSERT_TRUE(R.has_value());
    ASSERT_EQ(x_multiple(kE, kQ, n), R->first) << n;
  }
}

TEST(Psi, DenominatorIsPsiSquaredUpToContent) {
  // Q has good behaviour: d_n = psi_n^2 exactly for this point
  for (u64 n = 1; n <= 40; ++n) {
    const auto t = psi_triple(kE, kQ, n);
    const Rat x = x_multiple(kE, kQ, n);
    ASSERT_EQ(Int(t.cur * t.cur) % x.get_den(), 0) << n;
  }
}

TEST(Psi, ModularLadderMatchesExact) {
  for (const Int& m : {Int(3), Int(1009), Int(243), Int("1000000000039")}) {
    for (u64 n = 1; n <= 50; ++n) {
      const auto e = psi_triple(kE, kQ, n);
      const auto r = psi_triple_mod(kE, kQ, n, m);
      auto red = [&](const Int& v) {
        Int w = v % m;
        if (w < 0) w += m;
        return w;
      };
      ASSERT_EQ(r.prev, red(e.prev)) << n << " mod " << m;
      ASSERT_EQ(r.cur, red(e.cur)) << n << " mod " << m;
      ASSERT_EQ(r.next, red(e.next)) << n << " mod " << m;
    }
  }
}

TEST(Psi, Preconditions) {
  EXPECT_THROW(psi_triple(kE, Point(Rat(1, 4), 1), 3), Error);
  EXPECT_THROW(psi_triple(kE, kQ, 0), Error);
  EXPECT_THROW(psi_triple_mod(kE, kQ, 5, Int(2)), Error);
}

TEST(Padic, XDiffOrderMatchesExact) {
  const Rat x1 = kQ.x();
  for (u64 p : {3, 5, 7, 11, 13, 17, 19}) {
    for (u64 n = 2; n <= 80; ++n) {
      const Rat diff = x_multiple(kE, kQ, n) - x1;
      if (diff == 0) continue;
      ASSERT_EQ(padic_xdiff_order(kE, kQ, n, Int(p)), ord_at(Int(p), diff)) << "p=" << p << " n=" << n;
    }
  }
}

TEST(Padic, DenominatorOrderMatchesExact) {
  for (u64 p : {3, 5, 7, 11, 13, 37}) {
    for (u64 n = 1; n <= 80; ++n) {
      const Int d = x_multiple(kE, kQ, n).get_den();
      ASSERT_EQ(padic_denominator_order(kE, kQ, n, Int(p)), ord_at(Int(p), d)) << "p=" << p << " n=" << n;
    }
  }
}

TEST(Padic, RejectsPrimesDividingTwoY) {
  EXPECT_THROW(padic_xdiff_order(kE, kQ, 5, Int(2)), Error);
}
