#include <gtest/gtest.h>

#include "edsq/error.hpp"
#include "edsq/model.hpp"
#include "oracle.hpp"

using namespace edsq;

namespace {

const Curve kE(-16, 16);
const Point kQ(0, 4);

// nA by double-and-add on the naive group law
oracle::Pt mul(const oracle::Curve& c, u64 n, oracle::Pt A) {
  oracle::Pt R;
  while (n) {
    if (n & 1) R = c.add(R, A);
    A = c.add(A, A);
    n >>= 1;
  }
  return R;
}

long ord(long p, const mpq_class& q) {
  long v = 0;
  mpz_class num = q.get_num(), den = q.get_den();
  while (num % p == 0) num /= p, ++v;
  while (den % p == 0) den /= p, --v;
  return v;
}

struct ModelBuild {
  BuildContext ctx;
  SeqState state;

  ModelBuild() : ctx(kE, kQ, options()), state(build_sequences(ctx, RelaxPolicy::desk())) {}

  static BuildOptions options() {
    BuildOptions o;
    o.variant = Variant::Model;
    o.count = 4;
    return o;
  }
};

const ModelBuild& model_build() {
  static const ModelBuild b;
  return b;
}

const ModelInstance& raw35() {
  static const ModelInstance inst(kE, kQ, 3, 5, true);
  return inst;
}

}  // namespace

TEST(Instance, RawConstantsMatchGroupLawOracle) {
  const auto& inst = raw35();
  EXPECT_EQ(inst.M, 840);
  const oracle::Curve oc{-16, 16};
  const auto X = mul(oc, 841, std::make_pair(mpq_class(0), mpq_class(4)));
  ASSERT_TRUE(X.has_value());
  const mpq_class diff = X->first - 0;
  EXPECT_EQ(inst.c, ord(3, diff));
  EXPECT_EQ(inst.c_q, ord(5, diff));
  EXPECT_EQ(inst.c, 2);
  EXPECT_EQ(inst.c_q, 2);
}

TEST(Instance, Validation) {
  EXPECT_THROW(ModelInstance(kE, kQ, 3, 3, true), Error);
  EXPECT_THROW(ModelInstance(kE, kQ, 37, 5, true), Error);
  BuildParams discrete;
  EXPECT_THROW(ModelInstance::from_build(discrete), Error);
}

TEST(Instance, PadicAgreesWithExact) {
  const auto& inst = raw35();
  for (u64 n : {2ull, 9ull, 841ull, 1681ull}) {
    for (u64 v : {3ull, 5ull}) ASSERT_EQ(inst.ord_diff(v, n), inst.ord_diff_exact(v, n)) << v << " " << n;
  }
  const ModelInstance small(kE, kQ, 3, 5, true, 1000);
  EXPECT_THROW(small.ord_diff_exact(3, 1681), Error);
}

TEST(XDifference, RawSmallMultiples) {
  const auto rep = verify_xdifference(raw35(), {1, 2, 3});
  EXPECT_TRUE(rep.all_pass());
  std::size_t exact = 0;
  for (const auto& r : rep.records()) exact += r.inputs.value("route", "") == "exact";
  EXPECT_GE(exact, 6u);  // m = 1, 2, 3 at v = p and v = q
}

TEST(XDifference, PadicRouteUpToNine) {
  const ModelInstance fast(kE, kQ, 3, 5, true, 0);
  const auto rep = verify_xdifference(fast, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  EXPECT_TRUE(rep.all_pass());
  EXPECT_EQ(rep.records().size(), 18u);
  // ord_3(x_{mM+1} - x_1) - c = ord_3(m)
  for (u64 m = 1; m <= 9; ++m) {
    EXPECT_EQ(fast.ord_diff(3, m * 840 + 1) - fast.c, ord(3, mpq_class(static_cast<long>(m)))) << m;
    EXPECT_EQ(fast.ord_diff(5, m * 840 + 1) - fast.c_q, ord(5, mpq_class(static_cast<long>(m)))) << m;
  }
}

TEST(XDifference, SwappedPrimes) {
  const ModelInstance swapped(kE, kQ, 5, 3, true, 0);
  EXPECT_EQ(swapped.M, 840);
  EXPECT_TRUE(verify_xdifference(swapped, {1, 2, 3, 5, 25}).all_pass());
}

TEST(XDifference, NonRawMultiple) {
  const auto inst = ModelInstance::from_build(model_build().ctx.params(), 0);
  EXPECT_FALSE(inst.raw);
  EXPECT_EQ(inst.P, Point(24, 116));
  EXPECT_EQ(inst.c, 3);
  EXPECT_EQ(inst.c_q, 2);
  EXPECT_TRUE(verify_xdifference(inst, {1, 2, 3, 9}).all_pass());
}

TEST(BOracle, AgreesWithEnumeration) {
  const auto rep = verify_B_oracle(10'000);
  EXPECT_TRUE(rep.all_pass());
  for (u64 i : {3, 8, 17}) EXPECT_TRUE(in_B(i)) << i;
  for (u64 i : {1, 2, 4}) EXPECT_FALSE(in_B(i)) << i;
}

TEST(ModelBuild, DeskBranches) {
  const auto& st = model_build().state;
  EXPECT_EQ(st.branch(1), (std::vector<u64>{2521, 30241, 453601, 1564921}));
  EXPECT_EQ(st.branch(2), (std::vector<u64>{20161, 128521, 1247401, 1769041}));
  for (const auto& e : st.entries) {
    // (l - 1)/M carries 3^i exactly, and 5 divides it iff i is in B
    ASSERT_EQ((e.ell - 1) % 840, 0u);
    u64 k = (e.ell - 1) / 840, e3 = 0;
    while (k % 3 == 0) k /= 3, ++e3;
    EXPECT_EQ(e3, e.i) << e.ell;
    EXPECT_EQ(((e.ell - 1) / 840) % 5 == 0, in_B(e.i)) << e.ell;
  }
}

TEST(ModelBuild, PredicateAndAddition) {
  const auto& b = model_build();
  const auto inst = ModelInstance::from_build(b.ctx.params(), 0);
  for (unsigned r = 1; r <= 2; ++r) {
    const auto branch = b.state.branch(r);
    EXPECT_TRUE(verify_B_predicate(inst, branch).all_pass()) << r;
    const auto rep = verify_addition_encoding(inst, branch, {{1, 1, 2}, {1, 2, 3}, {1, 3, 4}, {2, 2, 4}, {1, 2, 4}});
    EXPECT_TRUE(rep.all_pass()) << r;
    for (std::size_t i = 0; i < branch.size(); ++i) {
      EXPECT_EQ(inst.ord_diff(3, branch[i]), inst.c + static_cast<long>(i + 1));
    }
  }
}

TEST(ModelBuild, AdditionCatchesWrongOrder) {
  const auto& b = model_build();
  const auto inst = ModelInstance::from_build(b.ctx.params(), 0);
  auto branch = b.state.branch(1);
  std::swap(branch[0], branch[1]);
  EXPECT_FALSE(verify_addition_encoding(inst, branch, {{1, 1, 2}}).all_pass());
}

TEST(Convergence, DiscreteBranch) {
  // x_1 = 24 for P = 6Q; branch [7, 13] from the strict discrete build
  const auto rep = verify_convergence(kE, Point(24, 116), {7, 13}, {3, 5});
  EXPECT_TRUE(rep.all_pass());
  bool saw_limit = false;
  for (const auto& r : rep.records()) {
    if (r.claim == "discreteness.limit-outside") {
      saw_limit = true;
      EXPECT_TRUE(r.hard);
    }
  }
  EXPECT_TRUE(saw_limit);
  EXPECT_TRUE(verify_convergence(kE, Point(24, 116), {7}, {3}).all_pass());
}
