#include <gtest/gtest.h>

#include <set>

#include "edsq/error.hpp"
#include "edsq/seq_builder.hpp"
#include "oracle.hpp"

using namespace edsq;

namespace {

const Curve kE(-16, 16);
const Point kQ(0, 4);

struct Discrete {
  BuildContext ctx;
  SeqState state;
  std::vector<TSets> tsets;

  Discrete() : ctx(kE, kQ, options()), state(build_sequences(ctx, RelaxPolicy::strict())) {
    tsets = build_tsets(ctx, state, 50);
  }

  static BuildOptions options() {
    BuildOptions o;
    o.count = 2;
    return o;
  }
};

const Discrete& discrete() {
  static const Discrete d;
  return d;
}

}  // namespace

TEST(Params, MultiplierAndOnset) {
  const auto& bp = discrete().ctx.params();
  EXPECT_EQ(bp.torsion, 1u);
  EXPECT_EQ(bp.z, 6u);  // 2^(t-1) 3^(t-1) with t = 2
  EXPECT_EQ(bp.P, Point(24, 116));
  EXPECT_EQ(bp.u, 1);
  EXPECT_GE(bp.n0, 1u);
}

TEST(Params, ModelModulus) {
  // M = p q #E(F_p) #E(F_q) = 3 * 5 * 7 * 8
  EXPECT_EQ(model_modulus(kE, kQ, 3, 5), Int(840));
  EXPECT_THROW(model_modulus(kE, kQ, 3, 3), Error);
  EXPECT_THROW(model_modulus(kE, kQ, 2, 5), Error);   // even
  EXPECT_THROW(model_modulus(kE, kQ, 37, 5), Error);  // bad reduction
  EXPECT_THROW(model_modulus(kE, Point(24, 116), 3, 29), Error);  // 29 divides y
}

TEST(Params, RejectsTorsionAndSmallT) {
  BuildOptions o;
  o.t = 1;
  EXPECT_THROW(BuildContext(kE, kQ, o), Error);
  EXPECT_THROW(BuildContext(Curve(0, 1), Point(2, 3), BuildOptions{}), Error);
}

TEST(BSet, Membership) {
  // 2^n + n^2 = 3, 8, 17, 32, 57, 100, ...
  std::set<u64> oracle_b;
  for (u64 n = 1; n < 40; ++n) oracle_b.insert((u64{1} << n) + n * n);
  for (u64 i = 1; i <= 100'000; ++i) ASSERT_EQ(in_B(i), oracle_b.count(i) == 1) << i;
  EXPECT_TRUE(in_B(3));
  EXPECT_FALSE(in_B(4));
}

TEST(Relax, Policies) {
  EXPECT_FALSE(RelaxPolicy::strict().skips(1'000'000));
  EXPECT_TRUE(RelaxPolicy::desk().skips(401));
  EXPECT_FALSE(RelaxPolicy::desk().skips(400));
  EXPECT_EQ(RelaxPolicy::parse("desk").name, "desk");
  EXPECT_THROW(RelaxPolicy::parse("lenient"), Error);
  EXPECT_EQ(parse_variant("model"), Variant::Model);
  EXPECT_THROW(parse_variant("other"), Error);
}

TEST(Sequences, StrictDiscreteBranches) {
  const auto& st = discrete().state;
  EXPECT_EQ(st.branch(1), (std::vector<u64>{7, 13}));
  EXPECT_EQ(st.branch(2), (std::vector<u64>{11, 17}));
}

TEST(Sequences, InterleavingAndV) {
  const auto& st = discrete().state;
  ASSERT_EQ(st.entries.size(), 4u);
  const std::vector<std::pair<u64, unsigned>> order{{1, 1}, {1, 2}, {2, 1}, {2, 2}};
  std::vector<u64> seen;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& e = st.entries[k];
    ASSERT_EQ(std::make_pair(e.i, e.r), order[k]);
    EXPECT_EQ(st.V(e.i, e.r), seen);
    if (!seen.empty()) { EXPECT_GT(e.ell, *std::max_element(seen.begin(), seen.end())); }
    seen.push_back(e.ell);
  }
  EXPECT_EQ(st.next_slot(), std::make_pair(u64{3}, 1u));
}

TEST(Sequences, CertificatesCoverEveryCondition) {
  const auto& d = discrete();
  for (const auto& e : d.state.entries) {
    std::set<std::string> names;
    for (const auto& c : e.cert.checks) {
      EXPECT_TRUE(c.pass) << e.ell << " " << c.condition;
      EXPECT_NE(c.evidence, "relaxed");
      names.insert(c.condition);
    }
    for (const char* want : {"order", "onset", "outside-L", "congruence", "archimedean", "mu", "primitive-threshold"}) {
      EXPECT_TRUE(names.count(want)) << e.ell << " missing " << want;
    }
    EXPECT_EQ(e.cert.policy, "strict");
    EXPECT_EQ(e.cert.n0, d.ctx.params().n0);
    EXPECT_FALSE(d.ctx.in_L(e.ell));
    EXPECT_TRUE(is_prime_u64(e.ell));
  }
}

TEST(Sequences, ChosenPrimesSatisfyConditionsIndependently) {
  const auto& d = discrete();
  const oracle::Curve oc{-16, 16};
  const oracle::Pt Q = std::make_pair(mpq_class(0), mpq_class(4));
  for (const auto& e : d.state.entries) {
    u64 fact = 1;
    for (u64 k = 2; k <= e.i; ++k) fact *= k;
    EXPECT_EQ((e.ell - 1) % fact, 0u);
    // |x((l-1) P)| > i with P = 6Q, by repeated addition
    const auto R = oc.times(6 * (e.ell - 1), Q);
    ASSERT_TRUE(R.has_value());
    EXPECT_GT(abs(R->first), mpq_class(static_cast<long>(e.i))) << e.ell;
  }
}

TEST(TSets, DisjointAndVerified) {
  const auto& d = discrete();
  ASSERT_EQ(d.tsets.size(), 2u);
  for (const auto& ts : d.tsets) {
    EXPECT_TRUE(set_intersection(ts.T1, ts.T2()).empty()) << ts.r;
    EXPECT_EQ(ts.rounds, 2u);
    EXPECT_EQ(ts.ell_bound, 50u);
  }
  const auto rep = verify_disjointness(d.tsets);
  EXPECT_TRUE(rep.all_pass());
  EXPECT_FALSE(rep.records().empty());
}

TEST(TSets, T1MatchesPointOrderOracle) {
  // p | d_n(6Q) iff the order of Q mod p divides 6n
  const auto& d = discrete();
  const auto& bp = d.ctx.params();
  for (unsigned r = 1; r <= 2; ++r) {
    const auto& ts = d.tsets[r - 1];
    const auto branch = d.state.branch(r);
    for (u64 p : primes_up_to(std::min<u64>(ts.prime_bound, 3000))) {
      if (!bp.curve.good_reduction(p)) continue;
      const u64 ord = oracle::order_mod_p(-16, 0, 4, p);
      bool in = false;
      for (u64 ell : branch) in = in || (6 * ell) % ord == 0;
      const bool listed = std::binary_search(ts.T1.begin(), ts.T1.end(), p);
      ASSERT_EQ(listed, in) << "r=" << r << " p=" << p;
    }
  }
}

TEST(TSets, TruncatedAtRoundOneIsSupportOfFirstPrime) {
  const auto& d = discrete();
  SeqState first;
  first.t = 2;
  first.entries = {d.state.entries[0], d.state.entries[1]};
  const auto ts = build_tsets(d.ctx, first, 50);
  const auto& seq = d.ctx.sequence();
  for (unsigned r = 1; r <= 2; ++r) {
    const u64 ell = first.branch(r)[0];
    PrimeSet support;
    for (const Int& p : factor(seq.d(ell)).primes()) {
      if (p <= ts[r - 1].prime_bound) support.push_back(to_u64(p));
    }
    EXPECT_EQ(ts[r - 1].T1, support) << r;
  }
}

TEST(Section, ExcludesMultiplesOfSevenWithoutThree) {
  const auto& d = discrete();
  const u64 X = d.ctx.table().scan_bound;
  PrimePredicate not3;
  for (u64 p : primes_up_to(X)) {
    if (p != 3) not3.small.push_back(p);
  }
  not3.bound = X;
  not3.above = PrimePredicate::Above::Include;
  const auto section = ring_section(d.ctx, not3, 60);
  for (u64 n = 1; n <= 60; ++n) {
    const bool listed = std::find(section.begin(), section.end(), n) != section.end();
    EXPECT_EQ(listed, n % 7 != 0) << n;
  }
  PrimePredicate everything;
  everything.small = primes_up_to(X);
  everything.bound = X;
  everything.above = PrimePredicate::Above::Include;
  EXPECT_EQ(ring_section(d.ctx, everything, 30).size(), 30u);
}

TEST(Section, MatchesChosenPrimes) {
  const auto& d = discrete();
  for (unsigned r = 1; r <= 2; ++r) {
    const auto rep = verify_section(d.ctx, d.state, r, 60);
    EXPECT_TRUE(rep.all_pass()) << r;
  }
}

TEST(Certificate, JsonShape) {
  const auto j = to_json(discrete().state.entries[0].cert);
  EXPECT_EQ(j["ell"], 7);
  EXPECT_EQ(j["policy"], "strict");
  EXPECT_TRUE(j["checks"].is_array());
}
