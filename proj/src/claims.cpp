#include "edsq/claims.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "edsq/eds.hpp"
#include "edsq/error.hpp"

namespace edsq {

namespace {

std::string point_str(const Point& A) {
  if (A.is_infinity()) return "O";
  return to_string(A.x()) + "," + to_string(A.y());
}

Json strings(const std::vector<Int>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(big(x));
  return out;
}

DivisionSequence base_sequence(const RunConfig& cfg) {
  const Point Q = cfg.generator();
  if (!on_curve(cfg.curve(), Q)) fail_argument("generator is not on the curve");
  return DivisionSequence(cfg.curve(), Q, cfg.budget());
}

BuildContext context(const RunConfig& cfg, Variant variant) {
  BuildOptions o = cfg.build_options();
  o.variant = variant;
  return BuildContext(cfg.curve(), cfg.generator(), o);
}

// Uniform enough for test identities, and the same on every standard library.
long draw(std::mt19937_64& rng, long lo, long hi) {
  return lo + static_cast<long>(rng() % static_cast<u64>(hi - lo + 1));
}

}  // namespace

Report claim_group_law(const RunConfig& cfg, u64 count, u64 seed) {
  const Curve c = cfg.curve();
  const Point Q = cfg.generator();
  if (!on_curve(c, Q)) fail_argument("generator is not on the curve");
  std::mt19937_64 rng(seed);
  auto mult = [&](long a) { return scalar_mul(c, a, Q); };
  auto nonzero = [&](long lo, long hi) {
    long v = 0;
    while (v == 0) v = draw(rng, lo, hi);
    return v;
  };

  Report rep;
  for (u64 k = 0; k < count; ++k) {
    Json in;
    in["seed"] = seed;
    in["item"] = k;
    std::vector<Point> produced;
    Point lhs, rhs;
    switch (k % 4) {
      case 0: {
        const long a = nonzero(-10, 10), b = nonzero(-10, 10), d = nonzero(-10, 10);
        const Point A = mult(a), B = mult(b), C = mult(d);
        lhs = add(c, add(c, A, B), C);
        rhs = add(c, A, add(c, B, C));
        in["identity"] = "associativity";
        in["multiples"] = {a, b, d};
        produced = {A, B, C, lhs, rhs};
        break;
      }
      case 1: {
        const long a = nonzero(-10, 10);
        const Point A = mult(a);
        lhs = add(c, add(c, A, negate(A)), A);
        rhs = A;
        in["identity"] = "inverse";
        in["multiples"] = {a};
        produced = {A, negate(A), lhs};
        break;
      }
      case 2: {
        const long a = nonzero(-10, 10), b = nonzero(-10, 10);
        const Point A = mult(a), B = mult(b);
        lhs = add(c, A, B);
        rhs = add(c, B, A);
        in["identity"] = "commutativity";
        in["multiples"] = {a, b};
        produced = {A, B, lhs, rhs};
        break;
      }
      default: {
        const long a = nonzero(-8, 8), m = nonzero(-5, 5), n = nonzero(-5, 5);
        const Point A = mult(a);
        lhs = scalar_mul(c, m, scalar_mul(c, n, A));
        rhs = scalar_mul(c, m * n, A);
        in["identity"] = "scalar-composition";
        in["multiples"] = {a, m, n};
        produced = {A, lhs, rhs};
        break;
      }
    }
    const bool on = std::all_of(produced.begin(), produced.end(), [&](const Point& P) { return on_curve(c, P); });
    rep.add("group-law", "group-law:abelian-group", in, point_str(lhs), point_str(rhs), on && lhs == rhs);
  }
  return rep;
}

Report claim_known_multiples(const RunConfig& cfg, u64 n_max) {
  const Curve c = cfg.curve();
  const Point Q = cfg.generator();
  Report rep;
  for (u64 n = 2; n <= n_max; ++n) {
    const Point A = scalar_mul(c, static_cast<long>(n), Q);
    Json in;
    in["n"] = n;
    if (A.is_infinity()) fail_argument("generator is torsion");
    const Rat ladder = x_multiple(c, Q, n);
    Json rhs = big(ladder);
    rep.add("known-multiples", "group-law:multiples", in, point_str(A), rhs, on_curve(c, A) && A.x() == ladder);
  }
  return rep;
}

Report claim_divisibility(const RunConfig& cfg, u64 n_max) {
  const DivisionSequence seq = base_sequence(cfg);
  Report rep;
  for (u64 n = 1; n <= n_max; ++n) {
    const Int dn = seq.d(n);
    for (u64 m : divisors_u64(n)) {
      if (m == n) continue;
      Json in;
      in["m"] = m;
      in["n"] = n;
      const Int dm = seq.d(m);
      rep.add("divisibility", "lemma:divisibility-sequence", in, big(dm), big(dn), dn % dm == 0);
    }
  }
  return rep;
}

Report claim_gcd_support(const RunConfig& cfg, u64 n_max) {
  const DivisionSequence seq = base_sequence(cfg);
  std::vector<DivTerm> terms;
  terms.reserve(n_max);
  for (u64 n = 1; n <= n_max; ++n) terms.push_back(div_term(seq, n, Mode::Exact));
  Report rep;
  u64 skipped = 0;
  for (u64 n = 2; n <= n_max; ++n) {
    for (u64 m = 1; m < n; ++m) {
      const u64 g = std::gcd(m, n);
      const DivTerm &tm = terms[m - 1], &tn = terms[n - 1], &tg = terms[g - 1];
      if (!tm.support_complete || !tn.support_complete || !tg.support_complete) {
        ++skipped;
        continue;
      }
      std::vector<Int> both;
      std::set_intersection(tm.support.begin(), tm.support.end(), tn.support.begin(), tn.support.end(),
                            std::back_inserter(both));
      Json in;
      in["m"] = m;
      in["n"] = n;
      in["gcd"] = g;
      rep.add("gcd-support", "lemma:support-gcd", in, strings(both), strings(tg.support), both == tg.support);
    }
  }
  Json in;
  in["max"] = n_max;
  ClaimRecord rec{"gcd-support.skipped", "lemma:support-gcd", in, skipped, 0, skipped == 0};
  rec.hard = false;
  rep.add(rec);
  return rep;
}

Report claim_apparition(const RunConfig& cfg, u64 bound, u64 cross) {
  const DivisionSequence seq = base_sequence(cfg);
  const Curve& c = seq.curve();
  const ApparitionTable table = apparition_scan(seq, bound, 60, default_workers());
  Report rep;

  std::vector<u64> bad_divides;
  for (const auto& [p, r] : table.entries) {
    if (reduce_stats(c, p).order % r != 0) bad_divides.push_back(p);
  }
  Json in;
  in["bound"] = bound;
  in["good_primes"] = table.entries.size();
  rep.add("apparition.divides-group-order", "lemma:rank-divides-order", in, bad_divides, Json::array(),
          bad_divides.empty());

  std::vector<u64> mismatched;
  u64 checked = 0;
  for (const auto& [p, r] : table.entries) {
    if (p > cross) break;
    ++checked;
    u64 first = 0;
    for (u64 n = 1; n <= r; ++n) {
      if (mpz_divisible_ui_p(seq.d(n).get_mpz_t(), p)) {
        first = n;
        break;
      }
    }
    if (first != r) mismatched.push_back(p);
  }
  Json in2;
  in2["cross"] = cross;
  in2["checked"] = checked;
  rep.add("apparition.first-divisible-index", "glossary:rank-of-apparition", in2, mismatched, Json::array(),
          mismatched.empty());
  return rep;
}

Report claim_primitive_count(const RunConfig& cfg, u64 multiple, unsigned t, u64 n_max, u64 onset_max) {
  if (multiple < 1) fail_argument("primitive-count: multiple must be >= 1");
  const DivisionSequence base = base_sequence(cfg);
  const u64 n0 = primitive_onset(base, 1, onset_max, Mode::Exact);
  const DivisionSequence seq(cfg.curve(), cfg.generator(), multiple, cfg.budget());
  Report rep;
  for (u64 n = std::max<u64>(n0, 1); n <= n_max; ++n) {
    if (std::gcd(n, multiple) != 1) continue;
    Json in;
    in["multiple"] = multiple;
    in["t"] = t;
    in["n0"] = n0;
    in["n"] = n;
    const PrimitiveInfo& info = seq.certified(n);
    Json lhs = info.count_at_least();
    const bool pass = info.count_at_least() >= t;
    rep.add("primitive-count", "theorem:many-primitive-divisors", in, lhs, ">= " + std::to_string(t), pass);
  }
  return rep;
}

Report claim_density(const std::string& delta_text, u64 bound, double tolerance, double gap) {
  const ComputableReal delta = ComputableReal::parse(delta_text);
  const PrimeSet Z = primes_up_to(bound);
  const PartitionState st = subset_of_density(NormBuckets::over_q(Z), ComputableReal::constant(1), delta, Z.size());
  const Rat target = delta.exact() ? *delta.exact() : delta.at(1'000'000);
  Json in;
  in["delta"] = delta.description();
  in["bound"] = bound;

  Report rep;
  const Rat emp = empirical_density(st.A, bound);
  const double err = std::abs(Rat(emp - target).get_d());
  rep.add("density.empirical", "prop:subset-of-density", in, big(emp), big(target), err <= tolerance);
  rep.add("density.replay", "prop:subset-of-density", in, replay_matches(st), true, replay_matches(st));

  const ExtremaTrace tr = extrema(st);
  Json trace;
  trace["maxima"] = tr.j.size();
  trace["minima"] = tr.k.size();
  rep.add("density.alternation", "lemma:extrema-alternate", in, trace, "k_i < j_{i+1} < k_{i+1}", alternates(tr));

  if (!tr.j.empty() && !tr.k.empty()) {
    const Rat hi = ratio_at(st, tr.j.back()), lo = ratio_at(st, tr.k.back());
    const double g = std::abs(Rat(hi - lo).get_d());
    Json lhs;
    lhs["last_max"] = big(hi);
    lhs["last_min"] = big(lo);
    rep.add("density.terminal-gap", "lemma:extrema-converge", in, lhs, "<= " + std::to_string(gap).substr(0, 4),
            g <= gap);
  } else {
    rep.add("density.terminal-gap", "lemma:extrema-converge", in, "no extrema", "<= gap", false);
  }
  return rep;
}

Report claim_partition(const std::vector<std::string>& delta_texts, u64 bound, double tolerance) {
  std::vector<ComputableReal> deltas;
  for (const auto& d : delta_texts) deltas.push_back(ComputableReal::parse(d));
  const PartitionResult res = partition(deltas, bound);
  const PrimeSet universe = primes_up_to(bound);
  Json in;
  in["densities"] = delta_texts;
  in["bound"] = bound;

  Report rep;
  u64 overlaps = 0;
  for (std::size_t a = 0; a < res.parts.size(); ++a) {
    for (std::size_t b = a + 1; b < res.parts.size(); ++b) overlaps += set_intersection(res.parts[a], res.parts[b]).size();
  }
  rep.add("partition.disjoint", "prop:partition-densities", in, overlaps, 0, overlaps == 0);
  PrimeSet all;
  for (const auto& p : res.parts) all = set_union(all, p);
  rep.add("partition.cover", "prop:partition-densities", in, all.size(), universe.size(), all == universe);
  for (std::size_t i = 0; i < res.parts.size(); ++i) {
    const Rat target = deltas[i].exact() ? *deltas[i].exact() : deltas[i].at(1'000'000);
    const Rat emp = empirical_density(res.parts[i], bound);
    Json pin = in;
    pin["part"] = i + 1;
    pin["count"] = res.parts[i].size();
    rep.add("partition.density", "prop:partition-densities", pin, big(emp), big(target),
            std::abs(Rat(emp - target).get_d()) <= tolerance);
  }
  return rep;
}

Report claim_assembly(const RunConfig& cfg) {
  if (cfg.densities.size() != cfg.t) fail_argument("assembly: need exactly t densities");
  const BuildContext ctx = context(cfg, Variant::Discrete);
  const RelaxPolicy relax = cfg.relax_policy();
  const SeqState st = build_sequences(ctx, relax);
  const auto ts = build_tsets(ctx, st, cfg.ell_bound, relax);
  const u64 X = ctx.table().scan_bound;

  std::vector<ComputableReal> deltas;
  for (const auto& d : cfg.densities) deltas.push_back(ComputableReal::parse(d));
  const PartitionResult W = partition(deltas, X);
  std::vector<RingTSets> rings;
  Json unresolved = Json::array();
  for (const auto& t : ts) {
    rings.push_back({t.T1, t.T2()});
    for (const auto& u : t.unresolved) unresolved.push_back({{"r", t.r}, {"family", u.family}, {"index", u.index}});
  }
  Assembly as = assemble_rings(W.parts, rings, X);
  Report rep;
  Json in;
  in["bound"] = X;
  in["rounds"] = cfg.count;
  in["relax"] = relax.name;
  ClaimRecord rec{"assembly.unresolved", "assembly:partition", in, unresolved, Json::array(), unresolved.empty()};
  rec.hard = false;
  rep.add(rec);
  rep.append(as.report);
  return rep;
}

Report claim_section(const RunConfig& cfg, u64 n_bound) {
  const BuildContext ctx = context(cfg, Variant::Discrete);
  const SeqState st = build_sequences(ctx, cfg.relax_policy());
  Report rep;
  for (unsigned r = 1; r <= cfg.t; ++r) rep.append(verify_section(ctx, st, r, n_bound));
  return rep;
}

Report claim_disjointness(const RunConfig& cfg) {
  const BuildContext ctx = context(cfg, cfg.variant);
  const RelaxPolicy relax = cfg.relax_policy();
  const SeqState st = build_sequences(ctx, relax);
  return verify_disjointness(build_tsets(ctx, st, cfg.ell_bound, relax));
}

Report claim_xdifference(const RunConfig& cfg, const std::vector<u64>& m_values, bool raw) {
  if (raw) {
    const ModelInstance inst(cfg.curve(), cfg.generator(), cfg.p, cfg.q, true, cfg.max_index);
    return verify_xdifference(inst, m_values);
  }
  const BuildContext ctx = context(cfg, Variant::Model);
  // x(nP) with P = zQ is as large as x(nzQ); keep the exact route well inside max_index.
  const u64 limit = cfg.max_index / (2 * ctx.params().z);
  return verify_xdifference(ModelInstance::from_build(ctx.params(), limit), m_values);
}

Report claim_b_predicate(const RunConfig& cfg, const RelaxPolicy& relax) {
  const BuildContext ctx = context(cfg, Variant::Model);
  const SeqState st = build_sequences(ctx, relax);
  const ModelInstance inst = ModelInstance::from_build(ctx.params());
  Report rep;
  for (unsigned r = 1; r <= cfg.t; ++r) rep.append(verify_B_predicate(inst, st.branch(r)));
  return rep;
}

Report claim_addition(const RunConfig& cfg, const RelaxPolicy& relax,
                      const std::vector<std::tuple<u64, u64, u64>>& triples) {
  const BuildContext ctx = context(cfg, Variant::Model);
  const SeqState st = build_sequences(ctx, relax);
  const ModelInstance inst = ModelInstance::from_build(ctx.params());
  Report rep;
  for (unsigned r = 1; r <= cfg.t; ++r) rep.append(verify_addition_encoding(inst, st.branch(r), triples));
  return rep;
}

Report claim_convergence(const RunConfig& cfg, const std::vector<u64>& places) {
  const BuildContext ctx = context(cfg, Variant::Discrete);
  const SeqState st = build_sequences(ctx, cfg.relax_policy());
  Report rep;
  for (unsigned r = 1; r <= cfg.t; ++r) {
    rep.append(verify_convergence(ctx.params().curve, ctx.params().P, st.branch(r), places, r));
  }
  return rep;
}

const std::vector<std::string>& claim_names() {
  static const std::vector<std::string> names{
      "group-law",   "known-multiples", "divisibility", "gcd-support", "apparition", "primitive-count",
      "density",     "partition",       "assembly",     "section",     "disjointness", "xdifference",
      "b-oracle",    "b-predicate",     "addition",     "convergence"};
  return names;
}

}  // namespace edsq
