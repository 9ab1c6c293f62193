#include "edsq/seq_builder.hpp"

#include <algorithm>
#include <map>

#include "edsq/eds.hpp"
#include "edsq/error.hpp"

namespace edsq {

namespace {

// Largest index at which d_n is computed just to test one prime.
constexpr u64 kDirectIndex = 2000;

Int pow_int(u64 base, u64 e) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, e);
  return r;
}

Int factorial(u64 n) {
  Int r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

bool divides_int(u64 p, const Int& v) { return mpz_divisible_ui_p(v.get_mpz_t(), p) != 0; }

std::string join(const std::vector<u64>& v) {
  std::string s;
  for (u64 x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
  return s;
}

void need_index(const BuildContext& ctx, u64 n, const char* what) {
  if (n > ctx.params().options.max_index) {
    fail_budget(std::string(what) + ": index " + std::to_string(n) + " exceeds max_index " +
                std::to_string(ctx.params().options.max_index));
  }
}

// Primes <= X of S_l: table ranks plus bad primes by direct divisibility.
PrimeSet small_support(const BuildContext& ctx, u64 ell, bool& resolved) {
  const ApparitionTable& table = ctx.table();
  PrimeSet out = table.with_rank_dividing(ell);
  resolved = true;
  std::vector<u64> unknown_bad;
  for (u64 p : table.bad_primes) {
    if (!table.bad.count(p)) unknown_bad.push_back(p);
  }
  const DivisionSequence& seq = ctx.sequence();
  const Int two_y = 2 * seq.point().y().get_num();
  for (u64 p : unknown_bad) {
    if (!divides_int(p, two_y)) {
      if (padic_denominator_order(seq.curve(), seq.point(), ell, to_int(p)) > 0) out.push_back(p);
    } else if (ell <= kDirectIndex) {
      if (divides_int(p, seq.d(ell))) out.push_back(p);
    } else {
      resolved = false;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

const char* variant_name(Variant v) { return v == Variant::Discrete ? "discrete" : "model"; }

Variant parse_variant(const std::string& s) {
  if (s == "discrete") return Variant::Discrete;
  if (s == "model") return Variant::Model;
  fail_argument("unknown variant '" + s + "' (discrete|model)");
}

RelaxPolicy RelaxPolicy::strict() { return {}; }

RelaxPolicy RelaxPolicy::desk() {
  RelaxPolicy p;
  p.name = "desk";
  p.max_exact_index = 400;
  p.factorial_cap = 6;
  return p;
}

RelaxPolicy RelaxPolicy::parse(const std::string& name) {
  if (name == "strict") return strict();
  if (name == "desk") return desk();
  fail_argument("unknown relaxation policy '" + name + "' (strict|desk)");
}

Int model_modulus(const Curve& curve, const Point& P, u64 p, u64 q) {
  const Int y = P.y().get_num();
  for (u64 v : {p, q}) {
    if (!is_prime_u64(v) || v == 2) fail_argument("model primes must be odd primes");
    if (!curve.good_reduction(to_int(v))) fail_argument("model prime " + std::to_string(v) + " has bad reduction");
    if (divides_int(v, y)) fail_argument("model prime " + std::to_string(v) + " divides y(P)");
  }
  if (p == q) fail_argument("model primes must be distinct");
  return to_int(p) * to_int(q) * to_int(reduce_stats(curve, p).order) * to_int(reduce_stats(curve, q).order);
}

bool in_B(u64 i) {
  for (u64 n = 1; n < 63; ++n) {
    const u64 v = (u64{1} << n) + n * n;
    if (v == i) return true;
    if (v > i) return false;
  }
  return false;
}

// ---- state ----

std::optional<u64> SeqState::at(u64 i, unsigned r) const {
  for (const auto& e : entries) {
    if (e.i == i && e.r == r) return e.ell;
  }
  return std::nullopt;
}

std::vector<u64> SeqState::V(u64 i, unsigned r) const {
  std::vector<u64> out;
  for (const auto& e : entries) {
    if (e.i < i || (e.i == i && e.r < r)) out.push_back(e.ell);
  }
  return out;
}

std::vector<u64> SeqState::branch(unsigned r) const {
  std::vector<u64> out;
  for (const auto& e : entries) {
    if (e.r == r) out.push_back(e.ell);
  }
  return out;
}

std::pair<u64, unsigned> SeqState::next_slot() const {
  if (entries.empty()) return {1, 1};
  const auto& last = entries.back();
  if (last.r < t) return {last.i, last.r + 1};
  return {last.i + 1, 1};
}

// ---- context ----

BuildContext::BuildContext(const Curve& c, const Point& Q, const BuildOptions& options) {
  BuildParams& bp = params_;
  bp.options = options;
  bp.variant = options.variant;
  bp.t = options.t;
  bp.count = options.count;
  if (bp.t < 2) fail_argument("t must be >= 2");
  if (Q.is_infinity() || !on_curve(c, Q)) fail_argument("Q must be an affine point on the curve");
  if (is_torsion(c, Q)) fail_argument("Q is a torsion point");
  bp.torsion = torsion_order(c);
  bp.z = to_u64(pow_int(2, bp.t - 1) * pow_int(3, bp.t - 1)) * bp.torsion;

  Point P = scalar_mul(c, Int(to_int(bp.z)), Q);
  Curve curve = c;
  Point base = Q;
  if (!P.is_integral()) {
    IntegralModel im = integral_model(c, P);
    bp.u = im.u;
    curve = im.curve;
    P = im.point;
    const Rat u2 = Rat(im.u * im.u), u3 = Rat(im.u * im.u * im.u);
    base = Point(Q.x() * u2, Q.y() * u3);
  }
  bp.curve = curve;
  bp.Q = base;
  bp.P = P;
  if (base.is_integral()) {
    seq_ = std::make_unique<DivisionSequence>(curve, base, bp.z, options.budget);
  } else {
    seq_ = std::make_unique<DivisionSequence>(curve, P, options.budget);
  }
  table_ = std::make_shared<ApparitionTable>(apparition_scan(*seq_, options.scan_bound, 60, options.workers));
  seq_->attach_table(table_);

  bp.n0 = options.n0 ? *options.n0 : primitive_onset(*seq_, bp.t, options.onset_max, Mode::Scan);
  al_ = compute_aL(*seq_, bp.t, options.ell_bound, Mode::Scan, options.max_index);

  if (bp.variant == Variant::Model) {
    bp.p = options.p;
    bp.q = options.q;
    bp.M = model_modulus(curve, P, bp.p, bp.q);
  }
}

bool BuildContext::in_L(u64 ell) const {
  auto it = al_.a.find(ell);
  return it != al_.a.end() && it->second.resolved && it->second.a > 1;
}

// ---- slot search ----

namespace {

struct Search {
  const BuildContext& ctx;
  const RelaxPolicy& relax;
  u64 i;
  unsigned r;
  std::vector<u64> V;
  Int two_i;

  ConditionCheck order(u64 ell) const {
    const u64 vmax = V.empty() ? 0 : *std::max_element(V.begin(), V.end());
    const bool ok = ell > vmax && ell > 3;
    return {"order", "arithmetic", ok, "l > max(V) = " + std::to_string(vmax) + " and l > 3"};
  }

  ConditionCheck onset(u64 ell) const {
    const u64 n0 = ctx.params().n0;
    return {"onset", "arithmetic", ell >= n0, "n0 = " + std::to_string(n0)};
  }

  ConditionCheck outside_L(u64 ell) const {
    const auto& al = ctx.al();
    if (auto it = al.a.find(ell); it != al.a.end()) {
      if (!it->second.resolved) return {"outside-L", "scan", false, "a_l unresolved"};
      return {"outside-L", "scan", it->second.a == 1, "a_l = " + std::to_string(it->second.a)};
    }
    if (relax.skips(ell)) return {"outside-L", "relaxed", true, "index above policy cap"};
    need_index(ctx, ell, "outside-L");
    const auto& info = ctx.sequence().primitive(ell, Mode::Scan);
    const bool ok = info.count_at_least() >= ctx.params().t;
    return {"outside-L", "scan", ok, std::to_string(info.count_at_least()) + " primitive primes certified"};
  }

  ConditionCheck congruence(u64 ell) const {
    const u64 cap = relax.factorial_cap;
    const u64 k = (cap != 0 && i > cap) ? cap : i;
    const Int m = factorial(k);
    const bool ok = (to_int(ell) - 1) % m == 0;
    return {"congruence", k == i ? "arithmetic" : "relaxed", ok, "l = 1 mod " + std::to_string(k) + "!"};
  }

  ConditionCheck archimedean(u64 ell) const {
    if (relax.skips(ell - 1)) return {"archimedean", "relaxed", true, "index above policy cap"};
    need_index(ctx, ell - 1, "archimedean");
    const Rat x = ctx.sequence().x(ell - 1);
    const bool ok = abs(x) > Rat(static_cast<long>(i));
    return {"archimedean", "exact", ok, "|x_{l-1}| > " + std::to_string(i)};
  }

  ConditionCheck mu_check(u64 ell) const {
    if (relax.skips(ell)) return {"mu", "relaxed", true, "index above policy cap"};
    need_index(ctx, ell, "mu");
    const MuValue m = mu(ctx.sequence(), ell, Mode::Scan);
    const Rat bound(Int(1), two_i);
    const std::string range = "mu in [" + to_string(m.lower) + ", " + to_string(m.upper) + "] vs 1/" + two_i.get_str();
    if (m.upper <= bound) return {"mu", m.exact ? "exact" : "scan", true, range};
    if (m.lower > bound) return {"mu", m.exact ? "exact" : "scan", false, range};
    return {"mu", "scan", false, range + " (undecided)"};
  }

  ConditionCheck threshold(u64 ell) const {
    std::vector<u64> partners = V;
    partners.push_back(ell);
    for (u64 l : ctx.al().L_set) partners.push_back(l);
    std::vector<u64> relaxed_at, checked;
    unsigned min_witnesses = ~0u;
    for (u64 other : partners) {
      const u64 n = ell * other;
      if (relax.skips(n)) {
        relaxed_at.push_back(n);
        continue;
      }
      need_index(ctx, n, "primitive-threshold");
      const KthResult k = kth_largest_primitive(ctx.sequence(), n, r, Mode::Scan, two_i);
      if (!k.threshold_certified) {
        return {"primitive-threshold", "scan", false,
                "d_" + std::to_string(n) + ": " + std::to_string(k.witnesses) + " primitive primes > " + two_i.get_str()};
      }
      min_witnesses = std::min(min_witnesses, k.witnesses);
      checked.push_back(n);
    }
    std::string detail = "indices [" + join(checked) + "] each have >= " +
                         std::to_string(checked.empty() ? 0 : min_witnesses) + " primitive primes > " + two_i.get_str();
    if (!relaxed_at.empty()) detail += "; skipped [" + join(relaxed_at) + "]";
    return {"primitive-threshold", relaxed_at.empty() ? "scan" : "relaxed", true, detail};
  }

  ConditionCheck congruence_M(u64 ell) const {
    const Int& M = ctx.params().M;
    return {"congruence", "arithmetic", (to_int(ell) - 1) % M == 0, "l = 1 mod " + M.get_str()};
  }

  ConditionCheck p_power(u64 ell) const {
    Int k = (to_int(ell) - 1) / ctx.params().M;
    const unsigned e = strip_prime(k, to_int(ctx.params().p));
    return {"p-power", "arithmetic", e == i, "ord_p((l-1)/M) = " + std::to_string(e)};
  }

  ConditionCheck b_membership(u64 ell) const {
    const Int k = (to_int(ell) - 1) / ctx.params().M;
    const bool q_divides = divides_int(ctx.params().q, k);
    const bool member = in_B(i);
    return {"b-membership", "arithmetic", q_divides == member,
            std::string("q | (l-1)/M: ") + (q_divides ? "yes" : "no") + ", i in B: " + (member ? "yes" : "no")};
  }

  // Cheap checks first; stops at the first failure.
  std::vector<ConditionCheck> evaluate(u64 ell, std::map<std::string, u64>& failures) const {
    std::vector<ConditionCheck> checks;
    auto run = [&](ConditionCheck c) {
      const bool ok = c.pass;
      if (!ok) ++failures[c.condition];
      checks.push_back(std::move(c));
      return ok;
    };
    if (!run(order(ell)) || !run(onset(ell))) return checks;
    if (ctx.params().variant == Variant::Discrete) {
      if (!run(congruence(ell)) || !run(archimedean(ell))) return checks;
    } else {
      if (!run(congruence_M(ell)) || !run(p_power(ell)) || !run(b_membership(ell))) return checks;
    }
    if (!run(outside_L(ell)) || !run(mu_check(ell))) return checks;
    run(threshold(ell));
    return checks;
  }
};

}  // namespace

SeqEntry next_prime(const BuildContext& ctx, const SeqState& state, u64 i, unsigned r, const RelaxPolicy& relax) {
  if (state.t != ctx.params().t) fail_argument("state and parameters disagree on t");
  if (std::make_pair(i, r) != state.next_slot()) {
    fail_argument("slot (" + std::to_string(i) + "," + std::to_string(r) + ") is not next in the interleaved order");
  }
  Search s{ctx, relax, i, r, state.V(i, r), pow_int(2, i)};
  const BuildParams& bp = ctx.params();
  u64 lower = std::max<u64>({4, bp.n0});
  for (u64 v : s.V) lower = std::max(lower, v + 1);

  std::map<std::string, u64> failures;
  u64 tried = 0;
  auto attempt = [&](u64 ell) -> std::optional<SeqEntry> {
    if (!is_prime_u64(ell)) return std::nullopt;
    ++tried;
    auto checks = s.evaluate(ell, failures);
    if (!std::all_of(checks.begin(), checks.end(), [](const ConditionCheck& c) { return c.pass; })) return std::nullopt;
    SeqEntry e;
    e.i = i;
    e.r = r;
    e.ell = ell;
    e.cert = {i, r, ell, bp.n0, relax.name, tried, std::move(checks)};
    return e;
  };

  const u64 limit = bp.options.search_limit;
  if (bp.variant == Variant::Discrete) {
    const u64 cap = relax.factorial_cap;
    const u64 m = to_u64(factorial((cap != 0 && i > cap) ? cap : i));
    u64 ell = lower + ((1 + m - lower % m) % m);  // smallest >= lower with ell = 1 mod m
    for (; ell <= limit; ell += m) {
      if (auto e = attempt(ell)) return *e;
    }
  } else {
    const Int step = bp.M * pow_int(bp.p, i);
    const bool member = in_B(i);
    Int u = (to_int(lower) - 1 + step - 1) / step;
    if (u < 1) u = 1;
    for (;; ++u) {
      const Int ell = 1 + step * u;
      if (ell > to_int(limit)) break;
      if (divides_int(bp.p, u)) continue;
      if (divides_int(bp.q, u) != member) continue;
      if (auto e = attempt(to_u64(ell))) return *e;
    }
  }
  std::string why;
  for (const auto& [c, n] : failures) why += " " + c + "x" + std::to_string(n);
  fail_budget("slot (" + std::to_string(i) + "," + std::to_string(r) + "): no prime <= " + std::to_string(limit) +
              " after " + std::to_string(tried) + " candidates; failures:" + why);
}

SeqState build_sequences(const BuildContext& ctx, const RelaxPolicy& relax) {
  SeqState state;
  state.t = ctx.params().t;
  for (u64 i = 1; i <= ctx.params().count; ++i) {
    for (unsigned r = 1; r <= state.t; ++r) state.entries.push_back(next_prime(ctx, state, i, r, relax));
  }
  return state;
}

// ---- T-sets ----

PrimeSet TSets::T2() const { return set_union(set_union(T2a, T2b), T2c); }

std::vector<TSets> build_tsets(const BuildContext& ctx, const SeqState& state, u64 ell_bound,
                               const RelaxPolicy& relax) {
  const BuildParams& bp = ctx.params();
  const u64 X = ctx.table().scan_bound;
  std::vector<TSets> out;
  for (unsigned r = 1; r <= state.t; ++r) {
    TSets ts;
    ts.r = r;
    ts.prime_bound = X;
    ts.ell_bound = ell_bound;
    const auto branch = state.branch(r);
    ts.rounds = branch.size();

    for (u64 ell : branch) {
      bool resolved = true;
      ts.T1 = set_union(ts.T1, small_support(ctx, ell, resolved));
      if (!resolved) ts.unresolved.push_back({"T1", ell});
    }

    auto add = [&](PrimeSet& family, const char* name, u64 n) {
      if (n > bp.options.max_index || relax.skips(n)) {
        ts.unresolved.push_back({name, n});
        return;
      }
      const KthInUniverse k = kth_in_universe(ctx.sequence(), n, r);
      if (k.kind == KthInUniverse::Prime) {
        family.push_back(to_u64(k.prime));
      } else if (k.kind == KthInUniverse::Unresolved) {
        ts.unresolved.push_back({name, n});
      }
    };

    for (u64 ell : primes_up_to(ell_bound)) {
      if (std::find(branch.begin(), branch.end(), ell) != branch.end()) continue;
      if (ctx.in_L(ell)) {
        const u64 a = ctx.al().a.at(ell).a;
        add(ts.T2a, "T2a", to_u64(pow_int(ell, a)));
      } else {
        add(ts.T2a, "T2a", ell);
      }
    }
    for (std::size_t a = 0; a < branch.size(); ++a) {
      for (std::size_t b = 0; b <= a; ++b) add(ts.T2b, "T2b", branch[a] * branch[b]);
    }
    for (u64 ell : ctx.al().L_set) {
      for (u64 li : branch) add(ts.T2c, "T2c", ell * li);
    }
    for (PrimeSet* s : {&ts.T2a, &ts.T2b, &ts.T2c}) {
      std::sort(s->begin(), s->end());
      s->erase(std::unique(s->begin(), s->end()), s->end());
    }
    out.push_back(std::move(ts));
  }
  return out;
}

std::vector<u64> ring_section(const BuildContext& ctx, const PrimePredicate& S, u64 n_bound) {
  const ApparitionTable& table = ctx.table();
  if (S.bound != table.scan_bound) fail_argument("ring_section: predicate bound must equal the table bound");
  std::vector<u64> out;
  for (u64 n = 1; n <= n_bound; ++n) {
    need_index(ctx, n, "ring_section");
    Int rest = ctx.sequence().d(n);
    bool ok = true;
    PrimeSet small = table.with_rank_dividing(n);
    for (u64 p : table.bad_primes) {
      if (divides_int(p, rest)) small.push_back(p);
    }
    for (u64 p : small) {
      if (!std::binary_search(S.small.begin(), S.small.end(), p)) ok = false;
      strip_prime(rest, to_int(p));
    }
    if (ok && rest > 1) {
      switch (S.above) {
        case PrimePredicate::Above::Include:
          break;
        case PrimePredicate::Above::Exclude:
          ok = false;
          break;
        case PrimePredicate::Above::DividesAny:
          for (const Int& g : S.generators) {
            for (Int h = gcd(rest, g); h > 1; h = gcd(rest, h)) rest /= h;
          }
          ok = rest == 1;
          break;
      }
    }
    if (ok) out.push_back(n);
  }
  return out;
}

Report verify_section(const BuildContext& ctx, const SeqState& state, unsigned r, u64 n_bound) {
  const auto branch = state.branch(r);
  PrimePredicate S;
  S.bound = ctx.table().scan_bound;
  S.above = PrimePredicate::Above::DividesAny;
  for (u64 ell : branch) {
    need_index(ctx, ell, "verify_section");
    bool resolved = true;
    S.small = set_union(S.small, small_support(ctx, ell, resolved));
    S.generators.push_back(ctx.sequence().d(ell));
  }
  const auto section = ring_section(ctx, S, n_bound);

  std::vector<u64> allowed{1};
  allowed.insert(allowed.end(), branch.begin(), branch.end());
  if (fits_u64(ctx.al().L_value)) {
    for (u64 s : divisors_u64(to_u64(ctx.al().L_value))) allowed.push_back(s);
  }
  std::sort(allowed.begin(), allowed.end());
  std::vector<u64> extra;
  for (u64 n : section) {
    if (!std::binary_search(allowed.begin(), allowed.end(), n)) extra.push_back(n);
  }
  std::vector<u64> missing;
  for (u64 ell : branch) {
    if (ell <= n_bound && !std::binary_search(section.begin(), section.end(), ell)) missing.push_back(ell);
  }
  Report rep;
  const Json in = {{"r", r}, {"n_bound", n_bound}, {"branch", branch}, {"L_value", big(ctx.al().L_value)}};
  rep.add("section.only-designed", "lemma:integer-points", in, section, "subset of {1, l_{i,r}, s | L}",
          extra.empty());
  rep.add("section.contains-branch", "lemma:integer-points", in, missing, Json::array(), missing.empty());
  return rep;
}

Report verify_disjointness(const std::vector<TSets>& tsets) {
  Report rep;
  for (const auto& ts : tsets) {
    const auto both = set_intersection(ts.T1, ts.T2());
    rep.add("tsets.t1-t2-disjoint", "lemma:integer-points", {{"r", ts.r}, {"prime_bound", ts.prime_bound}}, both,
            Json::array(), both.empty());
  }
  for (std::size_t a = 0; a < tsets.size(); ++a) {
    for (std::size_t b = a + 1; b < tsets.size(); ++b) {
      const Json in = {{"r", tsets[a].r}, {"s", tsets[b].r}, {"prime_bound", tsets[a].prime_bound}};
      const auto t1 = set_intersection(tsets[a].T1, tsets[b].T1);
      rep.add("tsets.t1-branches-disjoint", "lemma:branch-disjoint", in, t1, Json::array(), t1.empty());
      const auto t2 = set_intersection(tsets[a].T2(), tsets[b].T2());
      rep.add("tsets.t2-branches-disjoint", "lemma:branch-disjoint", in, t2, Json::array(), t2.empty());
    }
  }
  return rep;
}

Json to_json(const Certificate& c) {
  Json j;
  j["i"] = c.i;
  j["r"] = c.r;
  j["ell"] = c.ell;
  j["n0"] = c.n0;
  j["policy"] = c.policy;
  j["candidates_tried"] = c.candidates_tried;
  Json checks = Json::array();
  for (const auto& k : c.checks) {
    checks.push_back({{"condition", k.condition}, {"evidence", k.evidence}, {"pass", k.pass}, {"detail", k.detail}});
  }
  j["checks"] = checks;
  return j;
}

}  // namespace edsq
