#include "edsq/model.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "edsq/eds.hpp"
#include "edsq/error.hpp"

namespace edsq {

namespace {

long ord_u64(u64 p, u64 m) {
  long e = 0;
  while (m % p == 0) {
    m /= p;
    ++e;
  }
  return e;
}

Json instance_inputs(const ModelInstance& inst) {
  Json j;
  j["p"] = inst.p;
  j["q"] = inst.q;
  j["M"] = big(inst.M);
  j["raw"] = inst.raw;
  return j;
}

// 1-based round i of a branch, checked against the modulus.
void check_branch(const ModelInstance& inst, const std::vector<u64>& branch) {
  for (u64 ell : branch) {
    if ((to_int(ell) - 1) % inst.M != 0) {
      fail_argument("branch entry " + std::to_string(ell) + " is not 1 mod M");
    }
  }
}

}  // namespace

ModelInstance::ModelInstance(const Curve& c_, const Point& P_, u64 p_, u64 q_, bool raw_, u64 max_index_)
    : curve(c_), P(P_), p(p_), q(q_), raw(raw_), max_index(max_index_) {
  if (P.is_infinity() || !P.is_integral()) fail_argument("model instance: P must be an integral point");
  M = model_modulus(curve, P, p, q);
  const u64 n = to_u64(M) + 1;
  c = ord_diff(p, n);
  c_q = ord_diff(q, n);
}

ModelInstance ModelInstance::from_build(const BuildParams& bp, u64 max_index) {
  if (bp.variant != Variant::Model) fail_argument("model instance needs a model-variant build");
  return ModelInstance(bp.curve, bp.P, bp.p, bp.q, false, max_index);
}

long ModelInstance::ord_diff(u64 v, u64 n) const { return padic_xdiff_order(curve, P, n, to_int(v)); }

long ModelInstance::ord_diff_exact(u64 v, u64 n) const {
  if (n > max_index) {
    fail_budget("exact x_" + std::to_string(n) + " exceeds max_index " + std::to_string(max_index));
  }
  const Rat diff = x_multiple(curve, P, n) - P.x();
  return ord_at(to_int(v), diff);
}

Report verify_xdifference(const ModelInstance& inst, const std::vector<u64>& m_values) {
  Report rep;
  const u64 M = to_u64(inst.M);
  for (u64 m : m_values) {
    if (m == 0) fail_argument("verify_xdifference: m must be >= 1");
    const u64 n = m * M + 1;
    std::optional<Rat> diff;
    if (n <= inst.max_index) diff = x_multiple(inst.curve, inst.P, n) - inst.P.x();
    for (const auto& [v, cv] : {std::pair{inst.p, inst.c}, std::pair{inst.q, inst.c_q}}) {
      Json in = instance_inputs(inst);
      in["v"] = v;
      in["m"] = m;
      in["index"] = n;
      const long rhs = cv + ord_u64(v, m);
      if (diff) {
        in["route"] = "exact";
        const long lhs = ord_at(to_int(v), *diff);
        rep.add("model.xdifference", "lemma:x-difference-valuation", in, lhs, rhs, lhs == rhs);
      }
      in["route"] = "padic";
      const long lhs = inst.ord_diff(v, n);
      rep.add("model.xdifference", "lemma:x-difference-valuation", in, lhs, rhs, lhs == rhs);
    }
  }
  return rep;
}

Report verify_B_oracle(u64 limit) {
  std::set<u64> members;
  for (u64 n = 1; n < 63; ++n) {
    const u64 v = (u64{1} << n) + n * n;
    if (v > limit) break;
    members.insert(v);
  }
  Report rep;
  u64 mismatches = 0;
  for (u64 i = 1; i <= limit; ++i) {
    if (in_B(i) != (members.count(i) > 0)) ++mismatches;
  }
  Json in;
  in["limit"] = limit;
  Json listed = Json::array();
  for (u64 v : members) listed.push_back(v);
  rep.add("model.b-oracle", "lemma:b-set-enumeration", in, mismatches, 0, mismatches == 0);
  Json in2 = in;
  in2["members"] = listed;
  rep.add("model.b-members", "lemma:b-set-enumeration", in2, members.size(), members.size(), true);
  return rep;
}

Report verify_B_predicate(const ModelInstance& inst, const std::vector<u64>& branch) {
  check_branch(inst, branch);
  Report rep;
  for (std::size_t k = 0; k < branch.size(); ++k) {
    const u64 i = k + 1, ell = branch[k];
    const Int u = (to_int(ell) - 1) / inst.M;
    const bool member = in_B(i);
    const bool q_divides = u % to_int(inst.q) == 0;
    const long o = inst.ord_diff(inst.q, ell);
    const bool ord_above = o > inst.c_q;
    Json in = instance_inputs(inst);
    in["i"] = i;
    in["ell"] = ell;
    Json lhs;
    lhs["in_B"] = member;
    lhs["q_divides"] = q_divides;
    lhs["ord_q"] = o;
    Json rhs;
    rhs["c_q"] = inst.c_q;
    rep.add("model.b-predicate", "prop:model-b-predicate", in, lhs, rhs, member == q_divides && q_divides == ord_above);
  }
  return rep;
}

Report verify_addition_encoding(const ModelInstance& inst, const std::vector<u64>& branch,
                                const std::vector<std::tuple<u64, u64, u64>>& triples) {
  check_branch(inst, branch);
  std::vector<long> o(branch.size());
  for (std::size_t k = 0; k < branch.size(); ++k) o[k] = inst.ord_diff(inst.p, branch[k]);

  Report rep;
  for (std::size_t k = 0; k < branch.size(); ++k) {
    Json in = instance_inputs(inst);
    in["i"] = k + 1;
    in["ell"] = branch[k];
    const long rhs = inst.c + static_cast<long>(k + 1);
    rep.add("model.ord-c-plus-i", "prop:model-addition", in, o[k], rhs, o[k] == rhs);
  }
  for (const auto& [i, j, k] : triples) {
    if (i < 1 || j < 1 || k < 1 || i > branch.size() || j > branch.size() || k > branch.size()) {
      fail_argument("addition triple refers to an unbuilt round");
    }
    const bool sum = i + j == k;
    const bool ords = o[i - 1] + o[j - 1] == o[k - 1] + inst.c;
    Json in = instance_inputs(inst);
    in["triple"] = {i, j, k};
    Json lhs;
    lhs["i+j=k"] = sum;
    Json rhs;
    rhs["o_i+o_j=o_k+c"] = ords;
    rep.add("model.addition", "prop:model-addition", in, lhs, rhs, sum == ords);
  }
  return rep;
}

Report verify_convergence(const Curve& c, const Point& P, const std::vector<u64>& branch,
                          const std::vector<u64>& places, unsigned r) {
  std::vector<Rat> xs;
  xs.reserve(branch.size());
  for (u64 ell : branch) xs.push_back(x_multiple(c, P, ell));
  const Rat& x1 = P.x();

  Report rep;
  Json base;
  base["r"] = r;
  base["branch"] = branch;

  {
    Json dist = Json::array();
    bool decreasing = true;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const Rat d = abs(xs[k] - x1);
      dist.push_back(big(d));
      if (k > 0 && !(d < abs(xs[k - 1] - x1))) decreasing = false;
    }
    ClaimRecord rec{"convergence.archimedean", "lemma:convergence-to-p", base, dist, "strictly decreasing", decreasing};
    rec.hard = false;
    rep.add(rec);
  }
  for (u64 v : places) {
    Json in = base;
    in["v"] = v;
    Json ords = Json::array();
    bool nondecreasing = true;
    std::optional<long> prev;
    for (const Rat& x : xs) {
      const Rat d = x - x1;
      const long o = ord_at(to_int(v), d);
      ords.push_back(o);
      if (prev && o < *prev) nondecreasing = false;
      prev = o;
    }
    ClaimRecord rec{"convergence.finite-place", "lemma:convergence-to-p", in, ords, "nondecreasing", nondecreasing};
    rec.hard = false;
    rep.add(rec);
  }
  {
    std::optional<Rat> best;
    for (std::size_t a = 0; a < xs.size(); ++a) {
      for (std::size_t b = a + 1; b < xs.size(); ++b) {
        const Rat d = abs(xs[a] - xs[b]);
        if (!best || d < *best) best = d;
      }
    }
    Json lhs = best ? big(*best) : Json("none");
    rep.add("discreteness.min-distance", "prop:discrete-subset", base, lhs, "> 0", !best || sgn(*best) > 0);
  }
  {
    const bool absent = std::none_of(xs.begin(), xs.end(), [&](const Rat& x) { return x == x1; });
    rep.add("discreteness.limit-outside", "prop:discrete-subset", base, big(x1), absent ? "not in A_r" : "in A_r",
            absent);
  }
  return rep;
}

}  // namespace edsq
