#pragma once

// The prime sequences l_{i,r} (discrete-set and model variants), their
// certificates, the T-sets and the checks on them.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "edsq/density.hpp"
#include "edsq/divseq.hpp"
#include "edsq/report.hpp"

namespace edsq {

enum class Variant { Discrete, Model };

const char* variant_name(Variant v);
Variant parse_variant(const std::string& s);

/// Which checks may be skipped, and where. Every skip is stamped "relaxed" in the certificate.
struct RelaxPolicy {
  std::string name = "strict";
  u64 max_exact_index = 0;  // mu / primitive-threshold / archimedean checks above this index are skipped (0: never)
  u64 factorial_cap = 0;    // congruence modulus min(i, cap)! instead of i! (0: no cap)

  static RelaxPolicy strict();
  static RelaxPolicy desk();
  static RelaxPolicy parse(const std::string& name);
  bool skips(u64 index) const { return max_exact_index != 0 && index > max_exact_index; }
};

/// p q #E(F_p) #E(F_q) after checking p, q odd, distinct, good, and prime to y(P).
Int model_modulus(const Curve& curve, const Point& P, u64 p, u64 q);

/// i in {2^n + n^2 : n >= 1}
bool in_B(u64 i);

struct BuildOptions {
  Variant variant = Variant::Discrete;
  unsigned t = 2;
  u64 count = 2;            // rounds i
  u64 scan_bound = 100'000; // apparition table bound X
  u64 ell_bound = 50;       // a_l computed for l <= ell_bound
  u64 onset_max = 60;       // n0 is checked on [1, onset_max]
  std::optional<u64> n0;    // override for the empirical onset
  u64 search_limit = 10'000'000;  // largest candidate l
  u64 max_index = 20'000;   // larger indices of d_n are never computed
  u64 p = 3, q = 5;         // model variant
  unsigned workers = 1;
  FactorBudget budget;
};

struct BuildParams {
  Variant variant = Variant::Discrete;
  unsigned t = 2;
  Curve curve{-16, 16};
  Point Q;
  u64 torsion = 1;
  u64 z = 1;
  Point P;
  Int u = 1;           // integral-model scaling applied to the input curve
  u64 count = 0;
  u64 n0 = 1;
  u64 p = 0, q = 0;
  Int M = 0;
  BuildOptions options;
};

struct ConditionCheck {
  std::string condition;
  std::string evidence;  // exact | scan | arithmetic | relaxed
  bool pass = false;
  std::string detail;
};

struct Certificate {
  u64 i = 0;
  unsigned r = 0;
  u64 ell = 0;
  u64 n0 = 0;
  std::string policy;
  u64 candidates_tried = 0;
  std::vector<ConditionCheck> checks;
};

struct SeqEntry {
  u64 i = 0;
  unsigned r = 0;
  u64 ell = 0;
  Certificate cert;
};

struct SeqState {
  unsigned t = 2;
  std::vector<SeqEntry> entries;  // in build order (1,1),(1,2),...,(1,t),(2,1),...

  std::optional<u64> at(u64 i, unsigned r) const;
  /// Primes chosen before slot (i, r) in the interleaved order.
  std::vector<u64> V(u64 i, unsigned r) const;
  std::vector<u64> branch(unsigned r) const;
  std::pair<u64, unsigned> next_slot() const;
};

/// Sequence, apparition table and a_l data shared by every slot.
class BuildContext {
 public:
  BuildContext(const Curve& c, const Point& Q, const BuildOptions& options);

  const BuildParams& params() const { return params_; }
  const DivisionSequence& sequence() const { return *seq_; }
  const ApparitionTable& table() const { return *table_; }
  const ALTable& al() const { return al_; }
  bool in_L(u64 ell) const;

 private:
  BuildParams params_;
  std::unique_ptr<DivisionSequence> seq_;
  std::shared_ptr<const ApparitionTable> table_;
  ALTable al_;
};

/// Smallest prime for slot (i, r) satisfying every condition of the variant.
SeqEntry next_prime(const BuildContext& ctx, const SeqState& state, u64 i, unsigned r, const RelaxPolicy& relax);

/// Builds rounds 1..count for every branch.
SeqState build_sequences(const BuildContext& ctx, const RelaxPolicy& relax);

struct TSets {
  unsigned r = 0;
  PrimeSet T1, T2a, T2b, T2c;
  PrimeSet T2() const;
  struct Unresolved {
    std::string family;
    u64 index;
  };
  std::vector<Unresolved> unresolved;
  u64 prime_bound = 0;  // every set is exact among primes <= this
  u64 ell_bound = 0;    // T2a covers l <= this
  u64 rounds = 0;       // T1, T2b, T2c cover i <= this
};

/// Indices the policy skips, or above max_index, land in `unresolved`.
std::vector<TSets> build_tsets(const BuildContext& ctx, const SeqState& state, u64 ell_bound,
                               const RelaxPolicy& relax = RelaxPolicy::strict());

/// Membership: listed primes up to bound; above it, by the chosen rule.
struct PrimePredicate {
  PrimeSet small;
  u64 bound = 0;
  enum class Above { Include, Exclude, DividesAny } above = Above::Exclude;
  std::vector<Int> generators;  // DividesAny: p > bound is a member iff it divides one of these
};

/// n <= n_bound whose d_n has every prime in S.
std::vector<u64> ring_section(const BuildContext& ctx, const PrimePredicate& S, u64 n_bound);

/// S = T1_r (exact, all sizes): the section must be {1} u {l_{i,r}} u (some divisors of L_value).
Report verify_section(const BuildContext& ctx, const SeqState& state, unsigned r, u64 n_bound);

/// T1_r vs T2_r, and T_{j,r} vs T_{j,s} for r != s.
Report verify_disjointness(const std::vector<TSets>& tsets);

Json to_json(const Certificate& c);

}  // namespace edsq
