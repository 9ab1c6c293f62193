#pragma once

// Denominators d_n of x(nP), their supports, rank of apparition, primitive
// divisors, the exponents a_l and mu_l.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "edsq/curve.hpp"

namespace edsq {

using u64 = std::uint64_t;

enum class Mode { Exact, Scan };

const char* mode_name(Mode m);

/// r_p for primes up to scan_bound. Good primes come from the order of P mod p,
/// bad ones from direct divisibility of d_1 .. d_{bad_index_cap}.
class ApparitionTable {
 public:
  u64 scan_bound = 0;
  u64 bad_index_cap = 0;
  std::map<u64, u64> entries;    // good reduction
  std::map<u64, u64> bad;        // bad reduction, found within the cap
  std::vector<u64> bad_primes;   // every bad prime <= scan_bound
  std::shared_ptr<const ApparitionTable> base_table;  // for the base point, when P = zQ

  std::optional<u64> rank(u64 p) const;
  bool is_bad(u64 p) const;
  /// Table primes p (good or bad) with r_p == n, ascending.
  std::vector<u64> with_rank(u64 n) const;
  /// Table primes with r_p | n, ascending.
  std::vector<u64> with_rank_dividing(u64 n) const;

  void index();  // rebuild the rank index after editing entries

 private:
  std::map<u64, std::vector<u64>> by_rank_;
};

/// Primitive part of d_n and what is known about its primes.
struct PrimitiveInfo {
  u64 n = 0;
  Int part = 1;
  std::vector<Int> primes;     // found exactly, descending
  std::vector<Int> cofactors;  // unsplit pieces, each > 1
  Int floor = 1;               // every prime of a cofactor exceeds this
  unsigned cofactor_primes = 0;  // certified lower bound on distinct primes in cofactors
  bool cofactor_exact = true;
  std::vector<u64> route;      // base indices used by the decomposition route, empty if direct

  bool complete() const { return cofactors.empty(); }
  unsigned count_at_least() const { return static_cast<unsigned>(primes.size()) + cofactor_primes; }
  bool count_exact() const { return cofactor_exact; }
};

/// The sequence of an integral non-torsion point P. Optionally knows P = z*Q for an
/// integral base Q, which splits primitive parts into smaller pieces.
class DivisionSequence {
 public:
  DivisionSequence(Curve c, Point P, FactorBudget budget = {});
  DivisionSequence(Curve c, Point Q, u64 z, FactorBudget budget = {});

  const Curve& curve() const { return curve_; }
  const Point& point() const { return point_; }
  u64 multiplier() const { return z_; }
  const DivisionSequence* base() const { return base_.get(); }
  const FactorBudget& budget() const { return budget_; }

  void attach_table(std::shared_ptr<const ApparitionTable> table);
  const ApparitionTable* table() const { return table_.get(); }

  Rat x(u64 n) const;
  /// d_n; cached.
  Int d(u64 n) const;
  /// d_n with all content shared with d_{n/q} (q | n prime) removed.
  Int primitive_part(u64 n) const;
  /// Cached; exact mode raises BudgetExhausted when a piece will not split.
  const PrimitiveInfo& primitive(u64 n, Mode mode) const;
  /// Exact route that keeps unsplit pieces: count_at_least() is a certified lower bound.
  const PrimitiveInfo& certified(u64 n) const;

 private:
  const PrimitiveInfo& primitive_impl(u64 n, Mode mode, bool lenient) const;
  PrimitiveInfo compute_primitive(u64 n, Mode mode, bool lenient) const;

  Curve curve_;
  Point point_;
  u64 z_ = 1;
  std::unique_ptr<DivisionSequence> base_;
  FactorBudget budget_;
  std::shared_ptr<const ApparitionTable> table_;

  mutable std::mutex mu_;
  mutable std::map<u64, Int> d_cache_;
  mutable std::map<std::pair<u64, int>, PrimitiveInfo> prim_cache_;
};

struct DivTerm {
  u64 n = 0;
  Rat x;
  Int d;
  PartialFactorization factorization;
  std::vector<Int> support;  // ascending
  bool support_complete = true;
  Int primitive_part;
  std::vector<Int> primitive_primes;  // descending
  bool primitive_complete = true;
};

DivTerm div_term(const DivisionSequence& seq, u64 n, Mode mode);

/// Good primes p <= X: r_p = order of P mod p. Bad primes: direct scan of d_n, n <= bad_index_cap.
/// Uses up to `workers` threads; the result does not depend on the thread count.
ApparitionTable apparition_scan(const DivisionSequence& seq, u64 X, u64 bad_index_cap = 60,
                                unsigned workers = 1);

/// Worker count from EDS_WORKERS, else hardware concurrency.
unsigned default_workers();

struct PrimitiveList {
  std::vector<Int> primes;  // descending
  bool certified_complete = true;
};

PrimitiveList primitive_divisors(const DivisionSequence& seq, u64 n, Mode mode);

struct KthResult {
  std::optional<Int> prime;        // exact mode: the k-th largest, if it exists
  bool threshold_certified = false;  // at least k primitive primes exceed the threshold
  unsigned witnesses = 0;          // primes certified above the threshold
  std::vector<Int> witness_primes; // the ones known explicitly
};

KthResult kth_largest_primitive(const DivisionSequence& seq, u64 n, unsigned k, Mode mode,
                                const Int& threshold = 0);

/// Where the k-th largest primitive prime of d_n sits relative to the scan bound.
struct KthInUniverse {
  enum Kind { Prime, Beyond, Absent, Unresolved } kind = Unresolved;
  Int prime;  // set when kind == Prime
};

KthInUniverse kth_in_universe(const DivisionSequence& seq, u64 n, unsigned k);

struct ALEntry {
  u64 a = 0;            // 0 when unresolved within budget
  bool resolved = false;
};

struct ALTable {
  unsigned t = 2;
  std::map<u64, ALEntry> a;
  std::vector<u64> L_set;
  Int L_value = 1;
  bool complete = true;
};

/// a_l for primes l <= ell_bound. Exact mode counts through certified(), so an
/// exponent resolves once enough primes are proven, split or not.
ALTable compute_aL(const DivisionSequence& seq, unsigned t, u64 ell_bound, Mode mode,
                   u64 max_index = 4096);

struct MuValue {
  Rat lower;
  Rat upper;
  bool exact = false;
  u64 attained_at = 0;  // X where the lower bound is attained (0 when S is empty)
};

/// sup over X of #{p in S_l : p <= X} / #{p <= X}.
MuValue mu(const DivisionSequence& seq, u64 ell, Mode mode);

/// Exact sup for a completely known finite set of primes.
MuValue mu_of_support(const std::vector<Int>& support);

/// Smallest n0 with >= t certified primitive primes for every n in [n0, n_max].
/// Exact mode counts through certified(), so unsplit pieces still count.
/// Returns n_max + 1 when n_max itself fails.
u64 primitive_onset(const DivisionSequence& seq, unsigned t, u64 n_max, Mode mode);

/// Prime divisors of n, ascending.
std::vector<u64> prime_divisors_u64(u64 n);
std::vector<u64> divisors_u64(u64 n);

}  // namespace edsq
