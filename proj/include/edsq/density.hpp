#pragma once

// Computable reals, the greedy subset-of-given-density construction, extrema of
// its ratio sequence, t-way partitions of the primes, and ring assembly.

#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "edsq/arith.hpp"
#include "edsq/report.hpp"

namespace edsq {

using u64 = std::uint64_t;
using PrimeSet = std::vector<u64>;  // ascending, no duplicates

class ComputableReal {
 public:
  using Stream = std::function<Rat(u64)>;

  ComputableReal(Stream stream, std::string description, std::optional<Rat> exact = std::nullopt);

  static ComputableReal constant(const Rat& v);
  /// Truncated decimal expansions of sqrt(v); the n-th term carries 2 + bitlen(n) digits.
  static ComputableReal sqrt_of(const Rat& v);
  /// "1/2", "0.25", "sqrt(1/2)"; throws InvalidArgument otherwise.
  static ComputableReal parse(const std::string& text);

  /// r_n, n >= 1
  Rat at(u64 n) const { return stream_(n); }
  const std::string& description() const { return description_; }
  const std::optional<Rat>& exact() const { return exact_; }

  /// 1 - sum of terms, termwise.
  static ComputableReal one_minus_sum(const std::vector<ComputableReal>& terms);

 private:
  Stream stream_;
  std::string description_;
  std::optional<Rat> exact_;
};

/// Primes of Z grouped by norm, ascending. Over Q each bucket holds one prime.
struct NormBuckets {
  std::vector<u64> norms;
  std::vector<std::vector<u64>> primes;

  static NormBuckets over_q(const PrimeSet& z);
  std::size_t size() const { return norms.size(); }
};

struct StepRecord {
  u64 i = 0;
  u64 a = 0;
  u64 z = 0;
  Rat r;           // clamped approximant used at this step
  bool include = false;  // whether bucket i+1 joined A
};

struct PartitionState {
  u64 step = 0;
  PrimeSet A;
  PrimeSet Z;
  u64 a = 0;
  u64 z = 0;
  std::vector<StepRecord> history;  // one record per step i = 1 .. step
  std::string special;              // "", "empty" or "all" when the loop was skipped
};

/// Runs up to N steps of the greedy construction on Z (density gamma) for density delta.
/// Rejects approximant pairs with g_i = 0 or d_i / g_i outside [0, 1].
PartitionState subset_of_density(const NormBuckets& Z, const ComputableReal& gamma, const ComputableReal& delta,
                                 u64 N);

/// Replays the recorded history against the inclusion rule; true iff every decision matches.
bool replay_matches(const PartitionState& state);

struct ExtremaTrace {
  std::vector<u64> j;  // local maxima, j[0] == 1
  std::vector<u64> k;  // local minima
};

ExtremaTrace extrema(const PartitionState& state);

/// a_i / z_i at 1-based position i, as indexed by extrema (i = step + 1 is the final state).
Rat ratio_at(const PartitionState& state, u64 i);

/// k_i < j_{i+1} < k_{i+1} with k_0 = 0.
bool alternates(const ExtremaTrace& trace);

/// Longest run of identical decisions at the end of the history.
u64 terminal_run(const PartitionState& state);

struct PartitionResult {
  std::vector<PrimeSet> parts;
  std::vector<PartitionState> states;  // one per constructed part (t - 1 of them)
};

PartitionResult partition(const std::vector<ComputableReal>& deltas, u64 X);

struct RingTSets {
  PrimeSet T1;
  PrimeSet T2;
};

struct Assembly {
  std::vector<PrimeSet> S;
  Report report;
};

/// S_i = (W_i u T1_i u T2_j) \ (T2_i u U_{r != i} T1_r), j = i - 1 mod t.
Assembly assemble_rings(const std::vector<PrimeSet>& W, const std::vector<RingTSets>& tsets, u64 X,
                        double density_tolerance = 0.02);

/// #{p in S : p <= X} / #{p <= X}
Rat empirical_density(const PrimeSet& S, u64 X);
/// The counting ratio at each X in grid.
std::vector<Rat> density_stream(const PrimeSet& S, const std::vector<u64>& grid);

PrimeSet set_union(const PrimeSet& a, const PrimeSet& b);
PrimeSet set_intersection(const PrimeSet& a, const PrimeSet& b);
PrimeSet set_difference(const PrimeSet& a, const PrimeSet& b);

/// Newline-separated ascending decimal primes.
PrimeSet read_prime_set(std::istream& in);
void write_prime_set(std::ostream& out, const PrimeSet& s);

/// JSON-lines {"prime": p, "part": i}, parts numbered from 1.
void write_manifest(std::ostream& out, const std::vector<PrimeSet>& parts);
std::vector<PrimeSet> read_manifest(std::istream& in);

}  // namespace edsq
