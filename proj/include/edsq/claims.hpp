#pragma once

// The checks behind `edsq verify <claim>`. Each returns one record per checked item.

#include <string>
#include <tuple>
#include <vector>

#include "edsq/config.hpp"
#include "edsq/model.hpp"

namespace edsq {

/// Random associativity / inverse / commutativity / scalar-composition identities on multiples of Q.
Report claim_group_law(const RunConfig& cfg, u64 count, u64 seed);

/// nQ by the group law against x(nQ) from the psi ladder, n = 2 .. n_max.
Report claim_known_multiples(const RunConfig& cfg, u64 n_max);

/// d_m | d_n for every m | n <= n_max.
Report claim_divisibility(const RunConfig& cfg, u64 n_max);

/// support(d_m) n support(d_n) = support(d_gcd(m,n)) for m < n <= n_max; incomplete factorizations are skipped.
Report claim_gcd_support(const RunConfig& cfg, u64 n_max);

/// r_p | #E(F_p) for good p <= bound; r_p = min{n : p | d_n} for good p <= cross.
Report claim_apparition(const RunConfig& cfg, u64 bound, u64 cross);

/// P' = multiple * Q: every n in [n0, n_max] coprime to the multiple has >= t certified
/// primitive primes in d_n(P'). n0 is where d_k(Q) starts having a primitive prime for every k <= onset_max.
Report claim_primitive_count(const RunConfig& cfg, u64 multiple, unsigned t, u64 n_max, u64 onset_max = 60);

/// Greedy subset of the primes <= bound for density delta: density, replay, extrema alternation, terminal gap.
Report claim_density(const std::string& delta, u64 bound, double tolerance = 0.02, double gap = 0.05);

/// t-way partition of the primes <= bound: disjointness, cover, per-part density.
Report claim_partition(const std::vector<std::string>& deltas, u64 bound, double tolerance = 0.02);

/// Discrete build, T-sets and ring assembly over the primes <= scan_bound.
Report claim_assembly(const RunConfig& cfg);

/// Section and disjointness checks of the discrete build.
Report claim_section(const RunConfig& cfg, u64 n_bound);
Report claim_disjointness(const RunConfig& cfg);

Report claim_xdifference(const RunConfig& cfg, const std::vector<u64>& m_values, bool raw);
Report claim_b_predicate(const RunConfig& cfg, const RelaxPolicy& relax);
Report claim_addition(const RunConfig& cfg, const RelaxPolicy& relax,
                      const std::vector<std::tuple<u64, u64, u64>>& triples);
Report claim_convergence(const RunConfig& cfg, const std::vector<u64>& places);

/// Names accepted by `verify`.
const std::vector<std::string>& claim_names();

}  // namespace edsq
