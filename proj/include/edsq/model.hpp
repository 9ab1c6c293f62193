#pragma once

// Checks on the valuation machinery behind the model variant: the
// x-difference identity, the B-predicate, the addition encoding, and the
// convergence / discreteness shadow of the discrete variant.

#include <tuple>
#include <vector>

#include "edsq/report.hpp"
#include "edsq/seq_builder.hpp"

namespace edsq {

struct ModelInstance {
  Curve curve{-16, 16};
  Point P;
  u64 p = 3, q = 5;
  Int M = 0;
  long c = 0;    // ord_p(x_{M+1} - x_1)
  long c_q = 0;  // ord_q(x_{M+1} - x_1)
  bool raw = false;  // P is the generator itself, not its z-multiple
  u64 max_index = 10'000;  // exact x_n is only computed up to here

  /// Validates p, q against P and fixes M, c, c_q.
  ModelInstance(const Curve& c, const Point& P, u64 p, u64 q, bool raw, u64 max_index = 10'000);

  /// The instance behind a model-variant build (P = z Q).
  static ModelInstance from_build(const BuildParams& bp, u64 max_index = 10'000);

  /// ord_v(x_n - x_1) for v in {p, q}, through the p-adic ladder.
  long ord_diff(u64 v, u64 n) const;
  /// Same, from the exact rational x_n. Throws a budget error above max_index.
  long ord_diff_exact(u64 v, u64 n) const;
};

/// ord_v(x_{mM+1} - x_1) = ord_v(x_{M+1} - x_1) + ord_v(m) for v = p and v = q.
/// Exact records where the index allows, p-adic ones always.
Report verify_xdifference(const ModelInstance& inst, const std::vector<u64>& m_values);

/// B membership by enumerating 2^n + n^2, compared with in_B for i <= limit.
Report verify_B_oracle(u64 limit);

/// For each built (i, l_i): i in B <=> q | (l_i - 1)/M <=> ord_q(x_{l_i} - x_1) > c_q.
Report verify_B_predicate(const ModelInstance& inst, const std::vector<u64>& branch);

/// ord_p(x_{l_i} - x_1) = c + i per built i, and
/// i + j = k <=> o_i + o_j = o_k + c on each triple (1-based rounds).
Report verify_addition_encoding(const ModelInstance& inst, const std::vector<u64>& branch,
                                const std::vector<std::tuple<u64, u64, u64>>& triples);

/// |x_{l_i} - x_1| decreasing and ord_v(x_{l_i} - x_1) nondecreasing (flags only),
/// plus the exact discreteness witnesses: min pairwise distance and x_1 not in A_r.
Report verify_convergence(const Curve& c, const Point& P, const std::vector<u64>& branch,
                          const std::vector<u64>& places, unsigned r = 1);

}  // namespace edsq
