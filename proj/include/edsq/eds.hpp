#pragma once

// Division-polynomial values psi_n(A) for an integral point A, exact or modulo m.

#include <cstdint>

#include "edsq/curve.hpp"

namespace edsq {

/// psi_{n-1}, psi_n, psi_{n+1}
struct PsiTriple {
  Int prev;
  Int cur;
  Int next;
};

/// Exact values. A must be integral with y != 0, n >= 1.
PsiTriple psi_triple(const Curve& c, const Point& A, std::uint64_t n);

/// Values reduced mod m (m > 1, 2y invertible mod m). Results in [0, m).
PsiTriple psi_triple_mod(const Curve& c, const Point& A, std::uint64_t n, const Int& m);

/// x(nA) from the ladder: x - psi_{n-1} psi_{n+1} / psi_n^2.
Rat x_multiple(const Curve& c, const Point& A, std::uint64_t n);

/// ord_p(x(nA) - x(A)) for n >= 2, p prime not dividing 2y(A).
/// Works modulo p^K with K grown until every valuation is pinned down.
long padic_xdiff_order(const Curve& c, const Point& A, std::uint64_t n, const Int& p);

/// ord_p of the denominator of x(nA), for p not dividing 2y(A).
long padic_denominator_order(const Curve& c, const Point& A, std::uint64_t n, const Int& p);

}  // namespace edsq
