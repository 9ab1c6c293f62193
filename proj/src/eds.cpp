#include "edsq/eds.hpp"

#include <array>

#include "edsq/error.hpp"

namespace edsq {

namespace {

// psi_{k-3} .. psi_{k+4}
using Window = std::array<Int, 8>;

struct Ladder {
  Int two_y;
  bool modular = false;
  Int m;
  Int inv_two_y;

  void reduce(Int& v) const {
    if (!modular) return;
    mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
  }

  // psi_{2j} from psi_{j-2} .. psi_{j+2}
  Int even(const Int& jm2, const Int& jm1, const Int& j0, const Int& jp1, const Int& jp2) const {
    Int t = jp2 * jm1 * jm1 - jm2 * jp1 * jp1;
    reduce(t);
    t *= j0;
    if (modular) {
      reduce(t);
      t *= inv_two_y;
      reduce(t);
    } else {
      mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), two_y.get_mpz_t());
    }
    return t;
  }

  // psi_{2j+1} from psi_{j-1} .. psi_{j+2}
  Int odd(const Int& jm1, const Int& j0, const Int& jp1, const Int& jp2) const {
    Int a = j0 * j0;
    reduce(a);
    a *= j0;
    reduce(a);
    a *= jp2;
    Int b = jp1 * jp1;
    reduce(b);
    b *= jp1;
    reduce(b);
    b *= jm1;
    Int t = a - b;
    reduce(t);
    return t;
  }
};

Window initial_window(const Curve& c, const Point& A, const Ladder& L) {
  const Int x = A.x().get_num();
  const Int y = A.y().get_num();
  const Int& a = c.a4;
  const Int& b = c.a6;
  const Int x2 = x * x;
  Int psi2 = 2 * y;
  Int psi3 = 3 * x2 * x2 + 6 * a * x2 + 12 * b * x - a * a;
  Int psi4 = 4 * y * (x2 * x2 * x2 + 5 * a * x2 * x2 + 20 * b * x2 * x - 5 * a * a * x2 - 4 * a * b * x -
                      8 * b * b - a * a * a);
  Int psi5 = psi4 * psi2 * psi2 * psi2 - psi3 * psi3 * psi3;
  Window w{-psi2, Int(-1), Int(0), Int(1), psi2, psi3, psi4, psi5};
  for (auto& v : w) L.reduce(v);
  return w;
}

Window step(const Window& w, bool bit, const Ladder& L) {
  // out[s+3] = psi_{2k+s}, s = -3..5
  std::array<Int, 9> out;
  for (int s = -3; s <= 5; ++s) {
    if (s % 2 == 0) {
      const int o = s / 2;
      out[s + 3] = L.even(w[o + 1], w[o + 2], w[o + 3], w[o + 4], w[o + 5]);
    } else {
      const int o = (s - 1) / 2;
      out[s + 3] = L.odd(w[o + 2], w[o + 3], w[o + 4], w[o + 5]);
    }
  }
  Window nw;
  const int shift = bit ? 1 : 0;
  for (int i = 0; i < 8; ++i) nw[i] = std::move(out[i + shift]);
  return nw;
}

PsiTriple run(const Curve& c, const Point& A, std::uint64_t n, const Ladder& L) {
  if (n == 0) fail_argument("psi ladder: n must be >= 1");
  Window w = initial_window(c, A, L);
  int top = 63;
  while (!((n >> top) & 1)) --top;
  for (int i = top - 1; i >= 0; --i) w = step(w, (n >> i) & 1, L);
  return {w[2], w[3], w[4]};
}

void check_point(const Point& A) {
  if (A.is_infinity() || !A.is_integral()) fail_argument("psi ladder: point must be affine and integral");
  if (A.y() == 0) fail_argument("psi ladder: point has y = 0");
}

}  // namespace

PsiTriple psi_triple(const Curve& c, const Point& A, std::uint64_t n) {
  check_point(A);
  Ladder L;
  L.two_y = 2 * A.y().get_num();
  return run(c, A, n, L);
}

PsiTriple psi_triple_mod(const Curve& c, const Point& A, std::uint64_t n, const Int& m) {
  check_point(A);
  if (m < 2) fail_argument("psi ladder: modulus must be > 1");
  Ladder L;
  L.two_y = 2 * A.y().get_num();
  L.modular = true;
  L.m = m;
  if (mpz_invert(L.inv_two_y.get_mpz_t(), L.two_y.get_mpz_t(), m.get_mpz_t()) == 0) {
    fail_argument("psi ladder: 2y not invertible modulo " + m.get_str());
  }
  return run(c, A, n, L);
}

Rat x_multiple(const Curve& c, const Point& A, std::uint64_t n) {
  const PsiTriple t = psi_triple(c, A, n);
  if (t.cur == 0) fail_argument("x_multiple: nA is the point at infinity");
  const Int den = t.cur * t.cur;
  Rat r(A.x().get_num() * den - t.prev * t.next, den);
  r.canonicalize();
  return r;
}

long padic_xdiff_order(const Curve& c, const Point& A, std::uint64_t n, const Int& p) {
  if (n < 2) fail_argument("padic_xdiff_order: n must be >= 2");
  check_point(A);
  if ((2 * A.y().get_num()) % p == 0) fail_argument("padic_xdiff_order: p divides 2y");
  // x_n - x_1 = -psi_{n-1} psi_{n+1} / psi_n^2
  for (unsigned long K = 64;; K *= 2) {
    Int m;
    mpz_pow_ui(m.get_mpz_t(), p.get_mpz_t(), K);
    const PsiTriple t = psi_triple_mod(c, A, n, m);
    if (t.prev == 0 || t.cur == 0 || t.next == 0) {
      if (K > (1ul << 20)) fail_budget("padic_xdiff_order: valuation exceeds precision cap");
      continue;
    }
    auto v = [&](const Int& val) { return ord_at(p, val); };
    return v(t.prev) + v(t.next) - 2 * v(t.cur);
  }
}

long padic_denominator_order(const Curve& c, const Point& A, std::uint64_t n, const Int& p) {
  if (n < 1) fail_argument("padic_denominator_order: n must be >= 1");
  check_point(A);
  if ((2 * A.y().get_num()) % p == 0) fail_argument("padic_denominator_order: p divides 2y");
  // x_n = (x psi_n^2 - psi_{n-1} psi_{n+1}) / psi_n^2
  for (unsigned long K = 64;; K *= 2) {
    Int m;
    mpz_pow_ui(m.get_mpz_t(), p.get_mpz_t(), K);
    const PsiTriple t = psi_triple_mod(c, A, n, m);
    Int num = A.x().get_num() * t.cur * t.cur - t.prev * t.next;
    mpz_fdiv_r(num.get_mpz_t(), num.get_mpz_t(), m.get_mpz_t());
    // num == 0 mod p^K with 2 v(psi_n) <= K: x_n is p-integral
    if (t.cur != 0 && num == 0 && 2 * ord_at(p, t.cur) <= static_cast<long>(K)) return 0;
    if (t.cur == 0 || num == 0) {
      if (K > (1ul << 20)) fail_budget("padic_denominator_order: valuation exceeds precision cap");
      continue;
    }
    const long v = 2 * ord_at(p, t.cur) - ord_at(p, num);
    return v > 0 ? v : 0;
  }
}

}  // namespace edsq
