#include "edsq/curve.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "edsq/error.hpp"

namespace edsq {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr u64 kCountingLimit = 10'000;

// Arithmetic on E(F_p) for word-size p.
struct FpCurve {
  u64 p, a, b;

  u64 mul(u64 x, u64 y) const { return static_cast<u64>(static_cast<u128>(x) * y % p); }
  u64 addm(u64 x, u64 y) const {
    u64 s = x + y;
    return s >= p ? s - p : s;
  }
  u64 subm(u64 x, u64 y) const { return x >= y ? x - y : x + p - y; }
  u64 pow(u64 x, u64 e) const {
    u64 r = 1 % p;
    while (e) {
      if (e & 1) r = mul(r, x);
      x = mul(x, x);
      e >>= 1;
    }
    return r;
  }
  u64 inv(u64 x) const { return pow(x, p - 2); }
};

struct FpPoint {
  bool inf = true;
  u64 x = 0, y = 0;
  bool operator==(const FpPoint&) const = default;
};

FpPoint fp_add(const FpCurve& E, const FpPoint& P, const FpPoint& Q) {
  if (P.inf) return Q;
  if (Q.inf) return P;
  u64 lambda;
  if (P.x == Q.x) {
    if (E.addm(P.y, Q.y) == 0) return {};
    u64 num = E.addm(E.mul(3, E.mul(P.x, P.x)), E.a);
    lambda = E.mul(num, E.inv(E.mul(2, P.y)));
  } else {
    lambda = E.mul(E.subm(Q.y, P.y), E.inv(E.subm(Q.x, P.x)));
  }
  FpPoint R;
  R.inf = false;
  R.x = E.subm(E.subm(E.mul(lambda, lambda), P.x), Q.x);
  R.y = E.subm(E.mul(lambda, E.subm(P.x, R.x)), P.y);
  return R;
}

FpPoint fp_mul(const FpCurve& E, u64 n, FpPoint P) {
  FpPoint R;
  while (n) {
    if (n & 1) R = fp_add(E, R, P);
    P = fp_add(E, P, P);
    n >>= 1;
  }
  return R;
}

u64 mod_u64(const Int& v, u64 p) {
  Int r = v % to_int(p);
  if (r < 0) r += to_int(p);
  return to_u64(r);
}

FpCurve reduce_curve(const Curve& c, u64 p) { return {p, mod_u64(c.a4, p), mod_u64(c.a6, p)}; }

FpPoint reduce_point(const Point& A, u64 p) {
  if (A.is_infinity()) return {};
  const Int P = to_int(p);
  return {false, to_u64(rat_mod(A.x(), P)), to_u64(rat_mod(A.y(), P))};
}

// Reduces a known multiple of the order of A down to the exact order.
u64 order_from_multiple(const FpCurve& E, const FpPoint& A, u64 multiple) {
  u64 order = multiple;
  for (const auto& f : factor_u64(multiple).factors) {
    const u64 q = to_u64(f.prime);
    for (unsigned i = 0; i < f.exponent; ++i) {
      if (fp_mul(E, order / q, A).inf) {
        order /= q;
      } else {
        break;
      }
    }
  }
  return order;
}

u64 count_points(const FpCurve& E) {
  const u64 p = E.p;
  std::vector<std::uint8_t> is_square(p, 0);
  for (u64 y = 0; y < p; ++y) is_square[E.mul(y, y)] = 1;
  u64 count = 1;
  for (u64 x = 0; x < p; ++x) {
    u64 rhs = E.addm(E.addm(E.mul(E.mul(x, x), x), E.mul(E.a, x)), E.b);
    if (rhs == 0) {
      count += 1;
    } else if (is_square[rhs]) {
      count += 2;
    }
  }
  return count;
}

// Finds some positive m with mA = O inside the Hasse window.
u64 bsgs_multiple(const FpCurve& E, const FpPoint& A) {
  const u64 p = E.p;
  const u64 root = static_cast<u64>(std::sqrt(static_cast<long double>(p)));
  const u64 span = 4 * (root + 1);
  const u64 low = p + 1 - std::min<u64>(p, 2 * (root + 1));
  const u64 steps = static_cast<u64>(std::ceil(std::sqrt(static_cast<long double>(span)))) + 1;

  std::unordered_map<u64, std::pair<u64, u64>> baby;  // x -> (j, y)
  FpPoint jA;
  for (u64 j = 1; j <= steps; ++j) {
    jA = fp_add(E, jA, A);
    if (jA.inf) return j;
    auto [it, fresh] = baby.try_emplace(jA.x, j, jA.y);
    if (!fresh) {
      const auto [j0, y0] = it->second;
      return y0 == jA.y ? j - j0 : j + j0;
    }
  }
  const FpPoint giant = fp_mul(E, steps, A);
  FpPoint R = fp_mul(E, low, A);
  for (u64 k = 0; k <= span / steps + 2; ++k) {
    const u64 base = low + k * steps;
    if (R.inf) return base;
    auto it = baby.find(R.x);
    if (it != baby.end()) {
      const auto [j, y] = it->second;
      if (y == R.y) {
        if (base > j) return base - j;
      } else {
        return base + j;
      }
    }
    R = fp_add(E, R, giant);
  }
  fail_argument("point_order_mod_p: baby-step giant-step found no multiple");
}

// Integer roots of x^3 + a x + c on a monotone interval [lo, hi].
void roots_on_monotone(const Int& a, const Int& c, Int lo, Int hi, std::vector<Int>& out) {
  auto f = [&](const Int& x) -> Int { return x * x * x + a * x + c; };
  if (lo > hi) return;
  Int flo = f(lo), fhi = f(hi);
  if (flo == 0) out.push_back(lo);
  if (fhi == 0 && hi != lo) out.push_back(hi);
  const bool increasing = flo <= fhi;
  if (sgn(flo) * sgn(fhi) >= 0) return;
  while (hi - lo > 1) {
    Int mid = (lo + hi) / 2;
    Int fm = f(mid);
    if (fm == 0) {
      out.push_back(mid);
      return;
    }
    if ((fm < 0) == increasing) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
}

std::vector<Int> integer_roots(const Int& a, const Int& c) {
  const Int bound = 1 + std::max(abs(a), abs(c));
  std::vector<Int> out;
  if (a >= 0) {
    roots_on_monotone(a, c, -bound, bound, out);
  } else {
    Int r = sqrt(Int(-a / 3));
    while ((r + 1) * (r + 1) * 3 <= -a) ++r;
    roots_on_monotone(a, c, -bound, -r - 1, out);
    roots_on_monotone(a, c, -r, r, out);
    roots_on_monotone(a, c, r + 1, bound, out);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

Curve::Curve(Int a4_, Int a6_) : a4(std::move(a4_)), a6(std::move(a6_)) {
  if (discriminant() == 0) fail_argument("singular curve: discriminant is zero");
}

Int Curve::discriminant() const { return -16 * (4 * a4 * a4 * a4 + 27 * a6 * a6); }

bool Curve::good_reduction(const Int& p) const { return discriminant() % p != 0; }

bool Point::is_integral() const {
  return !affine_ || (x_.get_den() == 1 && y_.get_den() == 1);
}

bool on_curve(const Curve& c, const Point& A) {
  return A.is_infinity() || A.y() * A.y() == c.rhs(A.x());
}

Point negate(const Point& A) {
  if (A.is_infinity()) return A;
  return Point(A.x(), -A.y());
}

namespace {

Point add_unchecked(const Curve& c, const Point& A, const Point& B) {
  if (A.is_infinity()) return B;
  if (B.is_infinity()) return A;
  Rat lambda;
  if (A.x() == B.x()) {
    if (A.y() + B.y() == 0) return Point::infinity();
    lambda = (3 * A.x() * A.x() + c.a4) / (2 * A.y());
  } else {
    lambda = (B.y() - A.y()) / (B.x() - A.x());
  }
  Rat x3 = lambda * lambda - A.x() - B.x();
  Rat y3 = lambda * (A.x() - x3) - A.y();
  return Point(std::move(x3), std::move(y3));
}

}  // namespace

Point add(const Curve& c, const Point& A, const Point& B) {
  if (!on_curve(c, A) || !on_curve(c, B)) fail_argument("add: point not on curve");
  return add_unchecked(c, A, B);
}

Point scalar_mul(const Curve& c, const Int& n, const Point& A) {
  if (!on_curve(c, A)) fail_argument("scalar_mul: point not on curve");
  if (n < 0) return negate(scalar_mul(c, Int(-n), A));
  Point result;
  Point base = A;
  const std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    result = add_unchecked(c, result, result);
    if (mpz_tstbit(n.get_mpz_t(), i)) result = add_unchecked(c, result, base);
  }
  return result;
}

ReducedCurveStats reduce_stats(const Curve& c, std::uint64_t p) {
  if (!is_prime_u64(p)) fail_argument("reduce_stats: p must be prime");
  ReducedCurveStats s;
  s.p = p;
  s.good_reduction = c.good_reduction(to_int(p));
  if (!s.good_reduction) return s;
  s.order = count_points(reduce_curve(c, p));
  s.omega = static_cast<unsigned>(factor_u64(s.order).factors.size());
  return s;
}

std::uint64_t point_order_mod_p(const Curve& c, const Point& A, std::uint64_t p) {
  if (A.is_infinity()) return 1;
  if (!is_prime_u64(p)) fail_argument("point_order_mod_p: p must be prime");
  if (!c.good_reduction(to_int(p))) fail_argument("point_order_mod_p: bad reduction at " + std::to_string(p));
  const Int P = to_int(p);
  if (A.x().get_den() % P == 0 || A.y().get_den() % P == 0) {
    fail_argument("point_order_mod_p: p divides a denominator of the point");
  }
  const FpCurve E = reduce_curve(c, p);
  const FpPoint Ap = reduce_point(A, p);
  const u64 multiple = p <= kCountingLimit ? count_points(E) : bsgs_multiple(E, Ap);
  return order_from_multiple(E, Ap, multiple);
}

bool is_torsion(const Curve& c, const Point& A) {
  if (!on_curve(c, A)) fail_argument("is_torsion: point not on curve");
  Point R;
  for (int n = 1; n <= 12; ++n) {
    R = add_unchecked(c, R, A);
    if (R.is_infinity()) return n != 11;
    // Nagell-Lutz: nonzero torsion points of an integral model are integral.
    if (!R.is_integral()) return false;
  }
  return false;
}

std::uint64_t torsion_order(const Curve& c) {
  const Int D = abs(4 * c.a4 * c.a4 * c.a4 + 27 * c.a6 * c.a6);
  const auto fac = factor(D);
  if (!fac.complete) fail_budget("torsion_order: could not factor 4a^3 + 27b^2");

  std::vector<Int> ys{Int(0)};
  std::vector<Int> partial{Int(1)};
  for (const auto& f : fac.factors) {
    std::vector<Int> next;
    for (const auto& y : partial) {
      Int pe = 1;
      for (unsigned e = 0; 2 * e <= f.exponent; ++e) {
        next.push_back(y * pe);
        pe *= f.prime;
      }
    }
    partial = std::move(next);
  }
  for (const auto& y : partial) {
    ys.push_back(y);
    ys.push_back(-y);
  }

  std::uint64_t count = 1;
  for (const auto& y : ys) {
    for (const auto& x : integer_roots(c.a4, c.a6 - y * y)) {
      Point cand{Rat(x), Rat(y)};
      if (is_torsion(c, cand)) ++count;
    }
  }
  return count;
}

IntegralModel integral_model(const Curve& c, const Point& A) {
  if (A.is_infinity()) fail_argument("integral_model: point must be affine");
  if (!on_curve(c, A)) fail_argument("integral_model: point not on curve");
  // On an integral model, den(x) = e^2 and den(y) = e^3.
  Int e;
  if (!mpz_root(e.get_mpz_t(), A.x().get_den().get_mpz_t(), 2)) {
    fail_argument("integral_model: x denominator is not a square");
  }
  const Int u = e;
  const Int u2 = u * u, u3 = u2 * u;
  Curve scaled(c.a4 * u2 * u2, c.a6 * u3 * u3);
  Point moved(A.x() * Rat(u2), A.y() * Rat(u3));
  return {std::move(scaled), std::move(moved), u};
}

}  // namespace edsq
