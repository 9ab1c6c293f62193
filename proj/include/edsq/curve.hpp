#pragma once

// Short Weierstrass curves y^2 = x^3 + a4 x + a6 over Q with exact rational points.

#include <cstdint>
#include <optional>

#include "edsq/arith.hpp"

namespace edsq {

struct Curve {
  Int a4;
  Int a6;

  Curve(Int a4_, Int a6_);  // throws on a singular model

  /// -16 (4 a4^3 + 27 a6^2)
  Int discriminant() const;
  bool good_reduction(const Int& p) const;
  Rat rhs(const Rat& x) const { return x * x * x + a4 * x + a6; }

  friend bool operator==(const Curve&, const Curve&) = default;
};

class Point {
 public:
  Point() = default;  // point at infinity
  Point(Rat x, Rat y) : affine_(true), x_(std::move(x)), y_(std::move(y)) {
    x_.canonicalize();
    y_.canonicalize();
  }

  static Point infinity() { return {}; }

  bool is_infinity() const { return !affine_; }
  const Rat& x() const { return x_; }
  const Rat& y() const { return y_; }
  bool is_integral() const;

  friend bool operator==(const Point& a, const Point& b) {
    if (a.affine_ != b.affine_) return false;
    return !a.affine_ || (a.x_ == b.x_ && a.y_ == b.y_);
  }

 private:
  bool affine_ = false;
  Rat x_;
  Rat y_;
};

bool on_curve(const Curve& c, const Point& A);

Point negate(const Point& A);
Point add(const Curve& c, const Point& A, const Point& B);
Point scalar_mul(const Curve& c, const Int& n, const Point& A);
inline Point scalar_mul(const Curve& c, long n, const Point& A) { return scalar_mul(c, Int(n), A); }

struct ReducedCurveStats {
  std::uint64_t p = 0;
  bool good_reduction = false;
  std::uint64_t order = 0;  // #E(F_p); 0 when the reduction is bad
  unsigned omega = 0;       // distinct prime factors of order
};

ReducedCurveStats reduce_stats(const Curve& c, std::uint64_t p);

/// Order of A mod p. Counts points for p <= 10^4, baby-step giant-step above.
std::uint64_t point_order_mod_p(const Curve& c, const Point& A, std::uint64_t p);

/// #E(Q)_tors by Lutz-Nagell candidates and order checks.
std::uint64_t torsion_order(const Curve& c);

/// True iff nA = O for some n in {1..10, 12}.
bool is_torsion(const Curve& c, const Point& A);

struct IntegralModel {
  Curve curve;
  Point point;
  Int u;  // (x, y) -> (u^2 x, u^3 y)
};

IntegralModel integral_model(const Curve& c, const Point& A);

}  // namespace edsq
