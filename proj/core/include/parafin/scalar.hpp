#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>

#include <gmpxx.h>

#include "parafin/errors.hpp"

namespace parafin {

/// The three coefficient rings: rationals, Gaussian rationals, rational quaternions.
enum class Ring : std::uint8_t { Rat, Gauss, Quat };

std::string ring_name(Ring r);            // "Q", "Q(i)", "H(Q)"
Ring ring_from_name(const std::string&);  // inverse of ring_name

/// An exact scalar tagged with its ring.  Components are rationals in lowest
/// terms with positive denominator (GMP canonical form): c[0] + c[1] i for
/// Gauss, c[0] + c[1] i + c[2] j + c[3] k for quaternions.  Values are
/// immutable once constructed; all operations return fresh scalars.
/// Mixed-ring arithmetic is a tag-mismatch error; use promote() to embed
/// Q into Q(i) into H(Q) explicitly.
class Scalar {
 public:
  Scalar() : ring_(Ring::Rat) {}

  static Scalar rat(const mpq_class& a);
  static Scalar rat(long num, long den = 1);
  static Scalar gauss(const mpq_class& re, const mpq_class& im);
  static Scalar quat(const mpq_class& a, const mpq_class& b, const mpq_class& c,
                     const mpq_class& d);

  static Scalar zero(Ring r);
  static Scalar one(Ring r);
  static Scalar int_in(Ring r, long v);
  static Scalar i(Ring r);  // requires Gauss or Quat
  static Scalar j();        // quaternion j
  static Scalar k();        // quaternion k

  Ring ring() const { return ring_; }
  const mpq_class& comp(int idx) const { return c_[static_cast<std::size_t>(idx)]; }

  bool is_zero() const;
  bool is_one() const;
  /// True when the value lies in the prime subfield Q (all non-real components vanish).
  bool is_rational_value() const;

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator-() const;
  Scalar operator*(const Scalar& o) const;
  /// Right division a * b^{-1}.  (Quaternion multiplication is not commutative.)
  Scalar operator/(const Scalar& o) const;

  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  Scalar conj() const;
  Scalar inverse() const;
  /// Real component as a rational.
  mpq_class real_part() const { return c_[0]; }
  /// Reduced norm a^2 + b^2 + c^2 + d^2 (= |z|^2 over Q(i), = N(q) over H(Q)).
  mpq_class norm() const;

  /// Re-tag into a larger ring (Q -> Q(i) -> H(Q)).  Shrinking tags is an error
  /// unless the value actually lies in the smaller ring.
  Scalar promote(Ring target) const;

  /// Grammar: Rat "p/q" (or "p"); Gauss "p/q+r/s i"; Quat "(a,b,c,d)".
  std::string str() const;
  static Scalar parse(const std::string& text, Ring expected);
  /// Infers the ring from the shape of the text.
  static Scalar parse(const std::string& text);

 private:
  Ring ring_;
  std::array<mpq_class, 4> c_{};  // re, i, j, k

  void require_same_ring(const Scalar& o, const char* op) const;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

}  // namespace parafin
