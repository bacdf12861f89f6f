#include "parafin/scalar.hpp"

#include <ostream>
#include <sstream>

namespace parafin {

std::string ring_name(Ring r) {
  switch (r) {
    case Ring::Rat: return "Q";
    case Ring::Gauss: return "Q(i)";
    case Ring::Quat: return "H(Q)";
  }
  throw Error("ring_name: bad ring tag");
}

Ring ring_from_name(const std::string& s) {
  if (s == "Q") return Ring::Rat;
  if (s == "Q(i)") return Ring::Gauss;
  if (s == "H(Q)") return Ring::Quat;
  throw ParseError("unknown ring name: '" + s + "'");
}

namespace {

mpq_class canon(const mpq_class& q) {
  mpq_class r = q;
  r.canonicalize();
  return r;
}

// Parses "p" or "p/q" with optional leading sign.  Pure digits otherwise.
mpq_class parse_rat_component(const std::string& text) {
  std::string t;
  for (char ch : text)
    if (ch != ' ') t += ch;
  if (t.empty()) throw ParseError("empty rational literal");
  std::size_t start = 0;
  bool neg = false;
  if (t[0] == '+' || t[0] == '-') {
    neg = (t[0] == '-');
    start = 1;
  }
  std::string num, den = "1";
  std::size_t slash = t.find('/', start);
  if (slash == std::string::npos) {
    num = t.substr(start);
  } else {
    num = t.substr(start, slash - start);
    den = t.substr(slash + 1);
  }
  auto digits = [](const std::string& s) {
    if (s.empty()) return false;
    for (char ch : s)
      if (ch < '0' || ch > '9') return false;
    return true;
  };
  if (!digits(num) || !digits(den)) throw ParseError("bad rational literal: '" + text + "'");
  mpq_class q{mpz_class(num), mpz_class(den)};
  if (q.get_den() == 0) throw DivisionByZeroError("rational literal with zero denominator: '" + text + "'");
  q.canonicalize();
  return neg ? mpq_class(-q) : q;
}

std::string rat_str(const mpq_class& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace

Scalar Scalar::rat(const mpq_class& a) {
  Scalar s;
  s.ring_ = Ring::Rat;
  s.c_[0] = canon(a);
  return s;
}

Scalar Scalar::rat(long num, long den) {
  if (den == 0) throw DivisionByZeroError("Scalar::rat: zero denominator");
  return rat(mpq_class(num, den));
}

Scalar Scalar::gauss(const mpq_class& re, const mpq_class& im) {
  Scalar s;
  s.ring_ = Ring::Gauss;
  s.c_[0] = canon(re);
  s.c_[1] = canon(im);
  return s;
}

Scalar Scalar::quat(const mpq_class& a, const mpq_class& b, const mpq_class& c, const mpq_class& d) {
  Scalar s;
  s.ring_ = Ring::Quat;
  s.c_ = {canon(a), canon(b), canon(c), canon(d)};
  return s;
}

Scalar Scalar::zero(Ring r) { return int_in(r, 0); }
Scalar Scalar::one(Ring r) { return int_in(r, 1); }

Scalar Scalar::int_in(Ring r, long v) {
  Scalar s;
  s.ring_ = r;
  s.c_[0] = v;
  return s;
}

Scalar Scalar::i(Ring r) {
  if (r == Ring::Rat) throw TagMismatchError("Scalar::i: no imaginary unit in Q");
  Scalar s;
  s.ring_ = r;
  s.c_[1] = 1;
  return s;
}

Scalar Scalar::j() {
  Scalar s;
  s.ring_ = Ring::Quat;
  s.c_[2] = 1;
  return s;
}

Scalar Scalar::k() {
  Scalar s;
  s.ring_ = Ring::Quat;
  s.c_[3] = 1;
  return s;
}

bool Scalar::is_zero() const {
  for (const auto& x : c_)
    if (x != 0) return false;
  return true;
}

bool Scalar::is_one() const {
  return c_[0] == 1 && c_[1] == 0 && c_[2] == 0 && c_[3] == 0;
}

bool Scalar::is_rational_value() const { return c_[1] == 0 && c_[2] == 0 && c_[3] == 0; }

void Scalar::require_same_ring(const Scalar& o, const char* op) const {
  if (ring_ != o.ring_)
    throw TagMismatchError(std::string("scalar ") + op + ": " + ring_name(ring_) + " vs " +
                           ring_name(o.ring_));
}

Scalar Scalar::operator+(const Scalar& o) const {
  require_same_ring(o, "+");
  Scalar r;
  r.ring_ = ring_;
  for (int t = 0; t < 4; ++t) r.c_[t] = c_[t] + o.c_[t];
  return r;
}

Scalar Scalar::operator-(const Scalar& o) const {
  require_same_ring(o, "-");
  Scalar r;
  r.ring_ = ring_;
  for (int t = 0; t < 4; ++t) r.c_[t] = c_[t] - o.c_[t];
  return r;
}

Scalar Scalar::operator-() const {
  Scalar r;
  r.ring_ = ring_;
  for (int t = 0; t < 4; ++t) r.c_[t] = -c_[t];
  return r;
}

Scalar Scalar::operator*(const Scalar& o) const {
  require_same_ring(o, "*");
  Scalar r;
  r.ring_ = ring_;
  switch (ring_) {
    case Ring::Rat:
      r.c_[0] = c_[0] * o.c_[0];
      break;
    case Ring::Gauss:
      r.c_[0] = c_[0] * o.c_[0] - c_[1] * o.c_[1];
      r.c_[1] = c_[0] * o.c_[1] + c_[1] * o.c_[0];
      break;
    case Ring::Quat: {
      // Hamilton product, i j = k.
      const mpq_class &a1 = c_[0], &b1 = c_[1], &c1 = c_[2], &d1 = c_[3];
      const mpq_class &a2 = o.c_[0], &b2 = o.c_[1], &c2 = o.c_[2], &d2 = o.c_[3];
      r.c_[0] = a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2;
      r.c_[1] = a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2;
      r.c_[2] = a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2;
      r.c_[3] = a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2;
      break;
    }
  }
  return r;
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inverse(); }

bool Scalar::operator==(const Scalar& o) const {
  if (ring_ != o.ring_) return false;
  for (int t = 0; t < 4; ++t)
    if (c_[t] != o.c_[t]) return false;
  return true;
}

Scalar Scalar::conj() const {
  Scalar r;
  r.ring_ = ring_;
  r.c_[0] = c_[0];
  for (int t = 1; t < 4; ++t) r.c_[t] = -c_[t];
  return r;
}

mpq_class Scalar::norm() const {
  mpq_class n = 0;
  for (const auto& x : c_) n += x * x;
  return n;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw DivisionByZeroError("scalar inverse of zero");
  if (ring_ == Ring::Rat) return rat(mpq_class(1) / c_[0]);
  mpq_class n = norm();
  Scalar r = conj();
  for (int t = 0; t < 4; ++t) r.c_[t] = canon(r.c_[t] / n);
  return r;
}

Scalar Scalar::promote(Ring target) const {
  if (target == ring_) return *this;
  auto fits = [&](Ring small) {
    if (small == Ring::Rat) return is_rational_value();
    if (small == Ring::Gauss) return c_[2] == 0 && c_[3] == 0;
    return true;
  };
  Scalar r = *this;
  if (static_cast<int>(target) > static_cast<int>(ring_)) {
    r.ring_ = target;
    return r;
  }
  if (!fits(target))
    throw TagMismatchError("promote: value " + str() + " does not lie in " + ring_name(target));
  r.ring_ = target;
  return r;
}

std::string Scalar::str() const {
  switch (ring_) {
    case Ring::Rat:
      return rat_str(c_[0]);
    case Ring::Gauss: {
      std::string s = rat_str(c_[0]);
      s += (c_[1] >= 0 ? "+" : "-");
      s += rat_str(mpq_class(abs(c_[1])));
      s += " i";
      return s;
    }
    case Ring::Quat:
      return "(" + rat_str(c_[0]) + "," + rat_str(c_[1]) + "," + rat_str(c_[2]) + "," +
             rat_str(c_[3]) + ")";
  }
  throw Error("Scalar::str: bad ring tag");
}

Scalar Scalar::parse(const std::string& text, Ring expected) {
  Scalar s = parse(text);
  if (s.ring() != expected) {
    // A plain rational literal is accepted into any ring.
    if (s.ring() == Ring::Rat) return s.promote(expected);
    throw TagMismatchError("scalar literal '" + text + "' is " + ring_name(s.ring()) +
                           ", expected " + ring_name(expected));
  }
  return s;
}

Scalar Scalar::parse(const std::string& text) {
  std::string t;
  for (char ch : text)
    if (ch != ' ' && ch != '\t') t += ch;
  if (t.empty()) throw ParseError("empty scalar literal");

  if (t.front() == '(') {
    if (t.back() != ')') throw ParseError("unbalanced quaternion literal: '" + text + "'");
    std::string body = t.substr(1, t.size() - 2);
    std::array<std::string, 4> parts;
    int idx = 0;
    std::string cur;
    for (char ch : body) {
      if (ch == ',') {
        if (idx >= 3) throw ParseError("too many quaternion components: '" + text + "'");
        parts[static_cast<std::size_t>(idx++)] = cur;
        cur.clear();
      } else {
        cur += ch;
      }
    }
    parts[static_cast<std::size_t>(idx)] = cur;
    if (idx != 3) throw ParseError("quaternion literal needs 4 components: '" + text + "'");
    return quat(parse_rat_component(parts[0]), parse_rat_component(parts[1]),
                parse_rat_component(parts[2]), parse_rat_component(parts[3]));
  }

  if (!t.empty() && t.back() == 'i') {
    // "<re><sign><im>i" where the sign splits the two components; the re part
    // may itself start with a sign.
    std::string body = t.substr(0, t.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t p = 1; p < body.size(); ++p) {
      if (body[p] == '+' || body[p] == '-') {
        if (body[p - 1] == '/' ) continue;  // impossible in valid input, defensive
        split = p;  // keep last sign: re part cannot contain interior signs
      }
    }
    if (split == std::string::npos) {
      // pure imaginary literal like "3/4i" or "i"
      std::string im = body.empty() ? "1" : body;
      return gauss(0, parse_rat_component(im));
    }
    std::string re = body.substr(0, split);
    std::string im = body.substr(split);  // includes sign
    if (im == "+" || im == "-") im += "1";
    return gauss(parse_rat_component(re), parse_rat_component(im));
  }

  return rat(parse_rat_component(t));
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

}  // namespace parafin
