#pragma once

// Exact scalar arithmetic over Q and Q(i).
//
// A Scalar is a Gaussian rational re + im*i with arbitrary-precision
// rational components (GMP mpq, always kept canonical: reduced, positive
// denominator). Elements of a Q-structure simply keep im == 0.

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace jtk {

enum class Field { Q, Qi };

std::string field_name(Field f);

struct Scalar {
  mpq_class re;
  mpq_class im;

  Scalar() : re(0), im(0) {}
  Scalar(long r) : re(r), im(0) {}
  Scalar(long num, long den) : re(num, den), im(0) { re.canonicalize(); }
  Scalar(const mpq_class& r) : re(r), im(0) {}
  Scalar(const mpq_class& r, const mpq_class& i) : re(r), im(i) {}

  static Scalar i() { return Scalar(mpq_class(0), mpq_class(1)); }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }
  bool is_one() const { return re == 1 && im == 0; }

  Scalar conj() const { return Scalar(re, -im); }

  Scalar operator-() const { return Scalar(-re, -im); }

  Scalar& operator+=(const Scalar& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Scalar& operator*=(const Scalar& o) {
    if (im == 0 && o.im == 0) {
      re *= o.re;
      return *this;
    }
    mpq_class r = re * o.re - im * o.im;
    mpq_class i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }

  Scalar inverse() const;
  friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }
  Scalar& operator/=(const Scalar& b) { return *this = *this * b.inverse(); }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  // Exact text form "n/d" or "n/d+n/di" / "n/d-n/di"; used by the serializer
  // and the CLI, so it must stay stable.
  std::string str() const;

  // Serializer form: the two components as "num/den num/den".
  std::string pair_str() const;
};

// Parses "num/den" (den optional). Throws std::runtime_error on bad input.
mpq_class parse_rational(const std::string& text);

}  // namespace jtk
