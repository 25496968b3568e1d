#pragma once

#include <complex>
#include <concepts>
#include <cstdint>
#include <iosfwd>
#include <string>

#include <gmpxx.h>

namespace fractalmra {

using Rational = mpq_class;

/// Exact element a + b·√d of the real quadratic field ℚ(√d), or a complex
/// double once exactness is lost.
///
/// `d` is kept squarefree; d == 1 means the value is rational (b == 0).
/// Arithmetic between exact values over different radicands, or with any
/// approximate operand, demotes the result to the approximate tier and sets
/// the `promoted` flag so callers can report it.
class Scalar {
 public:
  Scalar() = default;
  template <std::integral I>
  Scalar(I v) : a_(static_cast<long>(v)) {}  // NOLINT: integers convert implicitly to exact
  explicit Scalar(const Rational& q) : a_(q) { a_.canonicalize(); }

  static Scalar quadratic(const Rational& a, const Rational& b, std::int64_t d);
  /// 1/√n, exact.
  static Scalar inv_sqrt(std::int64_t n);
  /// √n, exact.
  static Scalar sqrt(std::int64_t n);
  static Scalar approx(std::complex<double> z);

  bool is_exact() const noexcept { return exact_; }
  bool promoted() const noexcept { return promoted_; }
  bool is_zero() const;
  bool is_rational() const { return exact_ && sgn(b_) == 0; }

  const Rational& rational_part() const { return a_; }
  const Rational& radical_part() const { return b_; }
  std::int64_t radicand() const noexcept { return d_; }

  std::complex<double> to_complex() const;
  double real() const { return to_complex().real(); }

  Scalar conj() const;
  /// |x|², exact when x is exact.
  Scalar abs2() const;
  /// Sign of an exact real value (-1, 0, 1). Approx values use the real part.
  int sign() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar x, const Scalar& y) { return x += y; }
  friend Scalar operator-(Scalar x, const Scalar& y) { return x -= y; }
  friend Scalar operator*(Scalar x, const Scalar& y) { return x *= y; }
  friend Scalar operator/(Scalar x, const Scalar& y) { return x /= y; }

  /// Structural equality: exact values compare exactly, approximate values
  /// compare their doubles bit for bit. Exact never equals approximate.
  friend bool operator==(const Scalar& x, const Scalar& y);
  friend bool operator!=(const Scalar& x, const Scalar& y) { return !(x == y); }

  /// Exact comparison for exact reals: x < y.
  friend bool operator<(const Scalar& x, const Scalar& y) { return (y - x).sign() > 0; }
  friend bool operator<=(const Scalar& x, const Scalar& y) { return (y - x).sign() >= 0; }

  /// Renders exact values as "a", "b√d" or "a+b√d"; approximate values as a
  /// decimal ("0.5") or "re+imi" when complex.
  std::string to_string() const;
  /// Inverse of to_string for the exact forms.
  static Scalar parse_exact(const std::string& text);

 private:
  void demote(std::complex<double> z);
  void normalize();

  bool exact_ = true;
  bool promoted_ = false;
  Rational a_{0};
  Rational b_{0};
  std::int64_t d_ = 1;
  std::complex<double> z_{};
};

bool approx_equal(const Scalar& x, const Scalar& y, double tol);

std::ostream& operator<<(std::ostream& os, const Scalar& s);

/// Squarefree decomposition n = s²·r; returns {s, r}.
std::pair<std::int64_t, std::int64_t> squarefree_split(std::int64_t n);

}  // namespace fractalmra
