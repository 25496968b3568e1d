#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>

#include "fractalmra/scalar.hpp"

namespace fractalmra {

/// Finitely supported Laurent polynomial Σ a_k z^k on the torus.
///
/// Coefficients are kept in a sorted map; exact zeros are never stored.
/// Exponents are 64-bit and every operation that grows them checks for
/// overflow.
class LaurentPolynomial {
 public:
  using Map = std::map<std::int64_t, Scalar>;

  LaurentPolynomial() = default;
  explicit LaurentPolynomial(Map coeffs);

  static LaurentPolynomial constant(const Scalar& c);
  static LaurentPolynomial monomial(std::int64_t k, const Scalar& c = Scalar(1));

  const Map& coefficients() const noexcept { return coeffs_; }
  Scalar coefficient(std::int64_t k) const;
  void set(std::int64_t k, const Scalar& c);
  void add_to(std::int64_t k, const Scalar& c);

  bool is_zero() const noexcept { return coeffs_.empty(); }
  bool is_exact() const;
  std::size_t size() const noexcept { return coeffs_.size(); }
  std::int64_t min_exponent() const;
  std::int64_t max_exponent() const;
  /// max |k| over the support; 0 for the zero polynomial.
  std::int64_t degree() const;

  std::complex<double> evaluate(std::complex<double> z) const;
  /// Value at e(θ) = exp(2πiθ).
  std::complex<double> evaluate_turns(double theta) const;

  /// Torus conjugate: Σ conj(a_k) z^{-k}.
  LaurentPolynomial conj() const;
  /// f(z^n), n ≥ 1.
  LaurentPolynomial upsample(std::int64_t n) const;
  /// Keeps exponents divisible by n and maps n·j to j, which is
  /// (1/n)Σ_{w^n = z} f(w).
  LaurentPolynomial downsample(std::int64_t n) const;
  /// z^k · f.
  LaurentPolynomial shifted(std::int64_t k) const;
  LaurentPolynomial scaled(const Scalar& c) const;

  /// Drops approximate coefficients with |a_k| ≤ tol.
  LaurentPolynomial pruned(double tol) const;

  LaurentPolynomial& operator+=(const LaurentPolynomial& o);
  LaurentPolynomial& operator-=(const LaurentPolynomial& o);
  friend LaurentPolynomial operator+(LaurentPolynomial a, const LaurentPolynomial& b) { return a += b; }
  friend LaurentPolynomial operator-(LaurentPolynomial a, const LaurentPolynomial& b) { return a -= b; }
  friend LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b);
  LaurentPolynomial operator-() const { return scaled(Scalar(-1)); }

  friend bool operator==(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    return a.coeffs_ == b.coeffs_;
  }

  /// "1/2√2 + 1/2√2 z^2" style rendering, ascending exponents.
  std::string to_string() const;

 private:
  Map coeffs_;
};

bool approx_equal(const LaurentPolynomial& a, const LaurentPolynomial& b, double tol);

/// Max coefficient modulus of a - b.
double max_abs_difference(const LaurentPolynomial& a, const LaurentPolynomial& b);

/// Checked int64 helpers; overflow raises ErrorKind::Range.
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_pow(std::int64_t base, int exp);
/// Floor modulus (result in [0, m)).
std::int64_t floor_mod(std::int64_t a, std::int64_t m);

}  // namespace fractalmra
