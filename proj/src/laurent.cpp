#include "fractalmra/laurent.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fractalmra/error.hpp"

namespace fractalmra {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorKind::Range, "exponent overflow in multiplication");
  return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorKind::Range, "exponent overflow in addition");
  return r;
}

std::int64_t checked_pow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

LaurentPolynomial::LaurentPolynomial(Map coeffs) {
  for (auto& [k, c] : coeffs)
    if (!c.is_zero()) coeffs_.emplace(k, std::move(c));
}

LaurentPolynomial LaurentPolynomial::constant(const Scalar& c) { return monomial(0, c); }

LaurentPolynomial LaurentPolynomial::monomial(std::int64_t k, const Scalar& c) {
  LaurentPolynomial p;
  p.set(k, c);
  return p;
}

Scalar LaurentPolynomial::coefficient(std::int64_t k) const {
  auto it = coeffs_.find(k);
  return it == coeffs_.end() ? Scalar(0) : it->second;
}

void LaurentPolynomial::set(std::int64_t k, const Scalar& c) {
  if (c.is_zero())
    coeffs_.erase(k);
  else
    coeffs_[k] = c;
}

void LaurentPolynomial::add_to(std::int64_t k, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = coeffs_.try_emplace(k, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) coeffs_.erase(it);
}

bool LaurentPolynomial::is_exact() const {
  for (const auto& [k, c] : coeffs_)
    if (!c.is_exact()) return false;
  return true;
}

std::int64_t LaurentPolynomial::min_exponent() const { return coeffs_.empty() ? 0 : coeffs_.begin()->first; }
std::int64_t LaurentPolynomial::max_exponent() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }

std::int64_t LaurentPolynomial::degree() const {
  if (coeffs_.empty()) return 0;
  return std::max(std::abs(min_exponent()), std::abs(max_exponent()));
}

std::complex<double> LaurentPolynomial::evaluate(std::complex<double> z) const {
  std::complex<double> acc{};
  for (const auto& [k, c] : coeffs_) acc += c.to_complex() * std::pow(z, static_cast<double>(k));
  return acc;
}

std::complex<double> LaurentPolynomial::evaluate_turns(double theta) const {
  std::complex<double> acc{};
  for (const auto& [k, c] : coeffs_) {
    double x = static_cast<double>(k) * theta;
    x -= std::round(x);
    double ang = 2.0 * std::numbers::pi * x;
    acc += c.to_complex() * std::complex<double>(std::cos(ang), std::sin(ang));
  }
  return acc;
}

LaurentPolynomial LaurentPolynomial::conj() const {
  LaurentPolynomial r;
  for (const auto& [k, c] : coeffs_) r.coeffs_.emplace(-k, c.conj());
  return r;
}

LaurentPolynomial LaurentPolynomial::upsample(std::int64_t n) const {
  if (n < 1) throw Error(ErrorKind::Range, "upsample factor must be >= 1");
  LaurentPolynomial r;
  for (const auto& [k, c] : coeffs_) r.coeffs_.emplace(checked_mul(k, n), c);
  return r;
}

LaurentPolynomial LaurentPolynomial::downsample(std::int64_t n) const {
  if (n < 1) throw Error(ErrorKind::Range, "downsample factor must be >= 1");
  LaurentPolynomial r;
  for (const auto& [k, c] : coeffs_)
    if (k % n == 0) r.coeffs_.emplace(k / n, c);
  return r;
}

LaurentPolynomial LaurentPolynomial::shifted(std::int64_t k) const {
  LaurentPolynomial r;
  for (const auto& [e, c] : coeffs_) r.coeffs_.emplace(checked_add(e, k), c);
  return r;
}

LaurentPolynomial LaurentPolynomial::scaled(const Scalar& s) const {
  LaurentPolynomial r;
  for (const auto& [k, c] : coeffs_) r.set(k, c * s);
  return r;
}

LaurentPolynomial LaurentPolynomial::pruned(double tol) const {
  LaurentPolynomial r;
  for (const auto& [k, c] : coeffs_)
    if (c.is_exact() || std::abs(c.to_complex()) > tol) r.coeffs_.emplace(k, c);
  return r;
}

LaurentPolynomial& LaurentPolynomial::operator+=(const LaurentPolynomial& o) {
  for (const auto& [k, c] : o.coeffs_) add_to(k, c);
  return *this;
}

LaurentPolynomial& LaurentPolynomial::operator-=(const LaurentPolynomial& o) {
  for (const auto& [k, c] : o.coeffs_) add_to(k, -c);
  return *this;
}

LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b) {
  LaurentPolynomial r;
  for (const auto& [i, x] : a.coeffs_)
    for (const auto& [j, y] : b.coeffs_) r.add_to(checked_add(i, j), x * y);
  return r;
}

std::string LaurentPolynomial::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : coeffs_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.to_string() << ")";
    if (k != 0) os << "z^" << k;
  }
  return os.str();
}

double max_abs_difference(const LaurentPolynomial& a, const LaurentPolynomial& b) {
  double m = 0.0;
  LaurentPolynomial d = a - b;
  for (const auto& [k, c] : d.coefficients()) m = std::max(m, std::abs(c.to_complex()));
  return m;
}

bool approx_equal(const LaurentPolynomial& a, const LaurentPolynomial& b, double tol) {
  return max_abs_difference(a, b) <= tol;
}

}  // namespace fractalmra
