#pragma once

// Seeded generators and brute-force oracles shared by the unit and
// acceptance tests. Nothing here calls into the library's algorithms beyond
// its value types.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <vector>

#include "fractalmra/ifs.hpp"
#include "fractalmra/lattice.hpp"
#include "fractalmra/laurent.hpp"
#include "fractalmra/scalar.hpp"

namespace testsupport {

using cplx = std::complex<double>;
using fractalmra::LaurentPolynomial;
using fractalmra::Rational;
using fractalmra::Scalar;

// SplitMix64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  // Uniform integer in [lo, hi].
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double uniform(double lo = 0.0, double hi = 1.0) {
    return lo + (hi - lo) * static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

inline Rational small_rational(Rng& rng, int bound = 5) {
  Rational q(rng.range(-bound, bound), rng.range(1, bound));
  q.canonicalize();
  return q;
}

// a + b√d with small rationals; b = 0 when d == 1.
inline Scalar random_exact(Rng& rng, std::int64_t d) {
  if (d == 1) return Scalar(small_rational(rng));
  return Scalar::quadratic(small_rational(rng), small_rational(rng), d);
}

inline LaurentPolynomial random_poly(Rng& rng, int terms, std::int64_t span, std::int64_t d) {
  LaurentPolynomial p;
  for (int i = 0; i < terms; ++i) p.add_to(rng.range(-span, span), random_exact(rng, d));
  return p;
}

inline fractalmra::LatticeVector random_vector(Rng& rng, const fractalmra::DigitSystem& sys, std::int64_t res_lo,
                                               std::int64_t res_hi, int terms, std::int64_t span) {
  fractalmra::LatticeVector v(sys, rng.range(res_lo, res_hi));
  for (int i = 0; i < terms; ++i) {
    Scalar c = random_exact(rng, 2);
    if (!c.is_zero()) v.add(rng.range(-span, span), c);
  }
  return v;
}

inline cplx e_turns(double x) { return std::polar(1.0, 2.0 * std::numbers::pi * x); }

// Direct evaluation Σ a_k z^k from the coefficient map.
inline cplx eval(const LaurentPolynomial& p, cplx z) {
  cplx s = 0.0;
  for (const auto& [k, c] : p.coefficients()) s += c.to_complex() * std::pow(z, static_cast<double>(k));
  return s;
}

// (1/N) Σ_{w^N = z} W(w) f(w), with z = e(θ).
inline cplx transfer_by_roots(const LaurentPolynomial& w, const LaurentPolynomial& f, int n, double theta) {
  cplx s = 0.0;
  for (int r = 0; r < n; ++r) {
    cplx root = e_turns((theta + r) / n);
    s += eval(w, root) * eval(f, root);
  }
  return s / static_cast<double>(n);
}

// Coefficients of Π_{j<n} W(z^{N^j}) by repeated dense convolution over
// exact rationals. W must have rational coefficients.
inline std::map<std::int64_t, Rational> product_expansion(const std::map<std::int64_t, Rational>& w, int scale,
                                                          int n) {
  std::map<std::int64_t, Rational> acc{{0, Rational(1)}};
  std::int64_t step = 1;
  for (int j = 0; j < n; ++j) {
    std::map<std::int64_t, Rational> next;
    for (const auto& [a, ca] : acc)
      for (const auto& [b, cb] : w) next[a + b * step] += ca * cb;
    acc.clear();
    for (auto& [k, c] : next)
      if (c != 0) acc[k] = c;
    step *= scale;
  }
  return acc;
}

// Cantor-3 weight ½z⁻² + 1 + ½z².
inline std::map<std::int64_t, Rational> cantor3_weight() {
  return {{-2, Rational(1, 2)}, {0, Rational(1)}, {2, Rational(1, 2)}};
}

// Cantor-3 moments from the product expansion at iterate n.
inline Rational cantor3_moment_oracle(std::int64_t m, int n = 8) {
  static std::map<int, std::map<std::int64_t, Rational>> cache;
  auto& e = cache[n];
  if (e.empty()) e = product_expansion(cantor3_weight(), 3, n);
  auto it = e.find(-m);
  return it == e.end() ? Rational(0) : it->second;
}

// Λ membership by peeling base-N digits: n ∈ Λ iff every digit lies in B.
inline bool in_lambda(std::int64_t n, std::int64_t scale, const std::vector<std::int64_t>& b) {
  if (n < 0) return false;
  while (n > 0) {
    std::int64_t d = n % scale;
    bool ok = false;
    for (auto x : b) ok |= x == d;
    if (!ok) return false;
    n /= scale;
  }
  return true;
}

// Truncated Hutchinson product evaluated directly from the definition.
inline cplx hutchinson_oracle(const std::vector<int>& digits, int scale, double k, int depth) {
  cplx prod = 1.0;
  double scale_pow = 1.0;
  for (int j = 1; j <= depth; ++j) {
    scale_pow *= scale;
    cplx s = 0.0;
    for (int a : digits) s += std::exp(cplx(0.0, 2.0 * std::numbers::pi * a * k / scale_pow));
    prod *= s / static_cast<double>(digits.size());
  }
  return prod;
}

}  // namespace testsupport
