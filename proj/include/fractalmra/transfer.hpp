#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "fractalmra/laurent.hpp"

namespace fractalmra {

/// W(z) = |m₀(z)|²: Ŵ(k) = Σ_j conj(a_j) a_{j+k}.
LaurentPolynomial weight_from_filter(const LaurentPolynomial& m0);

/// Ruelle operator (Rf)(z) = (1/N) Σ_{w^N = z} W(w) f(w) acting on Laurent
/// polynomials through the coefficient rule (Rf)^(m) = Σ_b Ŵ(Nm − b) f̂(b).
class TransferOperator {
 public:
  TransferOperator(int scale, LaurentPolynomial weight);
  static TransferOperator from_filter(const LaurentPolynomial& m0, int scale);

  int scale() const noexcept { return scale_; }
  const LaurentPolynomial& weight() const noexcept { return weight_; }

  /// D = ceil(deg W / (N − 1)). The span of z^b, |b| ≤ D, is R-invariant:
  /// |Nm − b| ≤ deg W with |b| ≤ D forces |m| ≤ (D + deg W)/N ≤ D.
  std::int64_t block_half_width() const;

  /// R1̂ = 1̂ (exactly for exact weights, else within tol).
  bool is_normalized(double tol = 1e-10) const;

 private:
  int scale_;
  LaurentPolynomial weight_;
};

LaurentPolynomial apply_transfer(const TransferOperator& op, const LaurentPolynomial& f);

/// W⁽ⁿ⁾(z) = W(z) W(z^N) ⋯ W(z^{N^{n−1}}); throws CapExceeded when the
/// support would exceed `cap` terms.
LaurentPolynomial iterate_weight(const TransferOperator& op, int n, std::size_t cap = 2'000'000);

/// R₁ⁿ: keeps exponents divisible by Nⁿ, mapping Nⁿ j to j.
LaurentPolynomial apply_haar_average(int scale, const LaurentPolynomial& f, int n);

struct SpectralBlock {
  std::int64_t half_width = 0;  // D
  std::size_t dimension = 0;    // 2D + 1
  /// Row-major M_{m,b} = Ŵ(Nm − b), m, b ∈ [−D, D].
  std::vector<Scalar> matrix;
  /// Sorted by decreasing modulus, then by argument.
  std::vector<std::complex<double>> eigenvalues;
  std::size_t unit_multiplicity = 0;     // eigenvalues within the peripheral tolerance of 1
  bool other_peripheral = false;         // some |λ| ≥ 1 − tol with λ ≠ 1
  bool constant_fixed = false;           // M e₀ = e₀, i.e. R1̂ = 1̂ on the block
  /// dim ker(M − I) computed by exact elimination over ℚ(√d); empty when the
  /// block is not exact.
  std::optional<std::size_t> exact_fixed_dimension;

  const Scalar& at(std::size_t m, std::size_t b) const { return matrix[m * dimension + b]; }
  /// Eigenvalue 1 simple: algebraic multiplicity 1 and (when available) an
  /// exactly one-dimensional fixed space.
  bool unit_simple() const;
};

SpectralBlock spectral_block(const TransferOperator& op, std::size_t dimension_cap = 2001,
                             double peripheral_tol = 1e-9);

/// Rank of a dense square matrix over the exact tier; empty when any entry is
/// approximate or radicands mix.
std::optional<std::size_t> exact_rank(std::vector<Scalar> matrix, std::size_t rows, std::size_t cols);

}  // namespace fractalmra
