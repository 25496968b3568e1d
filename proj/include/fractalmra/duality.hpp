#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "fractalmra/ifs.hpp"

namespace fractalmra {

/// Dense complex matrix, row-major.
struct ComplexMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::complex<double>> data;

  ComplexMatrix() = default;
  ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}
  std::complex<double>& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const std::complex<double>& at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  /// max |G − I| entrywise.
  double identity_distance() const;
};

/// Candidate duality (N, S, B): M_{jk} = p^{−1/2} e(a_j b_k / N).
struct SpectralPair {
  DigitSystem system;
  std::vector<std::int64_t> dual;
  ComplexMatrix matrix;
  /// Unitarity decided exactly: every off-diagonal entry of M M* is a sum of
  /// N-th roots of unity, reduced modulo the cyclotomic polynomial Φ_N.
  bool exact_unitary = false;
  double numeric_defect = 0.0;  // max |σ_i − 1| over singular values
  /// 0 when exact_unitary, otherwise numeric_defect.
  double defect = 0.0;
  bool is_dual() const { return defect <= 1e-10; }
};

/// Throws Precondition when #B ≠ p or 0 ∉ B.
SpectralPair dual_matrix(const DigitSystem& sys, std::vector<std::int64_t> dual);

/// ζ_s^r label for the entry exponent a·b mod N ("1", "-1", "ζ3", "ζ3^2").
std::string root_of_unity_label(std::int64_t exponent, std::int64_t modulus);

struct LambdaSet {
  std::vector<std::int64_t> prefix;
  bool signed_digits = false;
  int depth = 0;  // digit positions used
};

/// First m elements of Λ_N(B) = {Σ nᵢ Nⁱ : nᵢ ∈ B, finite}. For nonnegative
/// B the prefix is exact and increasing. With negative digits only sums over
/// `signed_depth` positions are formed and ordered by (|n|, n).
LambdaSet lambda_set(const SpectralPair& pair, std::size_t count, int signed_depth = 8);

struct BCycle {
  std::vector<std::int64_t> word;  // b₁ … b_k
  std::vector<Rational> points;    // ξ₁ … ξ_k
  std::vector<double> weight_values;  // |m₀(e(ξᵢ))|²
  bool trivial() const;               // the singleton ξ = 0
};

struct BCycleReport {
  int max_length = 0;
  std::vector<BCycle> cycles;
  bool trivial_only() const;
};

/// Words of length ≤ K over B (primitive, one per rotation class); ξ₁ is
/// (N^{k−1}b₁ + … + b_k)/(N^k − 1) and ξ_{i+1} = Nξᵢ − bᵢ. A word is kept when
/// |m₀(e(ξᵢ))|² = p within tol at every point.
BCycleReport b_cycles(const SpectralPair& pair, int max_length, double tol = 1e-9, std::size_t cap = 1'000'000);

struct OnbPartialSums {
  std::vector<std::int64_t> lambda;
  std::vector<double> terms;  // |B(ξ − n)|²
  std::vector<double> partial;
  bool monotone = true;
  double max_partial = 0.0;
};

OnbPartialSums onb_defect(const SpectralPair& pair, double xi, std::size_t count, int depth = 40);

/// G_{ij} = B(n_j − n_i) on (C, μ).
ComplexMatrix exponential_gram(const DigitSystem& sys, const std::vector<std::int64_t>& exponents, int depth = 40);

/// Three indices whose Gram entries pairwise have modulus ≤ tol.
std::optional<std::array<std::size_t, 3>> find_orthogonal_triple(const ComplexMatrix& gram, double tol);

/// (R_B f)(ξ) = (1/p) Σ_b |m₀((ξ − b)/N)|² f((ξ − b)/N), iterated n ≤ 12 times by
/// expanding every branch.
double dual_transfer_eval(const SpectralPair& pair, const std::function<double(double)>& f, double xi, int n);

/// Ω_D(ξ) = Σ_{n ∈ Λ_D} |B(ξ − n)|² over the pᴰ elements with at most D base-N
/// digits. R_B Ω_D = Ω_{D+1}, so Ω_D approaches an R_B-fixed function.
double omega(const SpectralPair& pair, double xi, int digits, int depth = 40);

}  // namespace fractalmra
