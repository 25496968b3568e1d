#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fractalmra/filterbank.hpp"
#include "fractalmra/ifs.hpp"
#include "fractalmra/laurent.hpp"

namespace fractalmra {

using LatticeIndex = __int128;

std::string index_to_string(LatticeIndex k);

/// Σ_k c_k · U⁻ⁿ Tᵏ φ over the orthonormal family at resolution n, φ = χ_C.
class LatticeVector {
 public:
  using Map = std::map<LatticeIndex, Scalar>;

  LatticeVector(DigitSystem sys, std::int64_t resolution);
  LatticeVector(DigitSystem sys, std::int64_t resolution, Map entries);

  const DigitSystem& system() const noexcept { return sys_; }
  std::int64_t resolution() const noexcept { return res_; }
  const Map& entries() const noexcept { return entries_; }

  Scalar coefficient(LatticeIndex k) const;
  void add(LatticeIndex k, const Scalar& c);
  bool is_zero() const noexcept { return entries_.empty(); }
  bool is_exact() const;
  std::size_t size() const noexcept { return entries_.size(); }
  /// Σ |c_k|² (exact for exact vectors).
  Scalar norm2() const;

  LatticeVector& operator+=(const LatticeVector& o);
  LatticeVector& operator-=(const LatticeVector& o);
  friend LatticeVector operator+(LatticeVector a, const LatticeVector& b) { return a += b; }
  friend LatticeVector operator-(LatticeVector a, const LatticeVector& b) { return a -= b; }
  LatticeVector scaled(const Scalar& c) const;

  /// Representation equality (same resolution, same coefficients).
  friend bool operator==(const LatticeVector& a, const LatticeVector& b) {
    return a.sys_ == b.sys_ && a.res_ == b.res_ && a.entries_ == b.entries_;
  }

 private:
  DigitSystem sys_;
  std::int64_t res_;
  Map entries_;
};

/// Unit vector U⁻ⁿ Tᵏ φ.
LatticeVector basis_delta(const DigitSystem& sys, std::int64_t n, LatticeIndex k);

/// Same vector at resolution m ≥ resolution(v) via
/// U⁻ⁿTᵏφ = p^{−1/2} Σ_{a∈S} U^{−(n+1)} T^{Nk+a} φ. Coarsening throws.
LatticeVector refine_to(const LatticeVector& v, std::int64_t m);

/// True when both vectors agree after refinement to a common resolution.
bool same_vector(const LatticeVector& v, const LatticeVector& w);

/// ⟨v | w⟩, conjugate-linear in v.
Scalar inner(const LatticeVector& v, const LatticeVector& w);

/// Tᵏ v. At resolution n ≥ 0 indices move by k·Nⁿ; at negative resolution
/// the vector is first refined to 0 unless N^{−n} divides k.
LatticeVector apply_shift(const LatticeVector& v, std::int64_t k);

/// direction +1: U v (resolution n → n − 1); −1: U⁻¹ v (n → n + 1).
LatticeVector apply_dilation(const LatticeVector& v, int direction);

/// m(T) v = Σ a_k Tᵏ v.
LatticeVector apply_filter(const LatticeVector& v, const LaurentPolynomial& m);

/// M v = U⁻¹ m(T) v.
LatticeVector cascade_step(const LatticeVector& v, const LaurentPolynomial& m);

/// p(v, w)(z) = Σ_k zᵏ ⟨Tᵏ v | w⟩.
LaurentPolynomial correlation(const LatticeVector& v, const LatticeVector& w);

/// Indicator of the cylinder: p^{−n/2} U⁻ⁿ Tˡ φ.
LatticeVector cylinder_vector(const CylinderAddress& addr);

/// ψ_i = U⁻¹ m_i(T) φ for the high-pass filters of build_bank, i = 1..N−1.
std::vector<LatticeVector> wavelet_generators(const DigitSystem& sys);

struct GramLabel {
  int generator;  // 1-based ψ index
  std::int64_t scale;
  std::int64_t translate;
};

struct GramSection {
  std::vector<GramLabel> labels;
  std::vector<Scalar> matrix;  // row-major ⟨v_a | v_b⟩

  std::size_t size() const noexcept { return labels.size(); }
  const Scalar& at(std::size_t a, std::size_t b) const { return matrix[a * labels.size() + b]; }
  bool is_exact_identity() const;
  double identity_distance() const;
};

/// Gram of {U⁻ʲ Tᵏ ψ_i} for every generator, j ∈ [j_lo, j_hi], k ∈ [k_lo, k_hi].
/// Rows are computed in parallel. Throws CapExceeded beyond `cap` vectors.
GramSection gram_section(const std::vector<LatticeVector>& generators, std::int64_t j_lo, std::int64_t j_hi,
                         std::int64_t k_lo, std::int64_t k_hi, std::size_t cap = 10'000);

struct CascadeRow {
  int n;
  Scalar norm_sq;  // ‖Mⁿφ − Mⁿ⁺¹φ‖²
  Scalar inner;    // ⟨Mⁿφ, Mⁿ⁺¹φ⟩
  /// Constant coefficient of R_mⁿ(A₀₀), A₀₀ = ⟨m₀, m⟩_N.
  Scalar transfer_inner;
  bool consistent;
};

/// Rows n = 0..steps−1. steps ≤ 12; CapExceeded when a vector exceeds `cap`
/// entries.
std::vector<CascadeRow> cascade_experiment(const DigitSystem& sys, const LaurentPolynomial& m, int steps,
                                           std::size_t cap = 2'000'000);

/// m^{(n)}(z) = m(z) m(z^N) ⋯ m(z^{N^{n−1}}).
LaurentPolynomial filter_power(const LaurentPolynomial& m, int scale, int n, std::size_t cap = 2'000'000);

/// ⟨φ | U⁻ⁿ (zᵐ)(T) Uⁿ φ⟩ = ⟨v | Tᵐ v⟩ with v = m₀⁽ⁿ⁾(T)φ, i.e. Ŵ⁽ⁿ⁾(−m).
Scalar representation_limit(const DigitSystem& sys, const LaurentPolynomial& m0, int n, std::int64_t m);

std::string to_json(const LatticeVector& v);
LatticeVector lattice_from_json(const std::string& text);

}  // namespace fractalmra
