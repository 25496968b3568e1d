#pragma once

#include <cstddef>
#include <vector>

#include "fractalmra/ifs.hpp"
#include "fractalmra/laurent.hpp"

namespace fractalmra {

/// Filters (m₀, …, m_{N−1}) at scale N.
struct FilterBank {
  int scale = 0;
  std::vector<LaurentPolynomial> filters;

  bool is_exact() const;
};

/// N×N matrix of Laurent polynomials A_{j,k}(z), row-major.
struct LoopMatrix {
  int scale = 0;
  std::vector<LaurentPolynomial> entries;

  static LoopMatrix identity(int scale);
  const LaurentPolynomial& at(int j, int k) const { return entries[static_cast<std::size_t>(j * scale + k)]; }
  LaurentPolynomial& at(int j, int k) { return entries[static_cast<std::size_t>(j * scale + k)]; }
};

/// m₀(z) = p^{−1/2} Σ_{a∈S} z^a, exact.
LaurentPolynomial canonical_lowpass(const DigitSystem& sys);

/// Equal-weight filter p^{−1/2} Σ_{k∈taps} z^k over an arbitrary tap set
/// (used for test filters such as (1+z³)/√2 at N = 2).
LaurentPolynomial equal_weight_filter(const std::vector<std::int64_t>& taps);

/// (m₀, gap filters z^d for d ∉ S ascending, detail filters
/// p^{−1/2} Σ_i η^{k i} z^{a_i} for k = 1..p−1, η = e^{2πi/p}).
/// Exact whenever p ≤ 2.
FilterBank build_bank(const DigitSystem& sys);

/// Reorders a bank: result.filters[i] = bank.filters[perm[i]].
FilterBank permute_bank(const FilterBank& bank, const std::vector<int>& perm);

/// ⟨m, m2⟩_N: coefficient at n is Σ_k conj(m(k))·m2(k + N n), i.e. the
/// Laurent polynomial (1/N) Σ_{w^N = z} conj(m(w)) m2(w).
LaurentPolynomial pairing(const LaurentPolynomial& m, const LaurentPolynomial& m2, int scale);

struct UnitarityDefect {
  bool exact = false;  // true: identities verified in exact arithmetic, value is exactly 0
  double value = 0.0;
  double coefficient_residual = 0.0;  // max |⟨m_j, m_i⟩_N − δ_ij| over coefficients
  double sampled_residual = 0.0;      // max over samples of ‖P(z)P(z)* − I‖₂
};

/// Distance of the polyphase matrix from unitary. Exact banks are checked by
/// exact coefficient identities first; otherwise the larger of the
/// coefficient residual and the sampled operator-norm residual (at `samples`
/// roots of unity) is reported.
UnitarityDefect unitarity_defect(const FilterBank& bank, int samples = 64);

/// m'_j(z) = Σ_k A_{j,k}(z^N) m_k(z).
FilterBank loop_apply(const LoopMatrix& a, const FilterBank& bank);

/// A_{j,k} = ⟨m_k, m'_j⟩_N, the unique loop with loop_apply(A, bank) = bank2.
/// Both banks must be unitary within `tol`.
LoopMatrix connecting_matrix(const FilterBank& bank, const FilterBank& bank2, double tol = 1e-10);

/// Sampled distance of A(z) from unitary (max over `samples` points).
double loop_unitarity_defect(const LoopMatrix& a, int samples = 64);

}  // namespace fractalmra
