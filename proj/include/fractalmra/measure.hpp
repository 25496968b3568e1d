#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fractalmra/laurent.hpp"
#include "fractalmra/transfer.hpp"

namespace fractalmra {

enum class MomentStatus { Stabilized, Converged, Unsettled };
const char* to_string(MomentStatus s);

struct MomentEntry {
  Scalar value;
  MomentStatus status = MomentStatus::Unsettled;
  int iterate = 0;      // k at which the status was decided
  bool cesaro = false;  // value is a Cesàro mean of the iterates
};

/// ν̂(n) = ∫ zⁿ dν for |n| ≤ range.
struct MomentTable {
  int scale = 0;
  LaurentPolynomial weight;
  std::int64_t range = 0;
  std::map<std::int64_t, MomentEntry> entries;

  bool covers(std::int64_t n) const { return entries.count(n) != 0; }
  /// Throws MissingMoments when n is outside the table.
  const Scalar& at(std::int64_t n) const;
  bool all_settled() const;
  bool all_exact() const;
};

struct MomentOptions {
  int max_iter = 64;
  double tol = 1e-12;
};

/// ν̂(n) as the limit of Ŵ⁽ᵏ⁾(−n), iterated on the finite set of indices the
/// recursion Ŵ⁽ᵏ⁾(m) = Σ_{j ≡ m (N)} Ŵ(j) Ŵ⁽ᵏ⁻¹⁾((m − j)/N) can reach from n.
/// Two identical consecutive vectors on that set certify the exact limit.
MomentEntry moment(const TransferOperator& op, std::int64_t n, MomentOptions opt = {});

/// Batch over |n| ≤ range, with ν̂(−n) = conj ν̂(n) enforced.
MomentTable moment_table(const TransferOperator& op, std::int64_t range, MomentOptions opt = {});

struct Cycle {
  /// θ, Nθ, N²θ, … mod 1 as fractions of a turn, starting from the smallest.
  std::vector<Rational> angles;
  std::vector<double> weight_values;  // |m₀(e(θ))|² per point
};

struct CycleReport {
  int max_length = 0;
  std::vector<Cycle> cycles;
  bool found() const { return !cycles.empty(); }
};

/// All orbits of θ ↦ Nθ among {j/(N^ℓ − 1)}, ℓ ≤ L, on which |m₀|² = N
/// within tol. Requires N^L − 1 ≤ 10⁹ (Range otherwise).
CycleReport find_cycles(const LaurentPolynomial& m0, int scale, int max_length = 12, double tol = 1e-9);

/// Uniform probability on one cycle.
struct AtomicMeasure {
  std::vector<Rational> atoms;
  Rational weight;  // 1/ℓ

  std::complex<double> moment(std::int64_t n) const;
  Rational mass_at(const Rational& theta) const;
};

struct SupportClassification {
  enum class Kind { FullSupport, AtomicOnCycles } kind = Kind::FullSupport;
  // FullSupport
  std::optional<MomentTable> moments;
  bool unique = false;  // eigenvalue 1 simple, no other peripheral spectrum on the block
  // AtomicOnCycles
  CycleReport cycles;
  std::vector<AtomicMeasure> measures;
  std::vector<std::string> diagnostics;
};

/// Throws NotNormalized when R1̂ ≠ 1̂.
SupportClassification classify_support(const LaurentPolynomial& m0, int scale, int max_length = 12,
                                       std::int64_t moment_range = 256);

struct WienerRow {
  std::int64_t k;
  Scalar s;      // Σ_{n=0..k} |ν̂(n)|²
  Scalar ratio;  // s_k / k
};

struct WienerProfile {
  Scalar s0;
  std::vector<WienerRow> rows;  // k = 1..K
  bool unsettled = false;       // some moment in range was not settled
};

WienerProfile wiener_profile(const MomentTable& table, std::int64_t k_max);

struct RieszSample {
  double t;
  double value;
};

/// (1/2π) Π_{k=1..n} (1 + cos(2·3ᵏ t)) at t = 2πs/G, s = 0..G−1.
std::vector<RieszSample> riesz_samples(int n, std::int64_t grid);

/// ν_n(f) = ν(R₁ⁿ f).
Scalar tail_measure(const MomentTable& table, int scale, int n, const LaurentPolynomial& f);

struct FilterComparison {
  bool same_measure = false;
  bool same_modulus = false;  // |m₀| = |m₀′| as Laurent data (equal weights)
  bool disjoint = false;      // different measures ⇒ disjoint representations
  double max_difference = 0.0;
  std::optional<std::int64_t> first_difference;
};

/// Requires both filters normalized (NotNormalized) and cycle-free up to
/// `max_length` (Precondition).
FilterComparison compare_filters(const LaurentPolynomial& m0, const LaurentPolynomial& m0b, int scale,
                                 std::int64_t range = 50, double tol = 1e-10, int max_length = 12);

/// max_{|m| ≤ max_exp} |ν(R zᵐ) − ν(zᵐ)| for a measure given by its moments.
double invariance_defect(const TransferOperator& op, const std::function<std::complex<double>(std::int64_t)>& nu,
                         std::int64_t max_exp);

}  // namespace fractalmra
