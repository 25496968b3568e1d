#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "fractalmra/scalar.hpp"

namespace fractalmra {

/// Affine IFS σ_a(x) = (x + a)/N over a digit set S ⊆ {0, …, N−1}.
class DigitSystem {
 public:
  /// Digits may be given in any order; they are sorted. Throws
  /// ErrorKind::InvalidDigit for an empty set, duplicates, or digits outside
  /// [0, N−1], and ErrorKind::Range for N < 2.
  DigitSystem(int scale, std::vector<int> digits);

  int scale() const noexcept { return scale_; }
  const std::vector<int>& digits() const noexcept { return digits_; }
  std::size_t count() const noexcept { return digits_.size(); }
  bool contains(int digit) const;
  /// {0..N−1} \ S, ascending.
  std::vector<int> gaps() const;
  int max_digit() const { return digits_.back(); }

  std::string to_string() const;  // "(3,{0,2})"

  friend bool operator==(const DigitSystem&, const DigitSystem&) = default;

 private:
  int scale_;
  std::vector<int> digits_;
};

/// s = log p / log N.
double hausdorff_dimension(const DigitSystem& sys);

/// Word (a_{i₁}, …, a_{i_n}) of digits addressing the cylinder
/// N^{-n}(C + Σ a_{i_k} N^{n−k}).
struct CylinderAddress {
  DigitSystem system;
  std::vector<int> word;
};

struct CylinderIndex {
  int depth;
  std::int64_t index;
};

/// Depth n and translate l = Σ a_{i_k} N^{n−k}; the cylinder indicator is
/// p^{−n/2} U^{−n} T^l φ.
CylinderIndex cylinder_translate_index(const CylinderAddress& addr);

/// Left endpoints Σ_{k=1..n} d_k N^{−k} of all depth-n cylinders, sorted.
std::vector<Rational> attractor_sample(const DigitSystem& sys, int depth, std::size_t cap = 1'000'000);

/// Image of points under σ_a.
Rational ifs_map(const DigitSystem& sys, int digit, const Rational& x);

struct HutchinsonValue {
  std::complex<double> value;
  /// exp(2π|k| ā N^{−J}/(N−1)) − 1, a bound on |1 − Π_{j>J} factor_j|.
  double tail_bound;
};

/// B(k) = ∫ e(kθ) dμ(θ), truncated at depth J.
HutchinsonValue hutchinson_transform(const DigitSystem& sys, double k, int depth = 40);

/// m̃₀(θ) = p^{−1/2} Σ_a e(aθ), the canonical low-pass filter evaluated in turns.
std::complex<double> lowpass_turns(const DigitSystem& sys, double theta);

/// Cached evaluator for repeated B(k) lookups (Gram matrices, ONB sums).
/// Batches go through the SIMD dispatch; lookups are keyed by the exact
/// double frequency and are safe to call concurrently.
class HutchinsonTransform {
 public:
  explicit HutchinsonTransform(DigitSystem sys, int depth = 40);

  const DigitSystem& system() const noexcept { return sys_; }
  int depth() const noexcept { return depth_; }

  std::complex<double> operator()(double k) const;
  /// Evaluates a batch, filling the cache.
  std::vector<std::complex<double>> evaluate(std::span<const double> freqs) const;
  double tail_bound(double k) const;

 private:
  DigitSystem sys_;
  int depth_;
  mutable std::mutex mutex_;
  mutable std::map<double, std::complex<double>> cache_;
};

}  // namespace fractalmra
