#pragma once

// Double-precision batch kernels behind a runtime-selected dispatch table.
//
// Every kernel has a scalar reference implementation; an AVX2+FMA variant is
// compiled on x86-64 and picked at startup when the CPU supports it. The
// environment variable FRACTALMRA_SIMD=scalar|avx2|auto overrides the choice.
// Angles are always passed in turns (x means e(x) = exp(2πix)) so range
// reduction is an exact subtraction of the nearest integer.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace fractalmra::simd {

struct KernelTable {
  std::string_view name;

  /// c[i] = cos(2π x[i]), s[i] = sin(2π x[i]).
  void (*sincos_turns)(const double* x, double* c, double* s, std::size_t n);

  /// out[i] = Σ_k coeffs[k] · e((lowest + k) · x[i]) for a dense run of
  /// `ncoeffs` complex coefficients (interleaved re/im).
  void (*eval_torus)(const double* coeffs, std::size_t ncoeffs, std::int64_t lowest, const double* x,
                     double* out_re, double* out_im, std::size_t n);

  /// Truncated Hutchinson product Π_{j=1..depth} (1/p) Σ_a e(a·k·N^{-j}) for
  /// every frequency k = freqs[i].
  void (*hutchinson)(const int* digits, std::size_t p, int scale, int depth, const double* freqs,
                     double* out_re, double* out_im, std::size_t n);

  /// out[i] = Π_{f=0..nfactors-1} (1 + cos(2π turns[f·n + i])), factor-major layout.
  void (*one_plus_cos_product)(const double* turns, std::size_t nfactors, double* out, std::size_t n);
};

const KernelTable& scalar_kernels();
/// nullptr when the AVX2 variant is not compiled in or not supported by the CPU.
const KernelTable* avx2_kernels();
/// Table selected at first use (honours FRACTALMRA_SIMD).
const KernelTable& active_kernels();

// Convenience wrappers over the active table.

void sincos_turns(std::span<const double> x, std::span<double> c, std::span<double> s);

/// Evaluates the dense coefficient run at e(x[i]).
void eval_torus(std::span<const std::complex<double>> coeffs, std::int64_t lowest, std::span<const double> x,
                std::span<std::complex<double>> out);

void hutchinson(std::span<const int> digits, int scale, int depth, std::span<const double> freqs,
                std::span<std::complex<double>> out);

}  // namespace fractalmra::simd
