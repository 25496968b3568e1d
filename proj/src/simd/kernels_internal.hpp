#pragma once

#include "fractalmra/simd/kernels.hpp"

namespace fractalmra::simd::detail {

// Scalar kernels, also used for the tail lanes of the vector kernels.
void sincos_turns_scalar(const double* x, double* c, double* s, std::size_t n);
void eval_torus_scalar(const double* coeffs, std::size_t ncoeffs, std::int64_t lowest, const double* x,
                       double* out_re, double* out_im, std::size_t n);
void hutchinson_scalar(const int* digits, std::size_t p, int scale, int depth, const double* freqs, double* out_re,
                       double* out_im, std::size_t n);
void one_plus_cos_product_scalar(const double* turns, std::size_t nfactors, double* out, std::size_t n);

#if defined(FRACTALMRA_HAVE_AVX2_KERNELS)
const KernelTable& avx2_table();
#endif

}  // namespace fractalmra::simd::detail
