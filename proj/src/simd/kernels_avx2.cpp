// AVX2 + FMA variants. This translation unit is the only one compiled with
// -mavx2 -mfma; it is reached exclusively through the dispatch table after a
// runtime CPU check.

#include <immintrin.h>

#include <cmath>
#include <numbers>

#include "kernels_internal.hpp"

namespace fractalmra::simd::detail {

namespace {

constexpr std::size_t kLanes = 4;

// sin/cos of 2πx for x in turns. Reduction: r = x - round(x), quadrant
// q = round(4r), t = r - q/4 ∈ [-1/8, 1/8] (both subtractions exact), then
// Taylor polynomials on θ = 2πt ∈ [-π/4, π/4] (truncation < 1e-16).
inline void sincos_turns_pd(__m256d x, __m256d& c_out, __m256d& s_out) {
  const __m256d two_pi = _mm256_set1_pd(2.0 * std::numbers::pi);
  const __m256d quarter = _mm256_set1_pd(0.25);
  const __m256d four = _mm256_set1_pd(4.0);
  const __m256d sign_bit = _mm256_set1_pd(-0.0);

  __m256d r = _mm256_sub_pd(x, _mm256_round_pd(x, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC));
  __m256d q = _mm256_round_pd(_mm256_mul_pd(r, four), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d t = _mm256_fnmadd_pd(q, quarter, r);
  __m256d th = _mm256_mul_pd(t, two_pi);
  __m256d th2 = _mm256_mul_pd(th, th);

  // sin: θ(1 - θ²/3! + θ⁴/5! - ... - θ^14/15!)
  __m256d sp = _mm256_set1_pd(-1.0 / 1307674368000.0);
  sp = _mm256_fmadd_pd(sp, th2, _mm256_set1_pd(1.0 / 6227020800.0));
  sp = _mm256_fmadd_pd(sp, th2, _mm256_set1_pd(-1.0 / 39916800.0));
  sp = _mm256_fmadd_pd(sp, th2, _mm256_set1_pd(1.0 / 362880.0));
  sp = _mm256_fmadd_pd(sp, th2, _mm256_set1_pd(-1.0 / 5040.0));
  sp = _mm256_fmadd_pd(sp, th2, _mm256_set1_pd(1.0 / 120.0));
  sp = _mm256_fmadd_pd(sp, th2, _mm256_set1_pd(-1.0 / 6.0));
  __m256d s = _mm256_fmadd_pd(_mm256_mul_pd(sp, th2), th, th);

  // cos: 1 - θ²/2! + ... + θ^16/16!
  __m256d cp = _mm256_set1_pd(1.0 / 20922789888000.0);
  cp = _mm256_fmadd_pd(cp, th2, _mm256_set1_pd(-1.0 / 87178291200.0));
  cp = _mm256_fmadd_pd(cp, th2, _mm256_set1_pd(1.0 / 479001600.0));
  cp = _mm256_fmadd_pd(cp, th2, _mm256_set1_pd(-1.0 / 3628800.0));
  cp = _mm256_fmadd_pd(cp, th2, _mm256_set1_pd(1.0 / 40320.0));
  cp = _mm256_fmadd_pd(cp, th2, _mm256_set1_pd(-1.0 / 720.0));
  cp = _mm256_fmadd_pd(cp, th2, _mm256_set1_pd(1.0 / 24.0));
  cp = _mm256_fmadd_pd(cp, th2, _mm256_set1_pd(-0.5));
  __m256d c = _mm256_fmadd_pd(cp, th2, _mm256_set1_pd(1.0));

  // quadrant in {0,1,2,3}
  __m256d qm = _mm256_sub_pd(q, _mm256_mul_pd(four, _mm256_floor_pd(_mm256_mul_pd(q, quarter))));
  __m256d is1 = _mm256_cmp_pd(qm, _mm256_set1_pd(1.0), _CMP_EQ_OQ);
  __m256d is2 = _mm256_cmp_pd(qm, _mm256_set1_pd(2.0), _CMP_EQ_OQ);
  __m256d is3 = _mm256_cmp_pd(qm, _mm256_set1_pd(3.0), _CMP_EQ_OQ);
  __m256d swap = _mm256_or_pd(is1, is3);
  __m256d cneg = _mm256_or_pd(is1, is2);
  __m256d sneg = _mm256_or_pd(is2, is3);

  __m256d co = _mm256_blendv_pd(c, s, swap);
  __m256d so = _mm256_blendv_pd(s, c, swap);
  c_out = _mm256_xor_pd(co, _mm256_and_pd(cneg, sign_bit));
  s_out = _mm256_xor_pd(so, _mm256_and_pd(sneg, sign_bit));
}

void sincos_turns_avx2(const double* x, double* c, double* s, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256d vc, vs;
    sincos_turns_pd(_mm256_loadu_pd(x + i), vc, vs);
    _mm256_storeu_pd(c + i, vc);
    _mm256_storeu_pd(s + i, vs);
  }
  if (i < n) sincos_turns_scalar(x + i, c + i, s + i, n - i);
}

void eval_torus_avx2(const double* coeffs, std::size_t ncoeffs, std::int64_t lowest, const double* x,
                     double* out_re, double* out_im, std::size_t n) {
  const __m256d low = _mm256_set1_pd(static_cast<double>(lowest));
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256d vx = _mm256_loadu_pd(x + i);
    __m256d zc, zs;
    sincos_turns_pd(vx, zc, zs);
    __m256d ar = _mm256_setzero_pd();
    __m256d ai = _mm256_setzero_pd();
    for (std::size_t k = ncoeffs; k-- > 0;) {
      __m256d cr = _mm256_set1_pd(coeffs[2 * k]);
      __m256d ci = _mm256_set1_pd(coeffs[2 * k + 1]);
      __m256d nr = _mm256_fmsub_pd(ar, zc, _mm256_fmsub_pd(ai, zs, cr));
      __m256d ni = _mm256_fmadd_pd(ar, zs, _mm256_fmadd_pd(ai, zc, ci));
      ar = nr;
      ai = ni;
    }
    __m256d lc, ls;
    sincos_turns_pd(_mm256_mul_pd(low, vx), lc, ls);
    _mm256_storeu_pd(out_re + i, _mm256_fmsub_pd(ar, lc, _mm256_mul_pd(ai, ls)));
    _mm256_storeu_pd(out_im + i, _mm256_fmadd_pd(ar, ls, _mm256_mul_pd(ai, lc)));
  }
  if (i < n) eval_torus_scalar(coeffs, ncoeffs, lowest, x + i, out_re + i, out_im + i, n - i);
}

void hutchinson_avx2(const int* digits, std::size_t p, int scale, int depth, const double* freqs, double* out_re,
                     double* out_im, std::size_t n) {
  const __m256d inv_p = _mm256_set1_pd(1.0 / static_cast<double>(p));
  const __m256d inv_n = _mm256_set1_pd(1.0 / static_cast<double>(scale));
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256d pr = _mm256_set1_pd(1.0);
    __m256d pi = _mm256_setzero_pd();
    __m256d t = _mm256_loadu_pd(freqs + i);
    for (int j = 1; j <= depth; ++j) {
      t = _mm256_mul_pd(t, inv_n);
      __m256d fr = _mm256_setzero_pd();
      __m256d fi = _mm256_setzero_pd();
      for (std::size_t d = 0; d < p; ++d) {
        __m256d c, s;
        sincos_turns_pd(_mm256_mul_pd(_mm256_set1_pd(static_cast<double>(digits[d])), t), c, s);
        fr = _mm256_add_pd(fr, c);
        fi = _mm256_add_pd(fi, s);
      }
      fr = _mm256_mul_pd(fr, inv_p);
      fi = _mm256_mul_pd(fi, inv_p);
      __m256d nr = _mm256_fmsub_pd(pr, fr, _mm256_mul_pd(pi, fi));
      __m256d ni = _mm256_fmadd_pd(pr, fi, _mm256_mul_pd(pi, fr));
      pr = nr;
      pi = ni;
    }
    _mm256_storeu_pd(out_re + i, pr);
    _mm256_storeu_pd(out_im + i, pi);
  }
  if (i < n) hutchinson_scalar(digits, p, scale, depth, freqs + i, out_re + i, out_im + i, n - i);
}

void one_plus_cos_product_avx2(const double* turns, std::size_t nfactors, double* out, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256d acc = one;
    for (std::size_t f = 0; f < nfactors; ++f) {
      __m256d c, s;
      sincos_turns_pd(_mm256_loadu_pd(turns + f * n + i), c, s);
      acc = _mm256_mul_pd(acc, _mm256_add_pd(one, c));
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
    double acc = 1.0;
    for (std::size_t f = 0; f < nfactors; ++f) {
      double r = turns[f * n + i] - std::nearbyint(turns[f * n + i]);
      acc *= 1.0 + std::cos(2.0 * std::numbers::pi * r);
    }
    out[i] = acc;
  }
}

const KernelTable kAvx2{"avx2", sincos_turns_avx2, eval_torus_avx2, hutchinson_avx2, one_plus_cos_product_avx2};

}  // namespace

const KernelTable& avx2_table() { return kAvx2; }

}  // namespace fractalmra::simd::detail
