#include <cmath>
#include <numbers>

#include "kernels_internal.hpp"

namespace fractalmra::simd::detail {

namespace {

inline void sincos1(double x, double& c, double& s) {
  double r = x - std::nearbyint(x);
  double a = 2.0 * std::numbers::pi * r;
  c = std::cos(a);
  s = std::sin(a);
}

}  // namespace

void sincos_turns_scalar(const double* x, double* c, double* s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) sincos1(x[i], c[i], s[i]);
}

void eval_torus_scalar(const double* coeffs, std::size_t ncoeffs, std::int64_t lowest, const double* x,
                       double* out_re, double* out_im, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double zc, zs;
    sincos1(x[i], zc, zs);
    // Horner from the top coefficient.
    double ar = 0.0, ai = 0.0;
    for (std::size_t k = ncoeffs; k-- > 0;) {
      double nr = ar * zc - ai * zs + coeffs[2 * k];
      double ni = ar * zs + ai * zc + coeffs[2 * k + 1];
      ar = nr;
      ai = ni;
    }
    double lc, ls;
    sincos1(static_cast<double>(lowest) * x[i], lc, ls);
    out_re[i] = ar * lc - ai * ls;
    out_im[i] = ar * ls + ai * lc;
  }
}

void hutchinson_scalar(const int* digits, std::size_t p, int scale, int depth, const double* freqs, double* out_re,
                       double* out_im, std::size_t n) {
  const double inv_p = 1.0 / static_cast<double>(p);
  const double inv_n = 1.0 / static_cast<double>(scale);
  for (std::size_t i = 0; i < n; ++i) {
    double pr = 1.0, pi = 0.0;
    double t = freqs[i];
    for (int j = 1; j <= depth; ++j) {
      t *= inv_n;
      double fr = 0.0, fi = 0.0;
      for (std::size_t d = 0; d < p; ++d) {
        double c, s;
        sincos1(static_cast<double>(digits[d]) * t, c, s);
        fr += c;
        fi += s;
      }
      fr *= inv_p;
      fi *= inv_p;
      double nr = pr * fr - pi * fi;
      double ni = pr * fi + pi * fr;
      pr = nr;
      pi = ni;
    }
    out_re[i] = pr;
    out_im[i] = pi;
  }
}

void one_plus_cos_product_scalar(const double* turns, std::size_t nfactors, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 1.0;
    for (std::size_t f = 0; f < nfactors; ++f) {
      double c, s;
      sincos1(turns[f * n + i], c, s);
      acc *= 1.0 + c;
    }
    out[i] = acc;
  }
}

}  // namespace fractalmra::simd::detail
