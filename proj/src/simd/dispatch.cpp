#include <cstdlib>
#include <string>
#include <vector>

#include "fractalmra/error.hpp"
#include "kernels_internal.hpp"

namespace fractalmra::simd {

namespace {

const KernelTable kScalar{"scalar", detail::sincos_turns_scalar, detail::eval_torus_scalar,
                          detail::hutchinson_scalar, detail::one_plus_cos_product_scalar};

bool cpu_has_avx2() {
#if defined(FRACTALMRA_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& select() {
  const KernelTable* vec = avx2_kernels();
  const char* env = std::getenv("FRACTALMRA_SIMD");
  std::string mode = env ? env : "auto";
  if (mode == "scalar") return kScalar;
  if (mode == "avx2" && vec == nullptr)
    throw Error(ErrorKind::Precondition, "FRACTALMRA_SIMD=avx2 requested but AVX2 kernels are unavailable");
  return vec ? *vec : kScalar;
}

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

const KernelTable* avx2_kernels() {
#if defined(FRACTALMRA_HAVE_AVX2_KERNELS)
  static const bool ok = cpu_has_avx2();
  return ok ? &detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() {
  static const KernelTable& table = select();
  return table;
}

void sincos_turns(std::span<const double> x, std::span<double> c, std::span<double> s) {
  active_kernels().sincos_turns(x.data(), c.data(), s.data(), x.size());
}

void eval_torus(std::span<const std::complex<double>> coeffs, std::int64_t lowest, std::span<const double> x,
                std::span<std::complex<double>> out) {
  std::vector<double> re(x.size()), im(x.size());
  active_kernels().eval_torus(reinterpret_cast<const double*>(coeffs.data()), coeffs.size(), lowest, x.data(),
                              re.data(), im.data(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = {re[i], im[i]};
}

void hutchinson(std::span<const int> digits, int scale, int depth, std::span<const double> freqs,
                std::span<std::complex<double>> out) {
  std::vector<double> re(freqs.size()), im(freqs.size());
  active_kernels().hutchinson(digits.data(), digits.size(), scale, depth, freqs.data(), re.data(), im.data(),
                              freqs.size());
  for (std::size_t i = 0; i < freqs.size(); ++i) out[i] = {re[i], im[i]};
}

}  // namespace fractalmra::simd
