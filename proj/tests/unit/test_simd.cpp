#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "fractalmra/simd/kernels.hpp"
#include "support.hpp"

using namespace fractalmra;
using testsupport::Rng;

namespace {

std::vector<const simd::KernelTable*> tables() {
  std::vector<const simd::KernelTable*> t{&simd::scalar_kernels()};
  if (const auto* avx = simd::avx2_kernels()) t.push_back(avx);
  return t;
}

}  // namespace

TEST_CASE("kernel tables are available") {
  CHECK(simd::scalar_kernels().name == "scalar");
  const auto& active = simd::active_kernels();
  CHECK((active.name == "scalar" || active.name == "avx2"));
  const std::string msg = "active kernels: " + std::string(active.name);
  MESSAGE(msg);
}

TEST_CASE("sincos in turns") {
  Rng rng(1);
  const std::size_t n = 1037;
  std::vector<double> x(n);
  for (auto& v : x) v = rng.uniform(-1e4, 1e4);
  x[0] = 0.0;
  x[1] = 0.25;
  x[2] = -0.5;
  for (const auto* t : tables()) {
    std::vector<double> c(n), s(n);
    t->sincos_turns(x.data(), c.data(), s.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      double r = x[i] - std::nearbyint(x[i]);
      CHECK(std::abs(c[i] - std::cos(2 * M_PI * r)) < 1e-14);
      CHECK(std::abs(s[i] - std::sin(2 * M_PI * r)) < 1e-14);
    }
    CHECK(c[0] == 1.0);
    CHECK(std::abs(c[1]) < 1e-16);
  }
}

TEST_CASE("torus evaluation") {
  Rng rng(2);
  const std::size_t n = 517, nc = 9;
  std::vector<double> coeffs(2 * nc), x(n);
  for (auto& v : coeffs) v = rng.uniform(-1, 1);
  for (auto& v : x) v = rng.uniform(-3, 3);
  for (const auto* t : tables()) {
    std::vector<double> re(n), im(n);
    t->eval_torus(coeffs.data(), nc, -4, x.data(), re.data(), im.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      std::complex<double> s = 0.0;
      for (std::size_t k = 0; k < nc; ++k)
        s += std::complex<double>(coeffs[2 * k], coeffs[2 * k + 1]) *
             testsupport::e_turns((static_cast<double>(k) - 4.0) * x[i]);
      CHECK(std::abs(std::complex<double>(re[i], im[i]) - s) < 1e-12);
    }
  }
}

TEST_CASE("Hutchinson products") {
  Rng rng(3);
  const std::size_t n = 301;
  std::vector<double> f(n);
  for (auto& v : f) v = rng.uniform(-50, 50);
  const int digits[] = {0, 2, 5};
  for (const auto* t : tables()) {
    std::vector<double> re(n), im(n);
    t->hutchinson(digits, 3, 7, 40, f.data(), re.data(), im.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      auto o = testsupport::hutchinson_oracle({0, 2, 5}, 7, f[i], 40);
      CHECK(std::abs(std::complex<double>(re[i], im[i]) - o) < 1e-12);
    }
  }
}

TEST_CASE("one-plus-cos products") {
  Rng rng(4);
  const std::size_t n = 263, nf = 5;
  std::vector<double> turns(n * nf);
  for (auto& v : turns) v = rng.uniform(0, 1);
  for (const auto* t : tables()) {
    std::vector<double> out(n);
    t->one_plus_cos_product(turns.data(), nf, out.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      double e = 1.0;
      for (std::size_t k = 0; k < nf; ++k) e *= 1.0 + std::cos(2 * M_PI * turns[k * n + i]);
      CHECK(std::abs(out[i] - e) < 1e-12);
    }
  }
}

TEST_CASE("scalar and AVX2 kernels agree") {
  const auto* avx = simd::avx2_kernels();
  if (!avx) {
    MESSAGE("AVX2 kernels unavailable; equivalence not exercised");
    return;
  }
  const auto& sc = simd::scalar_kernels();
  Rng rng(5);
  for (std::size_t n : {1u, 3u, 4u, 7u, 8u, 33u, 1000u}) {
    std::vector<double> x(n), c1(n), s1(n), c2(n), s2(n);
    for (auto& v : x) v = rng.uniform(-100, 100);
    sc.sincos_turns(x.data(), c1.data(), s1.data(), n);
    avx->sincos_turns(x.data(), c2.data(), s2.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(c1[i] - c2[i]) < 1e-14);
      CHECK(std::abs(s1[i] - s2[i]) < 1e-14);
    }
    std::vector<double> coeffs(10);
    for (auto& v : coeffs) v = rng.uniform(-1, 1);
    std::vector<double> r1(n), i1(n), r2(n), i2(n);
    sc.eval_torus(coeffs.data(), 5, -2, x.data(), r1.data(), i1.data(), n);
    avx->eval_torus(coeffs.data(), 5, -2, x.data(), r2.data(), i2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(std::complex<double>(r1[i] - r2[i], i1[i] - i2[i])) < 1e-12);
    const int digits[] = {0, 2};
    sc.hutchinson(digits, 2, 3, 40, x.data(), r1.data(), i1.data(), n);
    avx->hutchinson(digits, 2, 3, 40, x.data(), r2.data(), i2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(std::complex<double>(r1[i] - r2[i], i1[i] - i2[i])) < 1e-13);
    std::vector<double> turns(3 * n), o1(n), o2(n);
    for (auto& v : turns) v = rng.uniform(0, 1);
    sc.one_plus_cos_product(turns.data(), 3, o1.data(), n);
    avx->one_plus_cos_product(turns.data(), 3, o2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(o1[i] - o2[i]) < 1e-13);
  }
}

TEST_CASE("wrappers use the active table") {
  std::vector<std::complex<double>> coeffs{{1, 0}, {0, 1}};
  std::vector<double> x{0.0, 0.25};
  std::vector<std::complex<double>> out(2);
  simd::eval_torus(coeffs, 0, x, out);
  CHECK(std::abs(out[0] - std::complex<double>(1, 1)) < 1e-15);
  CHECK(std::abs(out[1] - std::complex<double>(0, 0)) < 1e-15);  // 1 + i·i
}
