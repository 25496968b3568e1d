#include <doctest.h>

#include <algorithm>
#include <set>

#include "fractalmra/error.hpp"
#include "fractalmra/ifs.hpp"
#include "support.hpp"

using namespace fractalmra;
using testsupport::Rng;

TEST_CASE("digit system validation") {
  DigitSystem s(3, {2, 0});
  CHECK(s.digits() == std::vector<int>{0, 2});
  CHECK(s.gaps() == std::vector<int>{1});
  CHECK(s.to_string() == "(3,{0,2})");
  auto kind = [](auto f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Precondition;
  };
  CHECK(kind([] { DigitSystem(3, {0, 3}); }) == ErrorKind::InvalidDigit);
  CHECK(kind([] { DigitSystem(3, {0, 0}); }) == ErrorKind::InvalidDigit);
  CHECK(kind([] { DigitSystem(3, {}); }) == ErrorKind::InvalidDigit);
  CHECK(kind([] { DigitSystem(3, {-1}); }) == ErrorKind::InvalidDigit);
  CHECK(kind([] { DigitSystem(1, {0}); }) == ErrorKind::Range);
}

TEST_CASE("Hausdorff dimension") {
  CHECK(hausdorff_dimension(DigitSystem(3, {0, 2})) == 0.6309297535714574);
  CHECK(hausdorff_dimension(DigitSystem(4, {0, 2})) == 0.5);
  CHECK(hausdorff_dimension(DigitSystem(6, {0, 2, 4})) == doctest::Approx(0.6131471927654584).epsilon(1e-15));
  CHECK(hausdorff_dimension(DigitSystem(5, {3})) == 0.0);
}

TEST_CASE("cylinder translate index") {
  DigitSystem c3(3, {0, 2});
  auto idx = cylinder_translate_index({c3, {2}});
  CHECK(idx.depth == 1);
  CHECK(idx.index == 2);
  idx = cylinder_translate_index({c3, {2, 0}});
  CHECK(idx.depth == 2);
  CHECK(idx.index == 6);
  CHECK(cylinder_translate_index({c3, {0, 0, 0}}).index == 0);
  CHECK_THROWS_AS(cylinder_translate_index({c3, {1}}), Error);
  // Brute force: the index is the base-N integer spelled by the word.
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    std::vector<int> word;
    std::int64_t expect = 0;
    for (int d = 0; d < 6; ++d) {
      int a = rng.range(0, 1) ? 2 : 0;
      word.push_back(a);
      expect = 3 * expect + a;
    }
    auto r = cylinder_translate_index({c3, word});
    CHECK(r.index == expect);
    CHECK(r.index < 729);
  }
}

TEST_CASE("attractor samples") {
  DigitSystem c3(3, {0, 2}), c4(4, {0, 2});
  CHECK(attractor_sample(c3, 1) == std::vector<Rational>{0, Rational(2, 3)});
  CHECK(attractor_sample(c3, 2) == std::vector<Rational>{0, Rational(2, 9), Rational(2, 3), Rational(8, 9)});
  CHECK(attractor_sample(c4, 2) == std::vector<Rational>{0, Rational(1, 8), Rational(1, 2), Rational(5, 8)});
  CHECK(attractor_sample(c3, 0) == std::vector<Rational>{0});
  CHECK_THROWS_AS(attractor_sample(c3, 25), Error);

  for (const auto& sys : {c3, c4, DigitSystem(5, {0, 1, 4})}) {
    for (int n = 0; n < 5; ++n) {
      auto cur = attractor_sample(sys, n);
      auto nxt = attractor_sample(sys, n + 1);
      std::set<Rational> next_set(nxt.begin(), nxt.end());
      CHECK(std::is_sorted(nxt.begin(), nxt.end()));
      for (int a : sys.digits())
        for (const auto& x : cur) CHECK(next_set.count(ifs_map(sys, a, x)) == 1);
      CHECK(nxt.size() == cur.size() * sys.count());
    }
  }
}

TEST_CASE("Hutchinson transform") {
  DigitSystem c3(3, {0, 2}), c4(4, {0, 2});
  CHECK(hutchinson_transform(c3, 0.0).value == std::complex<double>(1.0, 0.0));
  for (int j = 1; j <= 5; ++j) CHECK(std::abs(hutchinson_transform(c4, 1.0, j).value) < 1e-15);
  CHECK(std::abs(hutchinson_transform(c3, 1.0, 40).value) > 0.0);
  CHECK_THROWS_AS(hutchinson_transform(c3, 1.0, 0), Error);

  Rng rng(99);
  for (const auto& sys : {c3, c4, DigitSystem(5, {0, 2, 3})}) {
    HutchinsonTransform cached(sys, 40);
    const double p = static_cast<double>(sys.count());
    for (int i = 0; i < 50; ++i) {
      double k = rng.uniform(-10.0, 10.0);
      auto b = hutchinson_transform(sys, k, 40);
      CHECK(std::abs(b.value) <= 1.0 + 1e-15);
      // B(k) = p^{-1/2} m₀(k/N) B(k/N), at the common truncation depth.
      auto rhs = lowpass_turns(sys, k / sys.scale()) / std::sqrt(p) * hutchinson_transform(sys, k / sys.scale(), 39).value;
      CHECK(std::abs(b.value - rhs) < 1e-12);
      CHECK(std::abs(b.value - testsupport::hutchinson_oracle(sys.digits(), sys.scale(), k, 40)) < 1e-12);
      CHECK(std::abs(cached(k) - b.value) < 1e-12);
      // Tail bound covers the gap to a much deeper truncation.
      auto deep = hutchinson_transform(sys, k, 12).value;
      CHECK(std::abs(b.value - deep) <= hutchinson_transform(sys, k, 12).tail_bound + 1e-15);
    }
  }
}
