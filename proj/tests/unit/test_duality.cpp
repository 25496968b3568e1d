#include <tuple>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fractalmra/duality.hpp"
#include "fractalmra/error.hpp"
#include "fractalmra/filterbank.hpp"
#include "support.hpp"

using namespace fractalmra;
using testsupport::Rng;

namespace {

const DigitSystem kC4(4, {0, 2});
const DigitSystem kC3(3, {0, 2});

// Unitarity of (1/√p)(e(a_j b_k/N)) by summing roots of unity directly.
bool brute_dual(const DigitSystem& sys, const std::vector<std::int64_t>& b) {
  const double p = static_cast<double>(sys.count());
  for (std::size_t j = 0; j < sys.count(); ++j)
    for (std::size_t l = 0; l < sys.count(); ++l) {
      std::complex<double> s = 0.0;
      for (auto x : b)
        s += testsupport::e_turns(static_cast<double>((sys.digits()[j] - sys.digits()[l]) * x) / sys.scale());
      if (std::abs(s / p - (j == l ? 1.0 : 0.0)) > 1e-9) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("dual matrices") {
  auto c4 = dual_matrix(kC4, {0, 1});
  CHECK(c4.exact_unitary);
  CHECK(c4.defect == 0.0);
  CHECK(c4.is_dual());
  const double h = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(c4.matrix.at(1, 1) + h) < 1e-15);
  CHECK(std::abs(c4.matrix.at(0, 1) - h) < 1e-15);

  auto c3 = dual_matrix(kC3, {0, 1});
  CHECK_FALSE(c3.is_dual());
  CHECK(c3.defect > 0.1);

  auto z3 = dual_matrix(DigitSystem(6, {0, 2, 4}), {0, 1, 2});
  CHECK(z3.exact_unitary);
  CHECK(z3.is_dual());

  CHECK_THROWS_AS(dual_matrix(kC4, {0, 1, 2}), Error);
  CHECK_THROWS_AS(dual_matrix(kC4, {1, 2}), Error);
}

TEST_CASE("duality verdicts agree with root-of-unity sums and are permutation invariant") {
  Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    int n = static_cast<int>(rng.range(2, 9));
    int p = static_cast<int>(rng.range(2, std::min(n, 4)));
    std::vector<int> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = n - 1; i > 0; --i) std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(rng.range(0, i))]);
    std::vector<int> digits(pool.begin(), pool.begin() + p);
    std::vector<std::int64_t> b{0};
    while (static_cast<int>(b.size()) < p) {
      std::int64_t x = rng.range(-n, 2 * n);
      if (std::find(b.begin(), b.end(), x) == b.end()) b.push_back(x);
    }
    DigitSystem sys(n, digits);
    auto pair = dual_matrix(sys, b);
    CHECK(pair.is_dual() == brute_dual(sys, b));
    std::reverse(b.begin(), b.end());
    CHECK(dual_matrix(sys, b).is_dual() == pair.is_dual());
  }
}

TEST_CASE("root-of-unity labels") {
  CHECK(root_of_unity_label(0, 4) == "1");
  CHECK(root_of_unity_label(2, 4) == "-1");
  CHECK(root_of_unity_label(2, 6) == "ζ3");
  CHECK(root_of_unity_label(8, 6) == "ζ3");
  CHECK(root_of_unity_label(4, 6) == "ζ3^2");
  CHECK(root_of_unity_label(1, 4) == "ζ4");
}

TEST_CASE("spectrum candidates") {
  CHECK(lambda_set(dual_matrix(kC4, {0, 1}), 8).prefix == std::vector<std::int64_t>{0, 1, 4, 5, 16, 17, 20, 21});
  CHECK(lambda_set(dual_matrix(DigitSystem(6, {0, 3}), {0, 1}), 8).prefix ==
        std::vector<std::int64_t>{0, 1, 6, 7, 36, 37, 42, 43});
  CHECK(lambda_set(dual_matrix(kC4, {0, 1}), 1).prefix == std::vector<std::int64_t>{0});
  CHECK_THROWS_AS(lambda_set(dual_matrix(kC3, {0, 1}), 4), Error);
  CHECK_THROWS_AS(lambda_set(dual_matrix(kC4, {0, 1}), 2'000'000), Error);

  // Digit-peeling oracle; counts keep the integer scan to a few million.
  for (auto [sys, b, count] : {std::tuple{kC4, std::vector<std::int64_t>{0, 1}, std::size_t{2048}},
                               std::tuple{DigitSystem(6, {0, 2, 4}), std::vector<std::int64_t>{0, 1, 2}, std::size_t{6561}},
                               std::tuple{DigitSystem(8, {0, 4}), std::vector<std::int64_t>{0, 3}, std::size_t{256}}}) {
    auto lam = lambda_set(dual_matrix(sys, b), count).prefix;
    REQUIRE(lam.size() == count);
    std::vector<std::int64_t> oracle;
    for (std::int64_t n = 0; oracle.size() < lam.size(); ++n)
      if (testsupport::in_lambda(n, sys.scale(), b)) oracle.push_back(n);
    CHECK(lam == oracle);
  }

  auto signed_set = lambda_set(dual_matrix(kC4, {0, -1}), 5, 6);
  CHECK(signed_set.signed_digits);
  CHECK(signed_set.prefix == std::vector<std::int64_t>{0, -1, -4, -5, -16});
}

TEST_CASE("B-cycles") {
  auto rep = b_cycles(dual_matrix(kC4, {0, 1}), 6);
  REQUIRE(rep.cycles.size() == 1);
  CHECK(rep.cycles[0].points == std::vector<Rational>{0});
  CHECK(rep.trivial_only());
  // Word (1) gives ξ = 1/3, where |m₀|² = 1/2.
  auto m0 = canonical_lowpass(kC4);
  CHECK(std::norm(m0.evaluate_turns(1.0 / 3.0)) == doctest::Approx(0.5));
  // Nontrivial cycles exist for (4,{0,2}) with B = {0,3}: ξ = 1, |m₀(1)|² = 2.
  auto other = b_cycles(dual_matrix(kC4, {0, 3}), 4);
  CHECK_FALSE(other.trivial_only());
  for (const auto& c : other.cycles)
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      // ξ_{i+1} = Nξᵢ − bᵢ.
      CHECK(c.points[(i + 1) % c.points.size()] == 4 * c.points[i] - c.word[i]);
      CHECK(std::abs(c.weight_values[i] - 2.0) < 1e-9);
    }
  CHECK_THROWS_AS(b_cycles(dual_matrix(kC4, {0, 1}), 0), Error);
  CHECK_THROWS_AS(b_cycles(dual_matrix(kC4, {0, 1}), 30, 1e-9, 1000), Error);
}

TEST_CASE("ONB partial sums") {
  auto pair = dual_matrix(kC4, {0, 1});
  auto at0 = onb_defect(pair, 0.0, 16);
  CHECK(at0.terms[0] == doctest::Approx(1.0));
  for (std::size_t i = 1; i < at0.terms.size(); ++i) CHECK(at0.terms[i] < 1e-8);
  auto s = onb_defect(pair, 0.3, 256);
  CHECK(s.monotone);
  CHECK(s.max_partial <= 1.0 + 1e-9);
  CHECK(std::is_sorted(s.partial.begin(), s.partial.end()));
  auto half = onb_defect(pair, 0.5, 4);
  CHECK(half.partial.size() == 4);
  CHECK(half.monotone);
  Rng rng(9);
  for (int i = 0; i < 20; ++i) CHECK(onb_defect(pair, rng.uniform(-3, 3), 64).max_partial <= 1.0 + 1e-9);
}

TEST_CASE("exponential Gram matrices") {
  auto g = exponential_gram(kC4, {0, 1, 4, 5});
  CHECK(g.identity_distance() < 1e-8);
  CHECK(exponential_gram(kC4, {7}).identity_distance() < 1e-15);
  std::vector<std::int64_t> e(21);
  std::iota(e.begin(), e.end(), 0);
  auto c3 = exponential_gram(kC3, e);
  CHECK_FALSE(find_orthogonal_triple(c3, 1e-6).has_value());
  for (std::size_t i = 0; i < c3.rows; ++i)
    for (std::size_t j = 0; j < c3.cols; ++j) {
      CHECK(std::abs(c3.at(i, j) - std::conj(c3.at(j, i))) < 1e-14);
      CHECK(std::abs(c3.at(i, j) - testsupport::hutchinson_oracle(kC3.digits(), 3, static_cast<double>(e[j] - e[i]), 40)) < 1e-12);
    }
  auto t = find_orthogonal_triple(exponential_gram(kC4, {0, 1, 4}), 1e-8);
  CHECK(t.has_value());
}

TEST_CASE("dual transfer operator") {
  auto pair = dual_matrix(kC4, {0, 1});
  Rng rng(17);
  for (int i = 0; i < 20; ++i) {
    double xi = rng.uniform(-5, 5);
    CHECK(dual_transfer_eval(pair, [](double) { return 1.0; }, xi, 1) == doctest::Approx(1.0).epsilon(1e-12));
    double f3 = dual_transfer_eval(pair, [](double x) { return std::cos(x); }, xi, 3);
    CHECK(std::abs(f3) <= 1.0 + 1e-12);
  }
  // Ω is R_B-fixed up to truncation.
  for (double xi : {0.1, 0.37, 0.8, 1.6}) {
    double lhs = dual_transfer_eval(pair, [&](double x) { return omega(pair, x, 12); }, xi, 1);
    CHECK(std::abs(lhs - omega(pair, xi, 13)) < 1e-12);
    CHECK(std::abs(omega(pair, xi, 13) - omega(pair, xi, 14)) < 1e-6);
  }
  CHECK_THROWS_AS(dual_transfer_eval(pair, [](double) { return 1.0; }, 0.0, 13), Error);
}
