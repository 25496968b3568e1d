#include <doctest.h>

#include "fractalmra/error.hpp"
#include "fractalmra/filterbank.hpp"
#include "support.hpp"

using namespace fractalmra;
using testsupport::Rng;

namespace {

LaurentPolynomial poly(std::initializer_list<std::pair<std::int64_t, Scalar>> terms) {
  LaurentPolynomial p;
  for (const auto& [k, c] : terms) p.add_to(k, c);
  return p;
}

const Scalar r2 = Scalar::inv_sqrt(2);

}  // namespace

TEST_CASE("canonical low-pass filters") {
  CHECK(canonical_lowpass(DigitSystem(3, {0, 2})) == poly({{0, r2}, {2, r2}}));
  CHECK(canonical_lowpass(DigitSystem(2, {0, 1})) == poly({{0, r2}, {1, r2}}));
  CHECK(canonical_lowpass(DigitSystem(4, {0, 2})) == poly({{0, r2}, {2, r2}}));
  // Coefficient sum √p.
  for (int n = 2; n <= 7; ++n)
    for (int mask = 1; mask < (1 << n); ++mask) {
      std::vector<int> digits;
      for (int d = 0; d < n; ++d)
        if (mask >> d & 1) digits.push_back(d);
      Scalar sum(0);
      auto m0 = canonical_lowpass(DigitSystem(n, digits));
      for (const auto& [k, c] : m0.coefficients()) sum += c;
      CHECK(sum * sum == Scalar(static_cast<int>(digits.size())));
    }
}

TEST_CASE("filter banks") {
  auto c3 = build_bank(DigitSystem(3, {0, 2}));
  REQUIRE(c3.filters.size() == 3);
  CHECK(c3.filters[0] == poly({{0, r2}, {2, r2}}));
  CHECK(c3.filters[1] == LaurentPolynomial::monomial(1));
  CHECK(c3.filters[2] == poly({{0, r2}, {2, -r2}}));
  CHECK(c3.is_exact());

  auto c4 = build_bank(DigitSystem(4, {0, 2}));
  REQUIRE(c4.filters.size() == 4);
  CHECK(c4.filters[1] == LaurentPolynomial::monomial(1));
  CHECK(c4.filters[2] == LaurentPolynomial::monomial(3));
  CHECK(c4.filters[3] == poly({{0, r2}, {2, -r2}}));
  // The published ordering (m₀, (1−z²)/√2, z, z³) is a permutation of ours.
  auto reordered = permute_bank(c4, {0, 3, 1, 2});
  CHECK(reordered.filters[1] == poly({{0, r2}, {2, -r2}}));
  auto d = unitarity_defect(reordered);
  CHECK(d.exact);
  CHECK(d.value == 0.0);

  auto haar = build_bank(DigitSystem(2, {0, 1}));
  CHECK(haar.filters[1] == poly({{0, r2}, {1, -r2}}));
  CHECK_THROWS_AS(permute_bank(c4, {0, 0, 1, 2}), Error);
}

TEST_CASE("unitarity over every digit subset up to N = 8") {
  for (int n = 2; n <= 8; ++n)
    for (int mask = 1; mask < (1 << n); ++mask) {
      std::vector<int> digits;
      for (int d = 0; d < n; ++d)
        if (mask >> d & 1) digits.push_back(d);
      auto bank = build_bank(DigitSystem(n, digits));
      auto d = unitarity_defect(bank);
      CHECK(d.value < 1e-10);
      if (digits.size() <= 2) CHECK(d.exact);
    }
}

TEST_CASE("non-unitary bank is detected") {
  FilterBank bad{3, {poly({{0, r2}, {2, r2}}), LaurentPolynomial::monomial(1), LaurentPolynomial::monomial(2)}};
  auto d = unitarity_defect(bad);
  CHECK_FALSE(d.exact);
  CHECK(d.value >= 0.5);
  CHECK_THROWS_AS(unitarity_defect(bad, 0), Error);
}

TEST_CASE("pairing") {
  auto m0 = canonical_lowpass(DigitSystem(3, {0, 2}));
  CHECK(pairing(m0, m0, 3) == LaurentPolynomial::constant(1));
  CHECK(pairing(m0, m0.shifted(3), 3) == LaurentPolynomial::monomial(1));
  for (int n = 2; n <= 5; ++n) CHECK(pairing(LaurentPolynomial::monomial(1), LaurentPolynomial::constant(1), n).is_zero());

  Rng rng(5);
  for (int i = 0; i < 40; ++i) {
    auto m = testsupport::random_poly(rng, 6, 8, 2);
    auto m2 = testsupport::random_poly(rng, 6, 8, 2);
    int n = static_cast<int>(rng.range(2, 5));
    Scalar energy(0);
    for (const auto& [k, c] : m.coefficients()) energy += c.abs2();
    CHECK(pairing(m, m, n).coefficient(0) == energy);
    // Root-of-unity oracle.
    double t = rng.uniform();
    std::complex<double> s = 0.0;
    for (int r = 0; r < n; ++r) {
      auto w = testsupport::e_turns((t + r) / n);
      s += std::conj(testsupport::eval(m, w)) * testsupport::eval(m2, w);
    }
    CHECK(std::abs(pairing(m, m2, n).evaluate_turns(t) - s / static_cast<double>(n)) < 1e-9);
  }
}

TEST_CASE("loop action and connecting matrix") {
  auto bank = build_bank(DigitSystem(3, {0, 2}));
  auto id = LoopMatrix::identity(3);
  CHECK(loop_apply(id, bank).filters == bank.filters);
  CHECK(connecting_matrix(bank, bank).entries == id.entries);

  auto diag = id;
  diag.at(0, 0) = LaurentPolynomial::monomial(1);
  auto moved = loop_apply(diag, bank);
  CHECK(moved.filters[0] == bank.filters[0].shifted(3));
  CHECK(moved.filters[1] == bank.filters[1]);
  CHECK(moved.filters[2] == bank.filters[2]);
  auto a = connecting_matrix(bank, moved);
  CHECK(a.at(0, 0) == LaurentPolynomial::monomial(1));
  CHECK(a.entries == diag.entries);

  auto haar = build_bank(DigitSystem(2, {0, 1}));
  FilterBank neg{2, {-haar.filters[0], -haar.filters[1]}};
  auto minus = connecting_matrix(haar, neg);
  CHECK(minus.at(0, 0) == LaurentPolynomial::constant(-1));
  CHECK(minus.at(1, 1) == LaurentPolynomial::constant(-1));
  CHECK(minus.at(0, 1).is_zero());

  LoopMatrix rot{2, {LaurentPolynomial::constant(r2), LaurentPolynomial::constant(-r2), LaurentPolynomial::constant(r2),
                     LaurentPolynomial::constant(r2)}};
  auto rotated = loop_apply(rot, haar);
  auto d = unitarity_defect(rotated);
  CHECK(d.value == 0.0);
  CHECK(loop_unitarity_defect(rot) < 1e-15);

  LoopMatrix wrong = LoopMatrix::identity(2);
  CHECK_THROWS_AS(loop_apply(wrong, bank), Error);
  FilterBank bad{3, {bank.filters[0], bank.filters[0], bank.filters[2]}};
  CHECK_THROWS_AS(connecting_matrix(bad, bank), Error);
}

TEST_CASE("connecting matrix round trip for seeded unitary loops") {
  // A = P·diag(±z^{e_i})·P', degree ≤ 2, with P, P' signed permutations or a
  // Hadamard block; every entry stays in ℚ(√2).
  Rng rng(31);
  for (const auto& sys : {DigitSystem(3, {0, 2}), DigitSystem(4, {0, 2}), DigitSystem(2, {0, 1})}) {
    auto bank = build_bank(sys);
    const int n = sys.scale();
    for (int trial = 0; trial < 10; ++trial) {
      auto a = LoopMatrix::identity(n);
      for (int i = 0; i < n; ++i)
        a.at(i, i) = LaurentPolynomial::monomial(rng.range(-1, 1), Scalar(rng.range(0, 1) ? 1 : -1));
      LoopMatrix h = LoopMatrix::identity(n);
      int i = static_cast<int>(rng.range(0, n - 2));
      h.at(i, i) = LaurentPolynomial::constant(r2);
      h.at(i, i + 1) = LaurentPolynomial::constant(r2);
      h.at(i + 1, i) = LaurentPolynomial::constant(r2);
      h.at(i + 1, i + 1) = LaurentPolynomial::constant(-r2);
      LoopMatrix prod{n, std::vector<LaurentPolynomial>(static_cast<std::size_t>(n * n))};
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
          for (int k = 0; k < n; ++k) prod.at(r, c) += h.at(r, k) * a.at(k, c);
      auto bank2 = loop_apply(prod, bank);
      CHECK(unitarity_defect(bank2).value < 1e-12);
      auto back = connecting_matrix(bank, bank2);
      for (std::size_t e = 0; e < prod.entries.size(); ++e) {
        if (bank.is_exact()) {
          CHECK(back.entries[e] == prod.entries[e]);
        } else {
          CHECK(max_abs_difference(back.entries[e], prod.entries[e]) < 1e-10);
        }
      }
    }
  }
}
