#include <doctest.h>

#include "fractalmra/error.hpp"
#include "fractalmra/filterbank.hpp"
#include "fractalmra/transfer.hpp"
#include "support.hpp"

using namespace fractalmra;
using testsupport::Rng;

namespace {

LaurentPolynomial from_rationals(const std::map<std::int64_t, Rational>& m) {
  LaurentPolynomial p;
  for (const auto& [k, c] : m) p.add_to(k, Scalar(c));
  return p;
}

const DigitSystem kCantor3(3, {0, 2});
const DigitSystem kHaar(2, {0, 1});

}  // namespace

TEST_CASE("weights from filters") {
  auto w = weight_from_filter(canonical_lowpass(kCantor3));
  CHECK(w == from_rationals(testsupport::cantor3_weight()));
  CHECK(weight_from_filter(LaurentPolynomial::monomial(5)) == LaurentPolynomial::constant(1));
  CHECK(weight_from_filter(canonical_lowpass(kHaar)) ==
        from_rationals({{-1, Rational(1, 2)}, {0, Rational(1)}, {1, Rational(1, 2)}}));
  // Autocorrelation oracle on seeded filters.
  Rng rng(4);
  for (int i = 0; i < 30; ++i) {
    auto m = testsupport::random_poly(rng, 5, 6, 2);
    auto w2 = weight_from_filter(m);
    for (std::int64_t k = -13; k <= 13; ++k) {
      Scalar s(0);
      for (const auto& [j, c] : m.coefficients()) s += c.conj() * m.coefficient(j + k);
      CHECK(w2.coefficient(k) == s);
    }
  }
}

TEST_CASE("transfer operator on monomials") {
  auto op = TransferOperator::from_filter(canonical_lowpass(kCantor3), 3);
  CHECK(op.is_normalized());
  CHECK(op.block_half_width() == 1);
  CHECK(apply_transfer(op, LaurentPolynomial::constant(1)) == LaurentPolynomial::constant(1));
  CHECK(apply_transfer(op, LaurentPolynomial::monomial(2)) == LaurentPolynomial::constant(Scalar(Rational(1, 2))));
  CHECK(apply_transfer(op, LaurentPolynomial::monomial(1)) == LaurentPolynomial::monomial(1, Scalar(Rational(1, 2))));
  CHECK_THROWS_AS(TransferOperator(1, LaurentPolynomial::constant(1)), Error);
}

TEST_CASE("transfer agrees with the root-of-unity average") {
  Rng rng(12);
  for (const auto& sys : {kCantor3, DigitSystem(4, {0, 2}), DigitSystem(5, {0, 1, 3})}) {
    auto op = TransferOperator::from_filter(canonical_lowpass(sys), sys.scale());
    for (int i = 0; i < 20; ++i) {
      auto f = testsupport::random_poly(rng, 6, 12, 2);
      auto rf = apply_transfer(op, f);
      // Degree contraction.
      std::int64_t bound = (f.degree() + op.weight().degree()) / sys.scale();
      CHECK(rf.degree() <= bound);
      // Coefficient at 0 is Σ_b Ŵ(−b) f̂(b).
      Scalar c0(0);
      for (const auto& [b, c] : f.coefficients()) c0 += op.weight().coefficient(-b) * c;
      CHECK(rf.coefficient(0) == c0);
      double t = rng.uniform();
      CHECK(std::abs(rf.evaluate_turns(t) - testsupport::transfer_by_roots(op.weight(), f, sys.scale(), t)) < 1e-9);
    }
  }
}

TEST_CASE("positivity") {
  Rng rng(13);
  auto op = TransferOperator::from_filter(canonical_lowpass(kCantor3), 3);
  for (int i = 0; i < 20; ++i) {
    // |g|² is nonnegative on the torus.
    auto g = testsupport::random_poly(rng, 4, 6, 2);
    auto f = g.conj() * g;
    auto rf = apply_transfer(op, f);
    for (int s = 0; s < 64; ++s) CHECK(rf.evaluate_turns(s / 64.0).real() >= -1e-10);
  }
}

TEST_CASE("iterated weights") {
  auto op = TransferOperator::from_filter(canonical_lowpass(kCantor3), 3);
  CHECK(iterate_weight(op, 1) == op.weight());
  auto w2 = iterate_weight(op, 2);
  CHECK(w2.coefficient(0) == Scalar(1));
  CHECK(w2.coefficient(2) == Scalar(Rational(1, 2)));
  CHECK(w2.coefficient(6) == Scalar(Rational(1, 2)));
  CHECK(w2.coefficient(8) == Scalar(Rational(1, 4)));
  for (int n = 1; n <= 6; ++n)
    CHECK(iterate_weight(op, n) == from_rationals(testsupport::product_expansion(testsupport::cantor3_weight(), 3, n)));

  auto haar = TransferOperator::from_filter(canonical_lowpass(kHaar), 2);
  CHECK(iterate_weight(haar, 2).coefficient(1) == Scalar(Rational(3, 4)));
  CHECK_THROWS_AS(iterate_weight(op, 0), Error);
  CHECK_THROWS_AS(iterate_weight(op, 30, 1000), Error);
}

TEST_CASE("spectral block") {
  auto blk = spectral_block(TransferOperator::from_filter(canonical_lowpass(kCantor3), 3));
  CHECK(blk.half_width == 1);
  REQUIRE(blk.dimension == 3);
  CHECK(blk.at(0, 0) == Scalar(Rational(1, 2)));
  CHECK(blk.at(1, 1) == Scalar(1));
  CHECK(blk.at(2, 2) == Scalar(Rational(1, 2)));
  CHECK(std::abs(blk.eigenvalues[0] - 1.0) < 1e-12);
  CHECK(std::abs(blk.eigenvalues[1] - 0.5) < 1e-12);
  CHECK(std::abs(blk.eigenvalues[2] - 0.5) < 1e-12);
  CHECK(blk.unit_simple());
  CHECK(blk.constant_fixed);
  CHECK_FALSE(blk.other_peripheral);
  CHECK(blk.exact_fixed_dimension == std::optional<std::size_t>(1));

  auto flat = spectral_block(TransferOperator(4, LaurentPolynomial::constant(1)));
  CHECK(flat.half_width == 0);
  CHECK(flat.dimension == 1);
  CHECK(std::abs(flat.eigenvalues[0] - 1.0) < 1e-15);

  auto haar = spectral_block(TransferOperator::from_filter(canonical_lowpass(kHaar), 2));
  CHECK(haar.half_width == 1);
  CHECK(haar.constant_fixed);
  CHECK(haar.unit_multiplicity >= 1);

  // The block is R-invariant: applying R to z^b, |b| ≤ D, stays inside.
  for (const auto& sys : {DigitSystem(5, {0, 1, 4}), DigitSystem(4, {1, 3}), DigitSystem(7, {0, 3, 6})}) {
    auto op = TransferOperator::from_filter(canonical_lowpass(sys), sys.scale());
    auto d = op.block_half_width();
    for (std::int64_t b = -d; b <= d; ++b) CHECK(apply_transfer(op, LaurentPolynomial::monomial(b)).degree() <= d);
    auto sb = spectral_block(op);
    CHECK(sb.constant_fixed);
  }
  CHECK_THROWS_AS(spectral_block(TransferOperator::from_filter(canonical_lowpass(kCantor3), 3), 2), Error);
}

TEST_CASE("exact rank") {
  std::vector<Scalar> m{1, 2, 2, 4};
  CHECK(exact_rank(m, 2, 2) == std::optional<std::size_t>(1));
  std::vector<Scalar> s{Scalar::sqrt(2), 1, 1, Scalar::inv_sqrt(2)};
  CHECK(exact_rank(s, 2, 2) == std::optional<std::size_t>(1));
  std::vector<Scalar> a{Scalar::approx({1.0, 0.0}), 0, 0, 1};
  CHECK_FALSE(exact_rank(a, 2, 2).has_value());
}

TEST_CASE("Haar averages") {
  CHECK(apply_haar_average(3, LaurentPolynomial::monomial(6), 1) == LaurentPolynomial::monomial(2));
  CHECK(apply_haar_average(3, LaurentPolynomial::monomial(1), 1).is_zero());
  CHECK(apply_haar_average(4, LaurentPolynomial::constant(5), 3) == LaurentPolynomial::constant(5));
  CHECK_THROWS_AS(apply_haar_average(3, LaurentPolynomial::constant(1), -1), Error);
}
