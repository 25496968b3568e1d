#include "fractalmra/transfer.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "fractalmra/error.hpp"

namespace fractalmra {

LaurentPolynomial weight_from_filter(const LaurentPolynomial& m0) {
  LaurentPolynomial w = m0.conj() * m0;
  return w.pruned(1e-15);
}

TransferOperator::TransferOperator(int scale, LaurentPolynomial weight) : scale_(scale), weight_(std::move(weight)) {
  if (scale_ < 2) throw Error(ErrorKind::Range, "transfer operator scale must be >= 2");
}

TransferOperator TransferOperator::from_filter(const LaurentPolynomial& m0, int scale) {
  return TransferOperator(scale, weight_from_filter(m0));
}

std::int64_t TransferOperator::block_half_width() const {
  std::int64_t deg = weight_.degree();
  std::int64_t den = scale_ - 1;
  return (deg + den - 1) / den;
}

bool TransferOperator::is_normalized(double tol) const {
  LaurentPolynomial r1 = weight_.downsample(scale_);
  LaurentPolynomial one = LaurentPolynomial::constant(Scalar(1));
  if (r1.is_exact()) return r1 == one;
  return approx_equal(r1, one, tol);
}

LaurentPolynomial apply_transfer(const TransferOperator& op, const LaurentPolynomial& f) {
  // Rf = downsample_N(W · f)
  const int n = op.scale();
  LaurentPolynomial out;
  for (const auto& [j, w] : op.weight().coefficients())
    for (const auto& [b, c] : f.coefficients()) {
      std::int64_t e = checked_add(j, b);
      if (e % n == 0) out.add_to(e / n, w * c);
    }
  return out;
}

LaurentPolynomial iterate_weight(const TransferOperator& op, int n, std::size_t cap) {
  if (n < 1) throw Error(ErrorKind::Precondition, "iterate_weight: n must be >= 1");
  LaurentPolynomial acc = op.weight();
  std::int64_t dil = 1;
  for (int k = 1; k < n; ++k) {
    dil = checked_mul(dil, op.scale());
    double projected = static_cast<double>(acc.size()) * static_cast<double>(op.weight().size());
    if (projected > static_cast<double>(cap))
      throw Error(ErrorKind::CapExceeded, "iterate_weight: support would exceed cap " + std::to_string(cap));
    acc = acc * op.weight().upsample(dil);
  }
  return acc;
}

LaurentPolynomial apply_haar_average(int scale, const LaurentPolynomial& f, int n) {
  if (n < 0) throw Error(ErrorKind::Precondition, "apply_haar_average: n must be >= 0");
  return f.downsample(checked_pow(scale, n));
}

bool SpectralBlock::unit_simple() const {
  if (unit_multiplicity != 1) return false;
  return !exact_fixed_dimension || *exact_fixed_dimension == 1;
}

std::optional<std::size_t> exact_rank(std::vector<Scalar> a, std::size_t rows, std::size_t cols) {
  for (const auto& x : a)
    if (!x.is_exact()) return std::nullopt;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t piv = rank;
    while (piv < rows && a[piv * cols + col].is_zero()) ++piv;
    if (piv == rows) continue;
    if (piv != rank)
      for (std::size_t c = 0; c < cols; ++c) std::swap(a[piv * cols + c], a[rank * cols + c]);
    Scalar pivot = a[rank * cols + col];
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (a[r * cols + col].is_zero()) continue;
      Scalar f = a[r * cols + col] / pivot;
      for (std::size_t c = col; c < cols; ++c) a[r * cols + c] -= f * a[rank * cols + c];
      if (!a[r * cols + col].is_exact()) return std::nullopt;
    }
    ++rank;
  }
  for (const auto& x : a)
    if (!x.is_exact()) return std::nullopt;
  return rank;
}

SpectralBlock spectral_block(const TransferOperator& op, std::size_t dimension_cap, double peripheral_tol) {
  SpectralBlock blk;
  blk.half_width = op.block_half_width();
  const std::int64_t d = blk.half_width;
  blk.dimension = static_cast<std::size_t>(2 * d + 1);
  if (blk.dimension > dimension_cap)
    throw Error(ErrorKind::CapExceeded, "spectral_block: dimension " + std::to_string(blk.dimension) +
                                            " exceeds cap " + std::to_string(dimension_cap));
  const std::size_t dim = blk.dimension;
  blk.matrix.assign(dim * dim, Scalar(0));
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::int64_t row = -d; row <= d; ++row)
    for (std::int64_t col = -d; col <= d; ++col) {
      Scalar v = op.weight().coefficient(op.scale() * row - col);
      auto i = static_cast<std::size_t>(row + d);
      auto j = static_cast<std::size_t>(col + d);
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v.to_complex();
      blk.matrix[i * dim + j] = std::move(v);
    }

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) blk.eigenvalues.push_back(es.eigenvalues()[i]);
  std::sort(blk.eigenvalues.begin(), blk.eigenvalues.end(), [](auto x, auto y) {
    double ax = std::abs(x), ay = std::abs(y);
    if (ax != ay) return ax > ay;
    return std::arg(x) < std::arg(y);
  });
  for (auto lambda : blk.eigenvalues) {
    if (std::abs(lambda - 1.0) <= peripheral_tol)
      ++blk.unit_multiplicity;
    else if (std::abs(lambda) >= 1.0 - peripheral_tol)
      blk.other_peripheral = true;
  }

  // Column of b = 0 is the image of 1̂.
  blk.constant_fixed = true;
  for (std::size_t i = 0; i < dim; ++i) {
    Scalar expect = (i == static_cast<std::size_t>(d)) ? Scalar(1) : Scalar(0);
    const Scalar& got = blk.matrix[i * dim + static_cast<std::size_t>(d)];
    bool same = got.is_exact() ? got == expect : approx_equal(got, expect, 1e-12);
    blk.constant_fixed = blk.constant_fixed && same;
  }

  std::vector<Scalar> shifted = blk.matrix;
  for (std::size_t i = 0; i < dim; ++i) shifted[i * dim + i] -= Scalar(1);
  if (auto rank = exact_rank(std::move(shifted), dim, dim)) blk.exact_fixed_dimension = dim - *rank;
  return blk;
}

}  // namespace fractalmra
