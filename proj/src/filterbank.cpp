#include "fractalmra/filterbank.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "fractalmra/error.hpp"

namespace fractalmra {

namespace {

constexpr double kNoiseFloor = 1e-14;

double hermitian_norm(const Eigen::MatrixXcd& h) {
  if (h.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Polyphase component r of m at z: Σ_q a_{Nq + r} z^q.
std::complex<double> polyphase(const LaurentPolynomial& m, int scale, int r, double turns) {
  std::complex<double> acc{};
  for (const auto& [k, c] : m.coefficients()) {
    if (floor_mod(k, scale) != r) continue;
    std::int64_t q = (k - r) / scale;
    double x = static_cast<double>(q) * turns;
    x -= std::nearbyint(x);
    acc += c.to_complex() * std::polar(1.0, 2.0 * std::numbers::pi * x);
  }
  return acc;
}

}  // namespace

bool FilterBank::is_exact() const {
  return std::all_of(filters.begin(), filters.end(), [](const auto& f) { return f.is_exact(); });
}

LoopMatrix LoopMatrix::identity(int scale) {
  LoopMatrix a;
  a.scale = scale;
  a.entries.resize(static_cast<std::size_t>(scale * scale));
  for (int j = 0; j < scale; ++j) a.at(j, j) = LaurentPolynomial::constant(Scalar(1));
  return a;
}

LaurentPolynomial canonical_lowpass(const DigitSystem& sys) {
  Scalar w = Scalar::inv_sqrt(static_cast<std::int64_t>(sys.count()));
  LaurentPolynomial m;
  for (int a : sys.digits()) m.set(a, w);
  return m;
}

LaurentPolynomial equal_weight_filter(const std::vector<std::int64_t>& taps) {
  if (taps.empty()) throw Error(ErrorKind::Precondition, "equal_weight_filter: empty tap set");
  Scalar w = Scalar::inv_sqrt(static_cast<std::int64_t>(taps.size()));
  LaurentPolynomial m;
  for (auto k : taps) m.add_to(k, w);
  return m;
}

FilterBank build_bank(const DigitSystem& sys) {
  const int n = sys.scale();
  const auto p = static_cast<std::int64_t>(sys.count());
  FilterBank bank;
  bank.scale = n;
  bank.filters.push_back(canonical_lowpass(sys));
  for (int d : sys.gaps()) bank.filters.push_back(LaurentPolynomial::monomial(d));
  Scalar w = Scalar::inv_sqrt(p);
  for (std::int64_t k = 1; k < p; ++k) {
    LaurentPolynomial m;
    for (std::int64_t i = 0; i < p; ++i) {
      std::int64_t e = (k * i) % p;  // η^{k i}
      Scalar eta;
      if (e == 0)
        eta = Scalar(1);
      else if (2 * e == p)
        eta = Scalar(-1);
      else
        eta = Scalar::approx(std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(p)));
      m.set(sys.digits()[static_cast<std::size_t>(i)], w * eta);
    }
    bank.filters.push_back(std::move(m));
  }
  return bank;
}

FilterBank permute_bank(const FilterBank& bank, const std::vector<int>& perm) {
  if (perm.size() != bank.filters.size()) throw Error(ErrorKind::Precondition, "permutation size mismatch");
  std::vector<int> check = perm;
  std::sort(check.begin(), check.end());
  for (std::size_t i = 0; i < check.size(); ++i)
    if (check[i] != static_cast<int>(i)) throw Error(ErrorKind::Precondition, "not a permutation");
  FilterBank out;
  out.scale = bank.scale;
  for (int i : perm) out.filters.push_back(bank.filters[static_cast<std::size_t>(i)]);
  return out;
}

LaurentPolynomial pairing(const LaurentPolynomial& m, const LaurentPolynomial& m2, int scale) {
  LaurentPolynomial out;
  for (const auto& [k, a] : m.coefficients()) {
    Scalar ac = a.conj();
    for (const auto& [l, b] : m2.coefficients()) {
      std::int64_t diff = l - k;
      if (diff % scale != 0) continue;
      out.add_to(diff / scale, ac * b);
    }
  }
  return out.pruned(kNoiseFloor);
}

UnitarityDefect unitarity_defect(const FilterBank& bank, int samples) {
  if (samples < 1) throw Error(ErrorKind::Precondition, "unitarity_defect: samples must be >= 1");
  const int n = bank.scale;
  const auto rows = static_cast<int>(bank.filters.size());
  UnitarityDefect out;

  bool exact_ok = bank.is_exact() && rows == n;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < rows; ++j) {
      LaurentPolynomial g = pairing(bank.filters[static_cast<std::size_t>(j)], bank.filters[static_cast<std::size_t>(i)], n);
      if (i == j) g.add_to(0, Scalar(-1));
      for (const auto& [k, c] : g.coefficients()) {
        out.coefficient_residual = std::max(out.coefficient_residual, std::abs(c.to_complex()));
        exact_ok = exact_ok && c.is_exact() && c.is_zero();
      }
      if (!g.is_exact()) exact_ok = false;
    }
  }
  if (exact_ok && out.coefficient_residual == 0.0) {
    out.exact = true;
    return out;
  }

  Eigen::MatrixXcd p(rows, n);
  for (int s = 0; s < samples; ++s) {
    double turns = static_cast<double>(s) / samples;
    for (int i = 0; i < rows; ++i)
      for (int r = 0; r < n; ++r) p(i, r) = polyphase(bank.filters[static_cast<std::size_t>(i)], n, r, turns);
    Eigen::MatrixXcd h = p * p.adjoint() - Eigen::MatrixXcd::Identity(rows, rows);
    out.sampled_residual = std::max(out.sampled_residual, hermitian_norm(h));
  }
  out.value = std::max(out.coefficient_residual, out.sampled_residual);
  return out;
}

FilterBank loop_apply(const LoopMatrix& a, const FilterBank& bank) {
  if (a.scale != bank.scale || static_cast<int>(bank.filters.size()) != bank.scale)
    throw Error(ErrorKind::ScaleMismatch, "loop_apply: loop scale does not match bank scale");
  FilterBank out;
  out.scale = bank.scale;
  for (int j = 0; j < a.scale; ++j) {
    LaurentPolynomial m;
    for (int k = 0; k < a.scale; ++k) m += a.at(j, k).upsample(a.scale) * bank.filters[static_cast<std::size_t>(k)];
    out.filters.push_back(m.pruned(kNoiseFloor));
  }
  return out;
}

LoopMatrix connecting_matrix(const FilterBank& bank, const FilterBank& bank2, double tol) {
  if (bank.scale != bank2.scale || bank.filters.size() != bank2.filters.size())
    throw Error(ErrorKind::ScaleMismatch, "connecting_matrix: banks have different scales");
  for (const FilterBank* b : {&bank, &bank2}) {
    auto d = unitarity_defect(*b);
    if (!d.exact && d.value > tol)
      throw Error(ErrorKind::Precondition, "connecting_matrix: input bank is not unitary (defect " +
                                               std::to_string(d.value) + ")");
  }
  LoopMatrix a;
  a.scale = bank.scale;
  a.entries.resize(static_cast<std::size_t>(a.scale * a.scale));
  for (int j = 0; j < a.scale; ++j)
    for (int k = 0; k < a.scale; ++k)
      a.at(j, k) = pairing(bank.filters[static_cast<std::size_t>(k)], bank2.filters[static_cast<std::size_t>(j)], a.scale);
  return a;
}

double loop_unitarity_defect(const LoopMatrix& a, int samples) {
  double worst = 0.0;
  Eigen::MatrixXcd m(a.scale, a.scale);
  for (int s = 0; s < samples; ++s) {
    double turns = static_cast<double>(s) / samples;
    for (int j = 0; j < a.scale; ++j)
      for (int k = 0; k < a.scale; ++k) m(j, k) = a.at(j, k).evaluate_turns(turns);
    worst = std::max(worst, hermitian_norm(m * m.adjoint() - Eigen::MatrixXcd::Identity(a.scale, a.scale)));
  }
  return worst;
}

}  // namespace fractalmra
