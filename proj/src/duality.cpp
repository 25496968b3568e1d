#include "fractalmra/duality.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <numbers>

#include <Eigen/SVD>

#include "fractalmra/error.hpp"
#include "fractalmra/filterbank.hpp"
#include "fractalmra/laurent.hpp"
#include "fractalmra/simd/kernels.hpp"

namespace fractalmra {

namespace {

using IntPoly = std::vector<std::int64_t>;  // ascending powers

void trim(IntPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Remainder of a modulo a monic divisor; quotient returned through q when given.
IntPoly poly_divmod(IntPoly a, const IntPoly& monic, IntPoly* q = nullptr) {
  trim(a);
  const std::size_t dm = monic.size() - 1;
  if (q) q->assign(a.size() >= monic.size() ? a.size() - dm : 1, 0);
  while (a.size() >= monic.size()) {
    std::int64_t lead = a.back();
    std::size_t shift = a.size() - monic.size();
    if (q) (*q)[shift] = lead;
    for (std::size_t i = 0; i < monic.size(); ++i) a[shift + i] -= lead * monic[i];
    trim(a);
  }
  return a;
}

const IntPoly& cyclotomic(std::int64_t n) {
  static std::map<std::int64_t, IntPoly> memo;
  if (auto it = memo.find(n); it != memo.end()) return it->second;
  IntPoly p(static_cast<std::size_t>(n) + 1, 0);
  p[0] = -1;
  p.back() = 1;
  for (std::int64_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    IntPoly q;
    poly_divmod(p, cyclotomic(d), &q);
    p = q;
    trim(p);
  }
  return memo[n] = p;
}

// Σ_k ζ_N^{e_k} == 0 in ℤ[ζ_N].
bool root_sum_vanishes(const std::vector<std::int64_t>& exps, std::int64_t n) {
  IntPoly s(static_cast<std::size_t>(n), 0);
  for (auto e : exps) ++s[static_cast<std::size_t>(floor_mod(e, n))];
  return poly_divmod(s, cyclotomic(n)).empty();
}

Rational frac_part(const Rational& x) {
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  Rational r = x - Rational(fl);
  r.canonicalize();
  return r;
}

void require_dual(const SpectralPair& pair, const char* who) {
  if (!pair.is_dual())
    throw Error(ErrorKind::Precondition, std::string(who) + ": the pair is not dual (defect " +
                                             std::to_string(pair.defect) + ")");
}

// Every Σ_{i<d} nᵢ Nⁱ with nᵢ ∈ B, unsorted.
std::vector<std::int64_t> all_digit_sums(const std::vector<std::int64_t>& dual, int scale, int digits,
                                         std::size_t cap) {
  std::vector<std::int64_t> level{0};
  std::int64_t place = 1;
  for (int d = 0; d < digits; ++d) {
    if (level.size() * dual.size() > cap)
      throw Error(ErrorKind::CapExceeded, "digit-sum enumeration exceeds cap " + std::to_string(cap));
    std::vector<std::int64_t> next;
    next.reserve(level.size() * dual.size());
    for (auto s : level)
      for (auto b : dual) next.push_back(checked_add(s, checked_mul(b, place)));
    level = std::move(next);
    if (d + 1 < digits) place = checked_mul(place, scale);
  }
  return level;
}

}  // namespace

double ComplexMatrix::identity_distance() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      worst = std::max(worst, std::abs(at(i, j) - (i == j ? 1.0 : 0.0)));
  return worst;
}

std::string root_of_unity_label(std::int64_t exponent, std::int64_t modulus) {
  std::int64_t e = floor_mod(exponent, modulus);
  if (e == 0) return "1";
  std::int64_t g = std::gcd(e, modulus);
  std::int64_t r = e / g, s = modulus / g;
  if (s == 2) return "-1";
  std::string base = "ζ" + std::to_string(s);
  return r == 1 ? base : base + "^" + std::to_string(r);
}

SpectralPair dual_matrix(const DigitSystem& sys, std::vector<std::int64_t> dual) {
  if (dual.size() != sys.count())
    throw Error(ErrorKind::Precondition, "dual_matrix: #B = " + std::to_string(dual.size()) +
                                             " but p = " + std::to_string(sys.count()));
  if (std::find(dual.begin(), dual.end(), 0) == dual.end())
    throw Error(ErrorKind::Precondition, "dual_matrix: B must contain 0");
  const std::size_t p = sys.count();
  const int n = sys.scale();
  SpectralPair out{sys, dual, ComplexMatrix(p, p)};
  const double norm = 1.0 / std::sqrt(static_cast<double>(p));
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t k = 0; k < p; ++k) {
      std::int64_t e = floor_mod(checked_mul(sys.digits()[j], dual[k]), n);
      auto z = std::polar(norm, 2.0 * std::numbers::pi * static_cast<double>(e) / n);
      out.matrix.at(j, k) = z;
      m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = z;
    }

  out.exact_unitary = true;
  for (std::size_t j = 0; j < p && out.exact_unitary; ++j)
    for (std::size_t l = j + 1; l < p && out.exact_unitary; ++l) {
      std::vector<std::int64_t> exps;
      for (auto b : dual) exps.push_back(checked_mul(sys.digits()[j] - sys.digits()[l], b));
      out.exact_unitary = root_sum_vanishes(exps, n);
    }

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    out.numeric_defect = std::max(out.numeric_defect, std::abs(svd.singularValues()[i] - 1.0));
  out.defect = out.exact_unitary ? 0.0 : out.numeric_defect;
  return out;
}

LambdaSet lambda_set(const SpectralPair& pair, std::size_t count, int signed_depth) {
  require_dual(pair, "lambda_set");
  if (count > 1'000'000) throw Error(ErrorKind::CapExceeded, "lambda_set: count exceeds 1e6");
  LambdaSet out;
  if (count == 0) return out;
  const int n = pair.system.scale();
  const auto& dual = pair.dual;
  out.signed_digits = std::any_of(dual.begin(), dual.end(), [](auto b) { return b < 0; });
  constexpr std::size_t kCap = 50'000'000;

  if (out.signed_digits) {
    out.depth = signed_depth;
    auto all = all_digit_sums(dual, n, signed_depth, kCap);
    std::sort(all.begin(), all.end(), [](auto a, auto b) {
      auto aa = a < 0 ? -a : a, ab = b < 0 ? -b : b;
      return aa != ab ? aa < ab : a < b;
    });
    all.erase(std::unique(all.begin(), all.end()), all.end());
    if (all.size() > count) all.resize(count);
    out.prefix = std::move(all);
    return out;
  }

  std::int64_t min_pos = 0;
  for (auto b : dual)
    if (b > 0 && (min_pos == 0 || b < min_pos)) min_pos = b;
  if (min_pos == 0) {
    out.prefix = {0};
    return out;
  }
  std::vector<std::int64_t> level{0};
  std::int64_t place = 1;  // N^d
  int d = 0;
  while (true) {
    if (level.size() >= count) {
      // Anything missing from `level` has a nonzero digit at position ≥ d.
      __int128 bound = static_cast<__int128>(min_pos) * place;
      if (bound > level[count - 1]) break;
    }
    if (level.size() * dual.size() > kCap)
      throw Error(ErrorKind::CapExceeded, "lambda_set: enumeration exceeds cap");
    std::vector<std::int64_t> next;
    next.reserve(level.size() * dual.size());
    for (auto s : level)
      for (auto b : dual) next.push_back(checked_add(s, checked_mul(b, place)));
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    level = std::move(next);
    place = checked_mul(place, n);
    ++d;
  }
  level.resize(count);
  out.prefix = std::move(level);
  out.depth = d;
  return out;
}

bool BCycle::trivial() const {
  return std::all_of(points.begin(), points.end(), [](const Rational& x) { return x == 0; });
}

bool BCycleReport::trivial_only() const {
  return !cycles.empty() && std::all_of(cycles.begin(), cycles.end(), [](const BCycle& c) { return c.trivial(); });
}

BCycleReport b_cycles(const SpectralPair& pair, int max_length, double tol, std::size_t cap) {
  if (max_length < 1) throw Error(ErrorKind::Precondition, "b_cycles: K must be >= 1");
  const std::size_t p = pair.dual.size();
  const int n = pair.system.scale();
  double total = 0.0;
  for (int k = 1; k <= max_length; ++k) total += std::pow(static_cast<double>(p), k);
  if (total > static_cast<double>(cap))
    throw Error(ErrorKind::CapExceeded, "b_cycles: p^K enumeration exceeds cap " + std::to_string(cap));
  LaurentPolynomial m0 = canonical_lowpass(pair.system);
  BCycleReport report;
  report.max_length = max_length;

  for (int k = 1; k <= max_length; ++k) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
    const mpz_class den = [&] {
      mpz_class v;
      mpz_ui_pow_ui(v.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
      return mpz_class(v - 1);
    }();
    while (true) {
      // Keep one primitive representative per rotation class: the strictly
      // smallest rotation.
      bool canonical = true;
      for (int r = 1; r < k && canonical; ++r) {
        auto rotated = idx;
        std::rotate(rotated.begin(), rotated.begin() + r, rotated.end());
        if (!(idx < rotated)) canonical = false;
      }
      if (canonical) {
        BCycle c;
        mpz_class num = 0;
        for (int i = 0; i < k; ++i) {
          c.word.push_back(pair.dual[idx[static_cast<std::size_t>(i)]]);
          num = num * n + static_cast<long>(c.word.back());
        }
        Rational xi(num, den);
        xi.canonicalize();
        bool ok = true;
        for (int i = 0; i < k; ++i) {
          c.points.push_back(xi);
          double w = std::norm(m0.evaluate_turns(frac_part(xi).get_d()));
          c.weight_values.push_back(w);
          if (std::abs(w - static_cast<double>(p)) > tol) ok = false;
          xi = xi * n - Rational(static_cast<long>(c.word[static_cast<std::size_t>(i)]));
          xi.canonicalize();
        }
        if (ok) report.cycles.push_back(std::move(c));
      }
      int pos = k - 1;
      while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == p) idx[static_cast<std::size_t>(pos--)] = 0;
      if (pos < 0) break;
    }
  }
  return report;
}

OnbPartialSums onb_defect(const SpectralPair& pair, double xi, std::size_t count, int depth) {
  require_dual(pair, "onb_defect");
  OnbPartialSums out;
  out.lambda = lambda_set(pair, count).prefix;
  HutchinsonTransform ht(pair.system, depth);
  std::vector<double> freqs;
  for (auto n : out.lambda) freqs.push_back(xi - static_cast<double>(n));
  auto vals = ht.evaluate(freqs);
  double acc = 0.0;
  for (const auto& v : vals) {
    double t = std::norm(v);
    out.terms.push_back(t);
    double next = acc + t;
    if (next < acc) out.monotone = false;
    acc = next;
    out.partial.push_back(acc);
    out.max_partial = std::max(out.max_partial, acc);
  }
  return out;
}

ComplexMatrix exponential_gram(const DigitSystem& sys, const std::vector<std::int64_t>& exponents, int depth) {
  const std::size_t n = exponents.size();
  ComplexMatrix g(n, n);
  HutchinsonTransform ht(sys, depth);
  std::vector<double> diffs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      diffs.push_back(static_cast<double>(checked_add(exponents[j], -exponents[i])));
  std::sort(diffs.begin(), diffs.end());
  diffs.erase(std::unique(diffs.begin(), diffs.end()), diffs.end());
  ht.evaluate(diffs);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      g.at(i, j) = ht(static_cast<double>(exponents[j] - exponents[i]));
  return g;
}

std::optional<std::array<std::size_t, 3>> find_orthogonal_triple(const ComplexMatrix& gram, double tol) {
  const std::size_t n = gram.rows;
  auto orth = [&](std::size_t i, std::size_t j) { return std::abs(gram.at(i, j)) <= tol; };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!orth(i, j)) continue;
      for (std::size_t k = j + 1; k < n; ++k)
        if (orth(i, k) && orth(j, k)) return std::array<std::size_t, 3>{i, j, k};
    }
  return std::nullopt;
}

double dual_transfer_eval(const SpectralPair& pair, const std::function<double(double)>& f, double xi, int n) {
  if (n < 0) throw Error(ErrorKind::Precondition, "dual_transfer_eval: n must be >= 0");
  if (n > 12) throw Error(ErrorKind::CapExceeded, "dual_transfer_eval: n exceeds 12");
  const int scale = pair.system.scale();
  const double inv_p = 1.0 / static_cast<double>(pair.dual.size());
  LaurentPolynomial m0 = canonical_lowpass(pair.system);
  // Branch point after `level` steps is (ξ − c)/N^level with integer c.
  std::function<double(int, std::int64_t, std::int64_t)> rec = [&](int level, std::int64_t c,
                                                                   std::int64_t place) -> double {
    double x = (xi - static_cast<double>(c)) / static_cast<double>(place);
    if (level == n) return f(x);
    double acc = 0.0;
    for (auto b : pair.dual) {
      std::int64_t c2 = checked_add(c, checked_mul(b, place));
      std::int64_t place2 = checked_mul(place, scale);
      double y = (xi - static_cast<double>(c2)) / static_cast<double>(place2);
      acc += std::norm(m0.evaluate_turns(y)) * rec(level + 1, c2, place2);
    }
    return inv_p * acc;
  };
  return rec(0, 0, 1);
}

double omega(const SpectralPair& pair, double xi, int digits, int depth) {
  if (digits < 0) throw Error(ErrorKind::Precondition, "omega: digits must be >= 0");
  auto lam = all_digit_sums(pair.dual, pair.system.scale(), digits, 10'000'000);
  std::vector<double> freqs;
  freqs.reserve(lam.size());
  for (auto n : lam) freqs.push_back(xi - static_cast<double>(n));
  std::vector<std::complex<double>> vals(freqs.size());
  simd::hutchinson(pair.system.digits(), pair.system.scale(), depth, freqs, vals);
  double acc = 0.0;
  for (const auto& v : vals) acc += std::norm(v);
  return acc;
}

}  // namespace fractalmra
