#include "fractalmra/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_set>

#include "fractalmra/error.hpp"
#include "fractalmra/parallel.hpp"
#include "fractalmra/simd/kernels.hpp"

namespace fractalmra {

const char* to_string(MomentStatus s) {
  switch (s) {
    case MomentStatus::Stabilized: return "stabilized";
    case MomentStatus::Converged: return "converged";
    case MomentStatus::Unsettled: return "unsettled";
  }
  return "?";
}

const Scalar& MomentTable::at(std::int64_t n) const {
  auto it = entries.find(n);
  if (it == entries.end())
    throw Error(ErrorKind::MissingMoments, "moment table does not cover n = " + std::to_string(n));
  return it->second.value;
}

bool MomentTable::all_settled() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const auto& e) { return e.second.status != MomentStatus::Unsettled; });
}

bool MomentTable::all_exact() const {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.second.value.is_exact(); });
}

namespace {

// Indices of Ŵ⁽ᵏ⁾ reachable from `targets` through the coefficient recursion,
// with each node's (weight, child) terms.
struct Closure {
  std::vector<std::int64_t> nodes;  // sorted
  std::vector<std::vector<std::pair<const Scalar*, std::size_t>>> terms;
  std::size_t index(std::int64_t m) const {
    return static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), m) - nodes.begin());
  }
};

Closure build_closure(const TransferOperator& op, const std::vector<std::int64_t>& targets) {
  const int n = op.scale();
  std::unordered_set<std::int64_t> seen(targets.begin(), targets.end());
  std::vector<std::int64_t> stack(targets.begin(), targets.end());
  while (!stack.empty()) {
    std::int64_t m = stack.back();
    stack.pop_back();
    for (const auto& [j, w] : op.weight().coefficients()) {
      std::int64_t d = m - j;
      if (floor_mod(d, n) != 0) continue;
      std::int64_t child = d / n;
      if (seen.insert(child).second) stack.push_back(child);
    }
  }
  Closure c;
  c.nodes.assign(seen.begin(), seen.end());
  std::sort(c.nodes.begin(), c.nodes.end());
  c.terms.resize(c.nodes.size());
  for (std::size_t i = 0; i < c.nodes.size(); ++i)
    for (const auto& [j, w] : op.weight().coefficients()) {
      std::int64_t d = c.nodes[i] - j;
      if (floor_mod(d, n) != 0) continue;
      c.terms[i].emplace_back(&w, c.index(d / n));
    }
  return c;
}

// Limits of Ŵ⁽ᵏ⁾(c) for each coefficient index c in `targets`.
std::vector<MomentEntry> iterate_moments(const TransferOperator& op, const std::vector<std::int64_t>& targets,
                                         const MomentOptions& opt) {
  if (opt.max_iter < 2) throw Error(ErrorKind::Precondition, "moment: max_iter must be >= 2");
  Closure cl = build_closure(op, targets);
  const std::size_t size = cl.nodes.size();
  std::vector<std::size_t> where(targets.size());
  for (std::size_t t = 0; t < targets.size(); ++t) where[t] = cl.index(targets[t]);

  std::vector<Scalar> prev(size, Scalar(0));
  if (std::binary_search(cl.nodes.begin(), cl.nodes.end(), std::int64_t{0})) prev[cl.index(0)] = Scalar(1);
  std::vector<Scalar> cur(size);

  std::vector<MomentEntry> out(targets.size());
  std::vector<int> small_steps(targets.size(), 0);
  std::vector<std::complex<double>> cesaro_sum(targets.size());
  std::vector<std::complex<double>> cesaro_prev(targets.size());
  std::vector<int> cesaro_small(targets.size(), 0);

  int k = 1;
  for (; k <= opt.max_iter; ++k) {
    parallel_for(size, [&](std::size_t i) {
      Scalar acc(0);
      for (const auto& [w, child] : cl.terms[i])
        if (!prev[child].is_zero()) acc += *w * prev[child];
      cur[i] = std::move(acc);
    });

    bool exact_fixed = true;
    for (std::size_t i = 0; i < size && exact_fixed; ++i)
      exact_fixed = cur[i].is_exact() && cur[i] == prev[i];
    if (exact_fixed) {
      for (std::size_t t = 0; t < targets.size(); ++t)
        out[t] = MomentEntry{cur[where[t]], MomentStatus::Stabilized, k, false};
      return out;
    }

    bool all_converged = true;
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const Scalar& now = cur[where[t]];
      double delta = std::abs(now.to_complex() - prev[where[t]].to_complex());
      small_steps[t] = delta < opt.tol ? small_steps[t] + 1 : 0;
      all_converged = all_converged && small_steps[t] >= 2;

      cesaro_sum[t] += now.to_complex();
      std::complex<double> mean = cesaro_sum[t] / static_cast<double>(k);
      cesaro_small[t] = (k > 1 && std::abs(mean - cesaro_prev[t]) < opt.tol) ? cesaro_small[t] + 1 : 0;
      cesaro_prev[t] = mean;
    }
    std::swap(prev, cur);
    if (all_converged) break;
  }
  const int last = std::min(k, opt.max_iter);
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const Scalar& v = prev[where[t]];
    if (small_steps[t] >= 2)
      out[t] = MomentEntry{v, MomentStatus::Converged, last, false};
    else if (cesaro_small[t] >= 2)
      out[t] = MomentEntry{Scalar::approx(cesaro_prev[t]), MomentStatus::Converged, last, true};
    else
      out[t] = MomentEntry{v, MomentStatus::Unsettled, last, false};
  }
  return out;
}

std::vector<std::complex<double>> dense_coefficients(const LaurentPolynomial& m, std::int64_t& lowest) {
  lowest = m.min_exponent();
  std::vector<std::complex<double>> c(static_cast<std::size_t>(m.max_exponent() - lowest + 1));
  for (const auto& [k, a] : m.coefficients()) c[static_cast<std::size_t>(k - lowest)] = a.to_complex();
  return c;
}

Rational frac_part(const Rational& x) {
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  Rational r = x - Rational(fl);
  r.canonicalize();
  return r;
}

}  // namespace

MomentEntry moment(const TransferOperator& op, std::int64_t n, MomentOptions opt) {
  return iterate_moments(op, {-n}, opt).front();
}

MomentTable moment_table(const TransferOperator& op, std::int64_t range, MomentOptions opt) {
  if (range < 0) throw Error(ErrorKind::Precondition, "moment_table: range must be >= 0");
  std::vector<std::int64_t> targets;
  for (std::int64_t n = 0; n <= range; ++n) targets.push_back(-n);
  auto vals = iterate_moments(op, targets, opt);
  MomentTable t;
  t.scale = op.scale();
  t.weight = op.weight();
  t.range = range;
  for (std::int64_t n = 0; n <= range; ++n) {
    MomentEntry e = vals[static_cast<std::size_t>(n)];
    if (n > 0) {
      MomentEntry neg = e;
      neg.value = e.value.conj();
      t.entries[-n] = std::move(neg);
    }
    t.entries[n] = std::move(e);
  }
  return t;
}

CycleReport find_cycles(const LaurentPolynomial& m0, int scale, int max_length, double tol) {
  if (max_length < 1) throw Error(ErrorKind::Precondition, "find_cycles: L must be >= 1");
  if (scale < 2) throw Error(ErrorKind::Range, "find_cycles: N must be >= 2");
  if (m0.is_zero()) throw Error(ErrorKind::Precondition, "find_cycles: zero filter");
  std::int64_t top = 1;
  for (int l = 0; l < max_length; ++l) {
    top = checked_mul(top, scale);
    if (top - 1 > 1'000'000'000)
      throw Error(ErrorKind::Range, "find_cycles: N^L - 1 exceeds 1e9");
  }
  CycleReport report;
  report.max_length = max_length;

  // |m₀|² ≤ (Σ|a_k|)² everywhere; below N nothing can qualify.
  double l1 = 0.0;
  for (const auto& [k, a] : m0.coefficients()) l1 += std::abs(a.to_complex());
  if (l1 * l1 < scale - tol) return report;

  std::int64_t lowest = 0;
  auto coeffs = dense_coefficients(m0, lowest);
  constexpr std::size_t kChunk = 1 << 15;
  std::vector<double> xs(kChunk);
  std::vector<std::complex<double>> vals(kChunk);

  std::int64_t period_modulus = 1;
  for (int l = 1; l <= max_length; ++l) {
    period_modulus *= scale;
    const std::int64_t mod = period_modulus - 1;
    std::vector<std::int64_t> good;
    for (std::int64_t base = 0; base < mod; base += static_cast<std::int64_t>(kChunk)) {
      std::size_t cnt = static_cast<std::size_t>(std::min<std::int64_t>(kChunk, mod - base));
      for (std::size_t i = 0; i < cnt; ++i)
        xs[i] = static_cast<double>(base + static_cast<std::int64_t>(i)) / static_cast<double>(mod);
      simd::eval_torus(coeffs, lowest, std::span<const double>(xs.data(), cnt),
                       std::span<std::complex<double>>(vals.data(), cnt));
      for (std::size_t i = 0; i < cnt; ++i)
        if (std::abs(std::norm(vals[i]) - scale) <= tol) good.push_back(base + static_cast<std::int64_t>(i));
    }
    std::unordered_set<std::int64_t> visited;
    for (std::int64_t j : good) {
      if (visited.count(j)) continue;
      std::vector<std::int64_t> orbit{j};
      visited.insert(j);
      bool ok = true;
      std::int64_t cur = j;
      int period = 0;
      for (int step = 1; step <= l; ++step) {
        cur = static_cast<std::int64_t>((static_cast<__int128>(cur) * scale) % mod);
        if (cur == j) {
          period = step;
          break;
        }
        visited.insert(cur);
        if (!std::binary_search(good.begin(), good.end(), cur)) ok = false;
        orbit.push_back(cur);
      }
      if (!ok || period != l) continue;
      Cycle c;
      for (std::int64_t x : orbit) {
        Rational q(mpz_class(static_cast<long>(x)), mpz_class(static_cast<long>(mod)));
        q.canonicalize();
        c.angles.push_back(q);
        c.weight_values.push_back(std::norm(m0.evaluate_turns(static_cast<double>(x) / static_cast<double>(mod))));
      }
      report.cycles.push_back(std::move(c));
    }
  }
  std::sort(report.cycles.begin(), report.cycles.end(), [](const Cycle& a, const Cycle& b) {
    if (a.angles.size() != b.angles.size()) return a.angles.size() < b.angles.size();
    return a.angles.front() < b.angles.front();
  });
  return report;
}

std::complex<double> AtomicMeasure::moment(std::int64_t n) const {
  std::complex<double> acc{};
  for (const auto& theta : atoms) {
    Rational x = frac_part(theta * Rational(mpz_class(static_cast<long>(n))));
    acc += std::polar(1.0, 2.0 * std::numbers::pi * x.get_d());
  }
  return acc * weight.get_d();
}

Rational AtomicMeasure::mass_at(const Rational& theta) const {
  Rational x = frac_part(theta);
  for (const auto& a : atoms)
    if (a == x) return weight;
  return Rational(0);
}

SupportClassification classify_support(const LaurentPolynomial& m0, int scale, int max_length,
                                       std::int64_t moment_range) {
  TransferOperator op = TransferOperator::from_filter(m0, scale);
  if (!op.is_normalized()) throw Error(ErrorKind::NotNormalized, "classify_support: R1 != 1 for this filter");
  SupportClassification out;
  out.cycles = find_cycles(m0, scale, max_length);

  if (out.cycles.found()) {
    out.kind = SupportClassification::Kind::AtomicOnCycles;
    for (const auto& c : out.cycles.cycles) {
      AtomicMeasure mu;
      mu.atoms = c.angles;
      std::sort(mu.atoms.begin(), mu.atoms.end());
      mu.weight = Rational(mpz_class(1), mpz_class(static_cast<long>(c.angles.size())));
      mu.weight.canonicalize();
      double defect = invariance_defect(op, [&](std::int64_t n) { return mu.moment(n); }, 20);
      out.diagnostics.push_back("atomic measure on a cycle of length " + std::to_string(c.angles.size()) +
                                ", invariance defect " + std::to_string(defect));
      out.measures.push_back(std::move(mu));
    }
    if (out.measures.size() > 1)
      out.diagnostics.push_back("several cycles: each carries its own extreme invariant measure");
    return out;
  }

  out.kind = SupportClassification::Kind::FullSupport;
  out.moments = moment_table(op, moment_range);
  try {
    SpectralBlock blk = spectral_block(op);
    out.unique = blk.unit_simple() && !blk.other_peripheral;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::CapExceeded) throw;
    out.diagnostics.push_back("spectral block exceeds the dimension cap; uniqueness not decided");
  }
  out.diagnostics.push_back("no cycles up to length " + std::to_string(max_length) + ": support is the whole circle");

  const MomentTable& t = *out.moments;
  bool haar = true;
  for (const auto& [n, e] : t.entries)
    if (n != 0 && std::abs(e.value.to_complex()) > 1e-12) haar = false;
  if (haar) {
    out.diagnostics.push_back("all nonzero moments vanish: Haar measure");
    return out;
  }
  double tail_peak = 0.0;
  for (const auto& [n, e] : t.entries)
    if (n > moment_range / 2) tail_peak = std::max(tail_peak, std::abs(e.value.to_complex()));
  bool no_decay = tail_peak >= 0.1;

  WienerProfile wp = wiener_profile(t, moment_range);
  std::vector<double> ratios;
  for (std::int64_t pw = scale; pw <= moment_range; pw *= scale)
    ratios.push_back(wp.rows[static_cast<std::size_t>(pw - 1)].ratio.real());
  bool decreasing = ratios.size() >= 2;
  for (std::size_t i = 1; i < ratios.size(); ++i) decreasing = decreasing && ratios[i] < ratios[i - 1];

  if (no_decay)
    out.diagnostics.push_back("moments do not decay (max |moment| over the upper half of the range " +
                              std::to_string(tail_peak) + "): not absolutely continuous");
  if (decreasing) out.diagnostics.push_back("Wiener averages s_k/k decrease along powers of N: no atoms");
  if (no_decay && decreasing) out.diagnostics.push_back("singular, non-atomic");
  return out;
}

WienerProfile wiener_profile(const MomentTable& table, std::int64_t k_max) {
  WienerProfile wp;
  wp.s0 = table.at(0).abs2();
  Scalar s = wp.s0;
  wp.unsettled = table.entries.at(0).status == MomentStatus::Unsettled;
  for (std::int64_t k = 1; k <= k_max; ++k) {
    s += table.at(k).abs2();
    wp.unsettled = wp.unsettled || table.entries.at(k).status == MomentStatus::Unsettled;
    wp.rows.push_back(WienerRow{k, s, s / Scalar(k)});
  }
  return wp;
}

std::vector<RieszSample> riesz_samples(int n, std::int64_t grid) {
  if (n < 1) throw Error(ErrorKind::Precondition, "riesz_samples: n must be >= 1");
  if (grid < 2) throw Error(ErrorKind::Precondition, "riesz_samples: grid must be >= 2");
  if (grid > 50'000'000 || static_cast<double>(grid) * n > 2e8)
    throw Error(ErrorKind::CapExceeded, "riesz_samples: grid too large");
  const auto g = static_cast<std::size_t>(grid);
  const auto nf = static_cast<std::size_t>(n);
  // Factor k at t = 2πs/G is 1 + cos(2π r_k/G), r_k = 2·3ᵏ·s mod G.
  std::vector<double> turns(nf * g);
  for (std::size_t s = 0; s < g; ++s) {
    __int128 r = (2 * static_cast<__int128>(s)) % grid;
    for (std::size_t k = 0; k < nf; ++k) {
      r = (3 * r) % grid;
      turns[k * g + s] = static_cast<double>(r) / static_cast<double>(grid);
    }
  }
  std::vector<double> prod(g);
  simd::active_kernels().one_plus_cos_product(turns.data(), nf, prod.data(), g);
  std::vector<RieszSample> out(g);
  const double inv2pi = 0.5 / std::numbers::pi;
  for (std::size_t s = 0; s < g; ++s)
    out[s] = RieszSample{2.0 * std::numbers::pi * static_cast<double>(s) / static_cast<double>(grid), prod[s] * inv2pi};
  return out;
}

Scalar tail_measure(const MomentTable& table, int scale, int n, const LaurentPolynomial& f) {
  LaurentPolynomial g = apply_haar_average(scale, f, n);
  Scalar acc(0);
  for (const auto& [k, c] : g.coefficients()) acc += c * table.at(k);
  return acc;
}

FilterComparison compare_filters(const LaurentPolynomial& m0, const LaurentPolynomial& m0b, int scale,
                                 std::int64_t range, double tol, int max_length) {
  TransferOperator a = TransferOperator::from_filter(m0, scale);
  TransferOperator b = TransferOperator::from_filter(m0b, scale);
  if (!a.is_normalized() || !b.is_normalized())
    throw Error(ErrorKind::NotNormalized, "compare_filters: both filters must satisfy R1 = 1");
  if (find_cycles(m0, scale, max_length).found() || find_cycles(m0b, scale, max_length).found())
    throw Error(ErrorKind::Precondition,
                "compare_filters: a filter has cycles, the invariant measure is not unique; use classify");
  MomentTable ta = moment_table(a, range);
  MomentTable tb = moment_table(b, range);
  FilterComparison out;
  for (std::int64_t n = -range; n <= range; ++n) {
    double d = std::abs((ta.at(n) - tb.at(n)).to_complex());
    if (d > out.max_difference) out.max_difference = d;
    if (d > tol && !out.first_difference) out.first_difference = n;
  }
  out.same_measure = !out.first_difference.has_value();
  out.disjoint = !out.same_measure;
  if (a.weight().is_exact() && b.weight().is_exact())
    out.same_modulus = a.weight() == b.weight();
  else
    out.same_modulus = approx_equal(a.weight(), b.weight(), tol);
  return out;
}

double invariance_defect(const TransferOperator& op, const std::function<std::complex<double>(std::int64_t)>& nu,
                         std::int64_t max_exp) {
  double worst = 0.0;
  for (std::int64_t m = -max_exp; m <= max_exp; ++m) {
    LaurentPolynomial g = apply_transfer(op, LaurentPolynomial::monomial(m));
    std::complex<double> lhs{};
    for (const auto& [k, c] : g.coefficients()) lhs += c.to_complex() * nu(k);
    worst = std::max(worst, std::abs(lhs - nu(m)));
  }
  return worst;
}

}  // namespace fractalmra
