#include "fractalmra/lattice.hpp"

#include <algorithm>
#include <unordered_map>

#include <json.hpp>

#include "fractalmra/error.hpp"
#include "fractalmra/parallel.hpp"
#include "fractalmra/transfer.hpp"

namespace fractalmra {

namespace {

LatticeIndex mul_idx(LatticeIndex a, LatticeIndex b) {
  LatticeIndex r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorKind::Range, "lattice index overflow");
  return r;
}

LatticeIndex add_idx(LatticeIndex a, LatticeIndex b) {
  LatticeIndex r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorKind::Range, "lattice index overflow");
  return r;
}

LatticeIndex pow_idx(std::int64_t base, std::int64_t e) {
  LatticeIndex r = 1;
  for (std::int64_t i = 0; i < e; ++i) r = mul_idx(r, base);
  return r;
}

LatticeIndex floor_mod_idx(LatticeIndex a, LatticeIndex m) {
  LatticeIndex r = a % m;
  return r < 0 ? r + m : r;
}

void require_same_system(const LatticeVector& v, const LatticeVector& w, const char* who) {
  if (!(v.system() == w.system()))
    throw Error(ErrorKind::Precondition, std::string(who) + ": vectors belong to different digit systems");
}

// One refinement step n → n + 1.
LatticeVector refine_once(const LatticeVector& v) {
  const auto& sys = v.system();
  const Scalar w = Scalar::inv_sqrt(static_cast<std::int64_t>(sys.count()));
  LatticeVector out(sys, v.resolution() + 1);
  for (const auto& [k, c] : v.entries()) {
    Scalar cw = c * w;
    LatticeIndex base = mul_idx(k, sys.scale());
    for (int a : sys.digits()) out.add(add_idx(base, a), cw);
  }
  return out;
}

}  // namespace

std::string index_to_string(LatticeIndex k) {
  if (k == 0) return "0";
  bool neg = k < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(k + 1)) + 1 : static_cast<unsigned __int128>(k);
  std::string s;
  while (u > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

LatticeVector::LatticeVector(DigitSystem sys, std::int64_t resolution) : sys_(std::move(sys)), res_(resolution) {}

LatticeVector::LatticeVector(DigitSystem sys, std::int64_t resolution, Map entries)
    : sys_(std::move(sys)), res_(resolution) {
  for (auto& [k, c] : entries) add(k, c);
}

Scalar LatticeVector::coefficient(LatticeIndex k) const {
  auto it = entries_.find(k);
  return it == entries_.end() ? Scalar(0) : it->second;
}

void LatticeVector::add(LatticeIndex k, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = entries_.try_emplace(k, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) entries_.erase(it);
}

bool LatticeVector::is_exact() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const auto& e) { return e.second.is_exact(); });
}

Scalar LatticeVector::norm2() const {
  Scalar acc(0);
  for (const auto& [k, c] : entries_) acc += c.abs2();
  return acc;
}

LatticeVector& LatticeVector::operator+=(const LatticeVector& o) {
  require_same_system(*this, o, "operator+");
  std::int64_t r = std::max(res_, o.res_);
  if (res_ != r) *this = refine_to(*this, r);
  const LatticeVector& b = o.res_ == r ? o : refine_to(o, r);
  for (const auto& [k, c] : b.entries()) add(k, c);
  return *this;
}

LatticeVector& LatticeVector::operator-=(const LatticeVector& o) { return *this += o.scaled(Scalar(-1)); }

LatticeVector LatticeVector::scaled(const Scalar& c) const {
  LatticeVector out(sys_, res_);
  for (const auto& [k, x] : entries_) out.add(k, x * c);
  return out;
}

LatticeVector basis_delta(const DigitSystem& sys, std::int64_t n, LatticeIndex k) {
  LatticeVector v(sys, n);
  v.add(k, Scalar(1));
  return v;
}

LatticeVector refine_to(const LatticeVector& v, std::int64_t m) {
  if (m < v.resolution())
    throw Error(ErrorKind::Coarsening, "refine_to: cannot coarsen from resolution " +
                                           std::to_string(v.resolution()) + " to " + std::to_string(m));
  LatticeVector out = v;
  while (out.resolution() < m) out = refine_once(out);
  return out;
}

bool same_vector(const LatticeVector& v, const LatticeVector& w) {
  if (!(v.system() == w.system())) return false;
  std::int64_t r = std::max(v.resolution(), w.resolution());
  return refine_to(v, r).entries() == refine_to(w, r).entries();
}

Scalar inner(const LatticeVector& v, const LatticeVector& w) {
  require_same_system(v, w, "inner");
  std::int64_t r = std::max(v.resolution(), w.resolution());
  LatticeVector a = refine_to(v, r);
  LatticeVector b = refine_to(w, r);
  Scalar acc(0);
  const bool a_small = a.size() <= b.size();
  const auto& small = a_small ? a.entries() : b.entries();
  const auto& large = a_small ? b.entries() : a.entries();
  for (const auto& [k, c] : small) {
    auto it = large.find(k);
    if (it == large.end()) continue;
    acc += a_small ? c.conj() * it->second : it->second.conj() * c;
  }
  return acc;
}

LatticeVector apply_shift(const LatticeVector& v, std::int64_t k) {
  if (k == 0) return v;
  const int n = v.system().scale();
  if (v.resolution() < 0) {
    LatticeIndex div = pow_idx(n, -v.resolution());
    if (k % div != 0) return apply_shift(refine_to(v, 0), k);
    LatticeVector out(v.system(), v.resolution());
    for (const auto& [j, c] : v.entries()) out.add(add_idx(j, k / div), c);
    return out;
  }
  LatticeIndex step = mul_idx(k, pow_idx(n, v.resolution()));
  LatticeVector out(v.system(), v.resolution());
  for (const auto& [j, c] : v.entries()) out.add(add_idx(j, step), c);
  return out;
}

LatticeVector apply_dilation(const LatticeVector& v, int direction) {
  if (direction != 1 && direction != -1)
    throw Error(ErrorKind::Precondition, "apply_dilation: direction must be +1 or -1");
  return LatticeVector(v.system(), v.resolution() - direction, v.entries());
}

LatticeVector apply_filter(const LatticeVector& v, const LaurentPolynomial& m) {
  const LatticeVector* src = &v;
  LatticeVector refined(v.system(), 0);
  if (v.resolution() < 0) {
    LatticeIndex div = pow_idx(v.system().scale(), -v.resolution());
    bool divisible = std::all_of(m.coefficients().begin(), m.coefficients().end(),
                                 [&](const auto& e) { return e.first % div == 0; });
    if (!divisible) {
      refined = refine_to(v, 0);
      src = &refined;
    }
  }
  LatticeVector out(v.system(), src->resolution());
  for (const auto& [k, a] : m.coefficients()) {
    LatticeVector shifted = apply_shift(*src, k);
    for (const auto& [j, c] : shifted.entries()) out.add(j, a * c);
  }
  return out;
}

LatticeVector cascade_step(const LatticeVector& v, const LaurentPolynomial& m) {
  return apply_dilation(apply_filter(v, m), -1);
}

LaurentPolynomial correlation(const LatticeVector& v, const LatticeVector& w) {
  require_same_system(v, w, "correlation");
  std::int64_t r = std::max<std::int64_t>({v.resolution(), w.resolution(), 0});
  LatticeVector a = refine_to(v, r);
  LatticeVector b = refine_to(w, r);
  const LatticeIndex step = pow_idx(v.system().scale(), r);
  std::map<LatticeIndex, std::vector<std::pair<LatticeIndex, const Scalar*>>> buckets;
  for (const auto& [j, c] : b.entries()) buckets[floor_mod_idx(j, step)].emplace_back(j, &c);
  LaurentPolynomial out;
  for (const auto& [j, c] : a.entries()) {
    auto it = buckets.find(floor_mod_idx(j, step));
    if (it == buckets.end()) continue;
    Scalar cc = c.conj();
    for (const auto& [j2, c2] : it->second) {
      LatticeIndex k = (j2 - j) / step;
      if (k > INT64_MAX || k < INT64_MIN) throw Error(ErrorKind::Range, "correlation: exponent overflow");
      out.add_to(static_cast<std::int64_t>(k), cc * *c2);
    }
  }
  return out;
}

LatticeVector cylinder_vector(const CylinderAddress& addr) {
  CylinderIndex ci = cylinder_translate_index(addr);
  Scalar w(1);
  const Scalar f = Scalar::inv_sqrt(static_cast<std::int64_t>(addr.system.count()));
  for (int i = 0; i < ci.depth; ++i) w *= f;
  LatticeVector v(addr.system, ci.depth);
  v.add(ci.index, w);
  return v;
}

std::vector<LatticeVector> wavelet_generators(const DigitSystem& sys) {
  FilterBank bank = build_bank(sys);
  LatticeVector phi = basis_delta(sys, 0, 0);
  std::vector<LatticeVector> out;
  for (std::size_t i = 1; i < bank.filters.size(); ++i) out.push_back(cascade_step(phi, bank.filters[i]));
  return out;
}

bool GramSection::is_exact_identity() const {
  const std::size_t n = labels.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const Scalar& x = at(a, b);
      if (!x.is_exact() || x != Scalar(a == b ? 1 : 0)) return false;
    }
  return true;
}

double GramSection::identity_distance() const {
  double worst = 0.0;
  const std::size_t n = labels.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      worst = std::max(worst, std::abs(at(a, b).to_complex() - (a == b ? 1.0 : 0.0)));
  return worst;
}

GramSection gram_section(const std::vector<LatticeVector>& generators, std::int64_t j_lo, std::int64_t j_hi,
                         std::int64_t k_lo, std::int64_t k_hi, std::size_t cap) {
  if (j_lo > j_hi || k_lo > k_hi) throw Error(ErrorKind::Precondition, "gram_section: empty range");
  double count = static_cast<double>(generators.size()) * static_cast<double>(j_hi - j_lo + 1) *
                 static_cast<double>(k_hi - k_lo + 1);
  if (count > static_cast<double>(cap))
    throw Error(ErrorKind::CapExceeded, "gram_section: section size exceeds cap " + std::to_string(cap));
  GramSection g;
  std::vector<LatticeVector> vecs;
  for (std::size_t i = 0; i < generators.size(); ++i)
    for (std::int64_t j = j_lo; j <= j_hi; ++j)
      for (std::int64_t k = k_lo; k <= k_hi; ++k) {
        LatticeVector v = apply_shift(generators[i], k);
        v = LatticeVector(v.system(), v.resolution() + j, v.entries());  // U⁻ʲ
        g.labels.push_back(GramLabel{static_cast<int>(i + 1), j, k});
        vecs.push_back(std::move(v));
      }
  if (vecs.empty()) return g;
  std::int64_t top = vecs.front().resolution();
  for (const auto& v : vecs) top = std::max(top, v.resolution());
  for (auto& v : vecs) v = refine_to(v, top);

  const std::size_t n = vecs.size();
  g.matrix.assign(n * n, Scalar(0));
  parallel_for(n, [&](std::size_t a) {
    for (std::size_t b = a; b < n; ++b) {
      Scalar x = inner(vecs[a], vecs[b]);
      if (b != a) g.matrix[b * n + a] = x.conj();
      g.matrix[a * n + b] = std::move(x);
    }
  });
  return g;
}

LaurentPolynomial filter_power(const LaurentPolynomial& m, int scale, int n, std::size_t cap) {
  if (n < 0) throw Error(ErrorKind::Precondition, "filter_power: n must be >= 0");
  LaurentPolynomial acc = LaurentPolynomial::constant(Scalar(1));
  std::int64_t dil = 1;
  for (int i = 0; i < n; ++i) {
    if (static_cast<double>(acc.size()) * static_cast<double>(m.size()) > static_cast<double>(cap))
      throw Error(ErrorKind::CapExceeded, "filter_power: support exceeds cap");
    acc = acc * m.upsample(dil);
    if (i + 1 < n) dil = checked_mul(dil, scale);
  }
  return acc;
}

std::vector<CascadeRow> cascade_experiment(const DigitSystem& sys, const LaurentPolynomial& m, int steps,
                                           std::size_t cap) {
  if (steps < 1) throw Error(ErrorKind::Precondition, "cascade_experiment: steps must be >= 1");
  if (steps > 12) throw Error(ErrorKind::CapExceeded, "cascade_experiment: steps exceed 12");
  std::vector<LatticeVector> iter{basis_delta(sys, 0, 0)};
  for (int n = 0; n < steps; ++n) {
    iter.push_back(cascade_step(iter.back(), m));
    if (iter.back().size() > cap) throw Error(ErrorKind::CapExceeded, "cascade_experiment: vector exceeds cap");
  }
  TransferOperator op = TransferOperator::from_filter(m, sys.scale());
  LaurentPolynomial a00 = pairing(canonical_lowpass(sys), m, sys.scale());
  std::vector<CascadeRow> rows;
  for (int n = 0; n < steps; ++n) {
    const auto& v = iter[static_cast<std::size_t>(n)];
    const auto& w = iter[static_cast<std::size_t>(n) + 1];
    Scalar ip = inner(v, w);
    Scalar t = a00.coefficient(0);
    bool ok = ip.is_exact() && t.is_exact() ? ip == t : approx_equal(ip, t, 1e-10);
    rows.push_back(CascadeRow{n, (v - w).norm2(), ip, t, ok});
    a00 = apply_transfer(op, a00);
  }
  return rows;
}

Scalar representation_limit(const DigitSystem& sys, const LaurentPolynomial& m0, int n, std::int64_t m) {
  if (n < 0) throw Error(ErrorKind::Precondition, "representation_limit: n must be >= 0");
  if (n > 12) throw Error(ErrorKind::CapExceeded, "representation_limit: n exceeds 12");
  LaurentPolynomial pw = filter_power(m0, sys.scale(), n);
  // v = Σ a_j Tʲ φ, so ⟨v | Tᵐ v⟩ = Σ_j conj(a_j) a_{j−m}.
  Scalar acc(0);
  for (const auto& [j, a] : pw.coefficients()) {
    Scalar b = pw.coefficient(j - m);
    if (!b.is_zero()) acc += a.conj() * b;
  }
  return acc;
}

std::string to_json(const LatticeVector& v) {
  using nlohmann::json;
  json entries = json::array();
  for (const auto& [k, c] : v.entries()) {
    json key = (k >= INT64_MIN && k <= INT64_MAX) ? json(static_cast<std::int64_t>(k)) : json(index_to_string(k));
    json val;
    if (c.is_exact())
      val = c.to_string();
    else if (c.to_complex().imag() == 0.0)
      val = c.to_complex().real();
    else
      val = json::array({c.to_complex().real(), c.to_complex().imag()});
    entries.push_back(json::array({key, val}));
  }
  json out{{"system", {{"scale", v.system().scale()}, {"digits", v.system().digits()}}},
           {"resolution", v.resolution()},
           {"entries", entries}};
  return out.dump();
}

LatticeVector lattice_from_json(const std::string& text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Precondition, std::string("lattice_from_json: ") + e.what());
  }
  DigitSystem sys(j.at("system").at("scale").get<int>(), j.at("system").at("digits").get<std::vector<int>>());
  LatticeVector v(sys, j.at("resolution").get<std::int64_t>());
  for (const auto& e : j.at("entries")) {
    LatticeIndex k = 0;
    if (e.at(0).is_string()) {
      const std::string s = e.at(0).get<std::string>();
      bool neg = !s.empty() && s[0] == '-';
      for (std::size_t i = neg ? 1 : 0; i < s.size(); ++i) k = add_idx(mul_idx(k, 10), s[i] - '0');
      if (neg) k = -k;
    } else {
      k = e.at(0).get<std::int64_t>();
    }
    const json& val = e.at(1);
    Scalar c = val.is_string()  ? Scalar::parse_exact(val.get<std::string>())
               : val.is_array() ? Scalar::approx({val.at(0).get<double>(), val.at(1).get<double>()})
                                : Scalar::approx({val.get<double>(), 0.0});
    v.add(k, c);
  }
  return v;
}

}  // namespace fractalmra
