#include "fractalmra/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fractalmra/error.hpp"
#include "fractalmra/laurent.hpp"
#include "fractalmra/simd/kernels.hpp"

namespace fractalmra {

DigitSystem::DigitSystem(int scale, std::vector<int> digits) : scale_(scale), digits_(std::move(digits)) {
  if (scale_ < 2) throw Error(ErrorKind::Range, "scale N must be >= 2");
  if (digits_.empty()) throw Error(ErrorKind::InvalidDigit, "digit set must be nonempty");
  std::sort(digits_.begin(), digits_.end());
  if (std::adjacent_find(digits_.begin(), digits_.end()) != digits_.end())
    throw Error(ErrorKind::InvalidDigit, "digits must be distinct");
  for (int d : digits_)
    if (d < 0 || d >= scale_)
      throw Error(ErrorKind::InvalidDigit,
                  "digit " + std::to_string(d) + " outside [0, " + std::to_string(scale_ - 1) + "]");
}

bool DigitSystem::contains(int digit) const { return std::binary_search(digits_.begin(), digits_.end(), digit); }

std::vector<int> DigitSystem::gaps() const {
  std::vector<int> g;
  for (int d = 0; d < scale_; ++d)
    if (!contains(d)) g.push_back(d);
  return g;
}

std::string DigitSystem::to_string() const {
  std::ostringstream os;
  os << "(" << scale_ << ",{";
  for (std::size_t i = 0; i < digits_.size(); ++i) os << (i ? "," : "") << digits_[i];
  os << "})";
  return os.str();
}

double hausdorff_dimension(const DigitSystem& sys) {
  return std::log(static_cast<double>(sys.count())) / std::log(static_cast<double>(sys.scale()));
}

CylinderIndex cylinder_translate_index(const CylinderAddress& addr) {
  if (addr.word.empty()) throw Error(ErrorKind::Precondition, "cylinder depth must be >= 1");
  std::int64_t l = 0;
  for (int a : addr.word) {
    if (!addr.system.contains(a))
      throw Error(ErrorKind::InvalidDigit, "letter " + std::to_string(a) + " is not a digit of " +
                                               addr.system.to_string());
    l = checked_add(checked_mul(l, addr.system.scale()), a);
  }
  return {static_cast<int>(addr.word.size()), l};
}

Rational ifs_map(const DigitSystem& sys, int digit, const Rational& x) {
  Rational r = (x + digit) / sys.scale();
  r.canonicalize();
  return r;
}

std::vector<Rational> attractor_sample(const DigitSystem& sys, int depth, std::size_t cap) {
  if (depth < 0) throw Error(ErrorKind::Precondition, "depth must be >= 0");
  double count = std::pow(static_cast<double>(sys.count()), depth);
  if (count > static_cast<double>(cap))
    throw Error(ErrorKind::CapExceeded, "attractor_sample: p^n exceeds cap " + std::to_string(cap));
  // Integer numerators over N^n, then one division each.
  std::vector<mpz_class> level{mpz_class(0)};
  for (int n = 0; n < depth; ++n) {
    std::vector<mpz_class> next;
    next.reserve(level.size() * sys.count());
    for (const auto& v : level)
      for (int a : sys.digits()) next.push_back(v * sys.scale() + a);
    level = std::move(next);
  }
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(sys.scale()), static_cast<unsigned long>(depth));
  std::sort(level.begin(), level.end());
  std::vector<Rational> out;
  out.reserve(level.size());
  for (const auto& v : level) {
    Rational q(v, den);
    q.canonicalize();
    out.push_back(q);
  }
  return out;
}

namespace {

// Rounding can push a product of unit-modulus-bounded factors a hair past 1.
std::complex<double> clamp_unit(std::complex<double> v) {
  double r = std::abs(v);
  return r > 1.0 ? v / r : v;
}

double tail_bound_for(const DigitSystem& sys, double k, int depth) {
  double n = sys.scale();
  double tail = static_cast<double>(sys.max_digit()) * std::pow(n, -depth) / (n - 1.0);
  return std::expm1(2.0 * std::numbers::pi * std::abs(k) * tail);
}

}  // namespace

HutchinsonValue hutchinson_transform(const DigitSystem& sys, double k, int depth) {
  if (depth < 1) throw Error(ErrorKind::Precondition, "hutchinson_transform: depth must be >= 1");
  if (k == 0.0) return {{1.0, 0.0}, 0.0};
  std::complex<double> out;
  double freq = k;
  simd::hutchinson(sys.digits(), sys.scale(), depth, std::span<const double>(&freq, 1),
                   std::span<std::complex<double>>(&out, 1));
  return {clamp_unit(out), tail_bound_for(sys, k, depth)};
}

std::complex<double> lowpass_turns(const DigitSystem& sys, double theta) {
  std::complex<double> acc{};
  for (int a : sys.digits()) {
    double x = a * theta;
    x -= std::nearbyint(x);
    acc += std::polar(1.0, 2.0 * std::numbers::pi * x);
  }
  return acc / std::sqrt(static_cast<double>(sys.count()));
}

HutchinsonTransform::HutchinsonTransform(DigitSystem sys, int depth) : sys_(std::move(sys)), depth_(depth) {
  if (depth_ < 1) throw Error(ErrorKind::Precondition, "HutchinsonTransform: depth must be >= 1");
}

std::complex<double> HutchinsonTransform::operator()(double k) const {
  {
    std::lock_guard lock(mutex_);
    auto it = cache_.find(k);
    if (it != cache_.end()) return it->second;
  }
  auto v = hutchinson_transform(sys_, k, depth_).value;
  std::lock_guard lock(mutex_);
  cache_.emplace(k, v);
  return v;
}

std::vector<std::complex<double>> HutchinsonTransform::evaluate(std::span<const double> freqs) const {
  std::vector<std::complex<double>> out(freqs.size());
  std::vector<double> missing;
  {
    std::lock_guard lock(mutex_);
    for (double k : freqs)
      if (k != 0.0 && !cache_.contains(k)) missing.push_back(k);
  }
  std::sort(missing.begin(), missing.end());
  missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
  if (!missing.empty()) {
    std::vector<std::complex<double>> vals(missing.size());
    simd::hutchinson(sys_.digits(), sys_.scale(), depth_, missing, vals);
    std::lock_guard lock(mutex_);
    for (std::size_t i = 0; i < missing.size(); ++i) cache_.emplace(missing[i], clamp_unit(vals[i]));
  }
  std::lock_guard lock(mutex_);
  for (std::size_t i = 0; i < freqs.size(); ++i) out[i] = freqs[i] == 0.0 ? std::complex<double>(1.0) : cache_.at(freqs[i]);
  return out;
}

double HutchinsonTransform::tail_bound(double k) const { return tail_bound_for(sys_, k, depth_); }

}  // namespace fractalmra
