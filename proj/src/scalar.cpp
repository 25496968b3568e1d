#include "fractalmra/scalar.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "fractalmra/error.hpp"

namespace fractalmra {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidDigit: return "invalid-digit";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::CapExceeded: return "cap-exceeded";
    case ErrorKind::Range: return "range";
    case ErrorKind::ScaleMismatch: return "scale-mismatch";
    case ErrorKind::NotNormalized: return "not-normalized";
    case ErrorKind::Coarsening: return "coarsening-not-supported";
    case ErrorKind::MissingMoments: return "missing-moments";
  }
  return "unknown";
}

std::pair<std::int64_t, std::int64_t> squarefree_split(std::int64_t n) {
  if (n <= 0) throw Error(ErrorKind::Range, "squarefree_split: radicand must be positive");
  std::int64_t s = 1;
  std::int64_t r = n;
  for (std::int64_t f = 2; f * f <= r; ++f) {
    while (r % (f * f) == 0) {
      r /= f * f;
      s *= f;
    }
  }
  return {s, r};
}

Scalar Scalar::quadratic(const Rational& a, const Rational& b, std::int64_t d) {
  auto [s, r] = squarefree_split(d);
  Scalar x;
  x.a_ = a;
  x.b_ = b * Rational(static_cast<long>(s));
  x.d_ = r;
  x.normalize();
  return x;
}

Scalar Scalar::inv_sqrt(std::int64_t n) {
  // 1/√n = (1/n)·√n
  Rational b(mpz_class(1), mpz_class(static_cast<long>(n)));
  b.canonicalize();
  return quadratic(Rational(0), b, n);
}

Scalar Scalar::sqrt(std::int64_t n) { return quadratic(Rational(0), Rational(1), n); }

Scalar Scalar::approx(std::complex<double> z) {
  Scalar x;
  x.exact_ = false;
  x.z_ = z;
  return x;
}

void Scalar::normalize() {
  a_.canonicalize();
  b_.canonicalize();
  if (d_ == 1) {
    a_ += b_;
    b_ = 0;
  }
  if (sgn(b_) == 0) d_ = 1;
}

void Scalar::demote(std::complex<double> z) {
  exact_ = false;
  promoted_ = true;
  z_ = z;
  a_ = 0;
  b_ = 0;
  d_ = 1;
}

bool Scalar::is_zero() const {
  if (exact_) return sgn(a_) == 0 && sgn(b_) == 0;
  return z_ == std::complex<double>{};
}

std::complex<double> Scalar::to_complex() const {
  if (!exact_) return z_;
  double v = a_.get_d();
  if (sgn(b_) != 0) v += b_.get_d() * std::sqrt(static_cast<double>(d_));
  return {v, 0.0};
}

Scalar Scalar::conj() const {
  if (exact_) return *this;
  Scalar x = *this;
  x.z_ = std::conj(z_);
  return x;
}

Scalar Scalar::abs2() const {
  if (exact_) return (*this) * (*this);
  Scalar x = approx({std::norm(z_), 0.0});
  x.promoted_ = promoted_;
  return x;
}

int Scalar::sign() const {
  if (!exact_) {
    double r = z_.real();
    return (r > 0) - (r < 0);
  }
  int sa = sgn(a_);
  int sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // a and b√d have opposite signs: compare a² with d·b².
  Rational lhs = a_ * a_;
  Rational rhs = b_ * b_ * Rational(static_cast<long>(d_));
  int c = cmp(lhs, rhs);
  if (c == 0) return 0;
  return c > 0 ? sa : sb;
}

Scalar Scalar::operator-() const {
  Scalar x = *this;
  if (exact_) {
    x.a_ = -a_;
    x.b_ = -b_;
  } else {
    x.z_ = -z_;
  }
  return x;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (exact_ && o.exact_) {
    if (d_ == o.d_ || sgn(o.b_) == 0) {
      a_ += o.a_;
      b_ += o.b_;
      normalize();
      return *this;
    }
    if (sgn(b_) == 0) {
      a_ += o.a_;
      b_ = o.b_;
      d_ = o.d_;
      normalize();
      return *this;
    }
  }
  bool promoted = promoted_ || o.promoted_ || (exact_ && o.exact_);
  demote(to_complex() + o.to_complex());
  promoted_ = promoted;
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
  if (exact_ && o.exact_) {
    if (sgn(b_) == 0 || sgn(o.b_) == 0 || d_ == o.d_) {
      std::int64_t d = sgn(b_) != 0 ? d_ : o.d_;
      Rational na = a_ * o.a_ + b_ * o.b_ * Rational(static_cast<long>(d));
      Rational nb = a_ * o.b_ + b_ * o.a_;
      a_ = na;
      b_ = nb;
      d_ = d;
      normalize();
      return *this;
    }
  }
  bool promoted = promoted_ || o.promoted_;
  bool fresh = exact_ && o.exact_;
  demote(to_complex() * o.to_complex());
  promoted_ = promoted || fresh;
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (o.is_zero()) throw Error(ErrorKind::Range, "Scalar: division by zero");
  if (exact_ && o.exact_ && (sgn(b_) == 0 || sgn(o.b_) == 0 || d_ == o.d_)) {
    // 1/(c + e√d) = (c - e√d)/(c² - d e²)
    Rational c = o.a_;
    Rational e = o.b_;
    Rational norm = c * c - e * e * Rational(static_cast<long>(o.d_));
    Scalar inv = quadratic(c / norm, -e / norm, o.d_);
    return *this *= inv;
  }
  bool promoted = promoted_ || o.promoted_;
  bool fresh = exact_ && o.exact_;
  demote(to_complex() / o.to_complex());
  promoted_ = promoted || fresh;
  return *this;
}

bool operator==(const Scalar& x, const Scalar& y) {
  if (x.exact_ != y.exact_) return false;
  if (!x.exact_) return x.z_ == y.z_;
  return x.d_ == y.d_ && cmp(x.a_, y.a_) == 0 && cmp(x.b_, y.b_) == 0;
}

bool approx_equal(const Scalar& x, const Scalar& y, double tol) {
  if (x.is_exact() && y.is_exact()) {
    Scalar diff = x - y;
    if (diff.is_exact()) return diff.is_zero() || std::abs(diff.to_complex()) <= tol;
  }
  return std::abs(x.to_complex() - y.to_complex()) <= tol;
}

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string Scalar::to_string() const {
  if (!exact_) {
    if (z_.imag() == 0.0) return format_double(z_.real());
    std::string re = format_double(z_.real());
    std::string im = format_double(z_.imag());
    if (im.front() != '-') im = "+" + im;
    return re + im + "i";
  }
  if (sgn(b_) == 0) return a_.get_str();
  std::string rad = b_.get_str() + "√" + std::to_string(d_);
  if (sgn(a_) == 0) return rad;
  if (sgn(b_) > 0) rad = "+" + rad;
  return a_.get_str() + rad;
}

Scalar Scalar::parse_exact(const std::string& text) {
  const std::string root = "√";
  auto pos = text.find(root);
  if (pos == std::string::npos) return Scalar(Rational(text));
  std::int64_t d = std::stoll(text.substr(pos + root.size()));
  std::string head = text.substr(0, pos);
  // head is "b" or "a+b" / "a-b"; the split sign is the last +/- not at index 0.
  std::size_t split = std::string::npos;
  for (std::size_t i = head.size(); i-- > 1;) {
    if (head[i] == '+' || head[i] == '-') {
      split = i;
      break;
    }
  }
  Rational a(0);
  Rational b;
  if (split == std::string::npos) {
    b = Rational(head);
  } else {
    a = Rational(head.substr(0, split));
    std::string bs = head.substr(split);
    if (bs.front() == '+') bs.erase(0, 1);
    b = Rational(bs);
  }
  a.canonicalize();
  b.canonicalize();
  return quadratic(a, b, d);
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

}  // namespace fractalmra
