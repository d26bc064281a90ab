#include "isosurf/jet.hpp"

#include <algorithm>
#include <cmath>

#include "isosurf/errors.hpp"

namespace isosurf {

namespace {

void check_order(int order) {
  if (order < 0 || order > Jet2::kMaxOrder) {
    throw ValidationError("jet order " + std::to_string(order) + " outside [0, " +
                          std::to_string(Jet2::kMaxOrder) + "]");
  }
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

Jet2::Jet2(int order, double value) : order_(order) {
  check_order(order);
  c_[0] = value;
}

Jet2 Jet2::variable_u(int order, double u0) {
  Jet2 j(order, u0);
  if (order >= 1) j.coeff(1, 0) = 1.0;
  return j;
}

Jet2 Jet2::variable_v(int order, double v0) {
  Jet2 j(order, v0);
  if (order >= 1) j.coeff(0, 1) = 1.0;
  return j;
}

double Jet2::derivative(int a, int b) const {
  if (a < 0 || b < 0 || a + b > order_) {
    throw ValidationError("derivative order exceeds jet order");
  }
  return factorial(a) * factorial(b) * coeff(a, b);
}

Jet2 Jet2::diff_u() const {
  if (order_ == 0) throw ValidationError("cannot differentiate an order-0 jet");
  Jet2 r(order_ - 1);
  for (int d = 0; d < order_; ++d) {
    for (int b = 0; b <= d; ++b) {
      const int a = d - b;
      r.coeff(a, b) = (a + 1) * coeff(a + 1, b);
    }
  }
  return r;
}

Jet2 Jet2::diff_v() const {
  if (order_ == 0) throw ValidationError("cannot differentiate an order-0 jet");
  Jet2 r(order_ - 1);
  for (int d = 0; d < order_; ++d) {
    for (int b = 0; b <= d; ++b) {
      const int a = d - b;
      r.coeff(a, b) = (b + 1) * coeff(a, b + 1);
    }
  }
  return r;
}

Jet2 Jet2::truncated(int order) const {
  Jet2 r(std::min(order, order_));
  std::copy_n(c_.begin(), size_for(r.order_), r.c_.begin());
  return r;
}

Jet2& Jet2::operator+=(const Jet2& o) {
  order_ = std::min(order_, o.order_);
  const std::size_t n = size_for(order_);
  for (std::size_t i = 0; i < n; ++i) c_[i] += o.c_[i];
  std::fill(c_.begin() + static_cast<std::ptrdiff_t>(n), c_.end(), 0.0);
  return *this;
}

Jet2& Jet2::operator-=(const Jet2& o) {
  order_ = std::min(order_, o.order_);
  const std::size_t n = size_for(order_);
  for (std::size_t i = 0; i < n; ++i) c_[i] -= o.c_[i];
  std::fill(c_.begin() + static_cast<std::ptrdiff_t>(n), c_.end(), 0.0);
  return *this;
}

Jet2& Jet2::operator*=(const Jet2& o) {
  *this = *this * o;
  return *this;
}

Jet2& Jet2::operator+=(double s) {
  c_[0] += s;
  return *this;
}

Jet2& Jet2::operator-=(double s) {
  c_[0] -= s;
  return *this;
}

Jet2& Jet2::operator*=(double s) {
  const std::size_t n = size_for(order_);
  for (std::size_t i = 0; i < n; ++i) c_[i] *= s;
  return *this;
}

Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }

Jet2 operator*(const Jet2& x, const Jet2& y) {
  const int K = std::min(x.order(), y.order());
  Jet2 r(K);
  for (int d1 = 0; d1 <= K; ++d1) {
    for (int b1 = 0; b1 <= d1; ++b1) {
      const double xc = x.coeff(d1 - b1, b1);
      if (xc == 0.0) continue;
      for (int d2 = 0; d1 + d2 <= K; ++d2) {
        for (int b2 = 0; b2 <= d2; ++b2) {
          r.coeff(d1 - b1 + d2 - b2, b1 + b2) += xc * y.coeff(d2 - b2, b2);
        }
      }
    }
  }
  return r;
}

Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }
Jet2 operator+(Jet2 a, double s) { return a += s; }
Jet2 operator+(double s, Jet2 a) { return a += s; }
Jet2 operator-(Jet2 a, double s) { return a -= s; }
Jet2 operator-(double s, const Jet2& a) { return -a + s; }
Jet2 operator*(Jet2 a, double s) { return a *= s; }
Jet2 operator*(double s, Jet2 a) { return a *= s; }
Jet2 operator/(Jet2 a, double s) { return a *= 1.0 / s; }
Jet2 operator-(Jet2 a) { return a *= -1.0; }

Jet2 compose(const Jet2& x, const std::vector<double>& derivatives) {
  const int K = x.order();
  if (static_cast<int>(derivatives.size()) < K + 1) {
    throw ValidationError("compose needs derivatives up to the jet order");
  }
  Jet2 h = x;
  h[0] = 0.0;
  // Horner in the nilpotent increment h: sum_k f^(k)(x0)/k! h^k.
  Jet2 acc(K, derivatives[static_cast<std::size_t>(K)] / factorial(K));
  for (int k = K - 1; k >= 0; --k) {
    acc = acc * h;
    acc[0] += derivatives[static_cast<std::size_t>(k)] / factorial(k);
  }
  return acc;
}

Jet2 sin(const Jet2& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  std::vector<double> d(static_cast<std::size_t>(x.order() + 1));
  const double cycle[4] = {s, c, -s, -c};
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = cycle[k % 4];
  return compose(x, d);
}

Jet2 cos(const Jet2& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  std::vector<double> d(static_cast<std::size_t>(x.order() + 1));
  const double cycle[4] = {c, -s, -c, s};
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = cycle[k % 4];
  return compose(x, d);
}

Jet2 exp(const Jet2& x) {
  std::vector<double> d(static_cast<std::size_t>(x.order() + 1), std::exp(x.value()));
  return compose(x, d);
}

Jet2 sqrt(const Jet2& x) {
  const double x0 = x.value();
  if (!(x0 > 0.0)) throw EvaluationError("sqrt of a jet with non-positive value");
  std::vector<double> d(static_cast<std::size_t>(x.order() + 1));
  double coef = 1.0, expo = 0.5;
  for (std::size_t k = 0; k < d.size(); ++k) {
    d[k] = coef * std::pow(x0, expo);
    coef *= expo;
    expo -= 1.0;
  }
  return compose(x, d);
}

Jet2 reciprocal(const Jet2& x) {
  const double x0 = x.value();
  if (x0 == 0.0 || !std::isfinite(x0)) throw EvaluationError("reciprocal of a jet with zero value");
  std::vector<double> d(static_cast<std::size_t>(x.order() + 1));
  double p = 1.0 / x0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    d[k] = factorial(static_cast<int>(k)) * p * ((k % 2) ? -1.0 : 1.0);
    p /= x0;
  }
  return compose(x, d);
}

Jet2 pow(const Jet2& x, int n) {
  if (n < 0) return reciprocal(pow(x, -n));
  Jet2 result(x.order(), 1.0);
  Jet2 base = x;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

Jet2 dot(const JetVector& a, const JetVector& b) {
  if (a.size() != b.size() || a.empty()) throw ValidationError("dot of mismatched jet vectors");
  Jet2 acc = a[0] * b[0];
  for (std::size_t i = 1; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

JetVector operator+(const JetVector& a, const JetVector& b) {
  JetVector r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

JetVector operator-(const JetVector& a, const JetVector& b) {
  JetVector r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

JetVector operator*(const Jet2& s, const JetVector& a) {
  JetVector r;
  r.reserve(a.size());
  for (const auto& x : a) r.push_back(s * x);
  return r;
}

JetVector diff_u(const JetVector& a) {
  JetVector r;
  r.reserve(a.size());
  for (const auto& x : a) r.push_back(x.diff_u());
  return r;
}

JetVector diff_v(const JetVector& a) {
  JetVector r;
  r.reserve(a.size());
  for (const auto& x : a) r.push_back(x.diff_v());
  return r;
}

JetVector truncated(const JetVector& a, int order) {
  JetVector r;
  r.reserve(a.size());
  for (const auto& x : a) r.push_back(x.truncated(order));
  return r;
}

}  // namespace isosurf
