#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace isosurf {

/// Truncated Taylor polynomial in two variables (u, v) about a base point.
///
/// Stores coefficients c_ab of u^a v^b for a + b <= order. Arithmetic is the
/// truncation of formal power series products, so a jet of order K carries
/// the exact partial derivatives up to total degree K of whatever expression
/// produced it: d^a/du^a d^b/dv^b = a! b! c_ab.
class Jet2 {
 public:
  static constexpr int kMaxOrder = 12;
  static constexpr std::size_t kCapacity = (kMaxOrder + 1) * (kMaxOrder + 2) / 2;

  Jet2() = default;
  explicit Jet2(int order, double value = 0.0);

  /// The coordinate function u (resp. v) expanded about u0 (resp. v0).
  static Jet2 variable_u(int order, double u0);
  static Jet2 variable_v(int order, double v0);

  static constexpr std::size_t index(int a, int b) {
    const int d = a + b;
    return static_cast<std::size_t>(d * (d + 1) / 2 + b);
  }
  static constexpr std::size_t size_for(int order) {
    return static_cast<std::size_t>((order + 1) * (order + 2) / 2);
  }

  int order() const { return order_; }
  double value() const { return c_[0]; }
  double coeff(int a, int b) const { return c_[index(a, b)]; }
  double& coeff(int a, int b) { return c_[index(a, b)]; }
  double operator[](std::size_t i) const { return c_[i]; }
  double& operator[](std::size_t i) { return c_[i]; }

  /// Partial derivative d^a_u d^b_v at the base point.
  double derivative(int a, int b) const;

  Jet2 diff_u() const;
  Jet2 diff_v() const;
  Jet2 truncated(int order) const;

  Jet2& operator+=(const Jet2& o);
  Jet2& operator-=(const Jet2& o);
  Jet2& operator*=(const Jet2& o);
  Jet2& operator+=(double s);
  Jet2& operator-=(double s);
  Jet2& operator*=(double s);

 private:
  int order_ = 0;
  std::array<double, kCapacity> c_{};
};

Jet2 operator+(Jet2 a, const Jet2& b);
Jet2 operator-(Jet2 a, const Jet2& b);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator/(const Jet2& a, const Jet2& b);
Jet2 operator+(Jet2 a, double s);
Jet2 operator+(double s, Jet2 a);
Jet2 operator-(Jet2 a, double s);
Jet2 operator-(double s, const Jet2& a);
Jet2 operator*(Jet2 a, double s);
Jet2 operator*(double s, Jet2 a);
Jet2 operator/(Jet2 a, double s);
Jet2 operator-(Jet2 a);

Jet2 sin(const Jet2& x);
Jet2 cos(const Jet2& x);
Jet2 exp(const Jet2& x);
Jet2 sqrt(const Jet2& x);
Jet2 reciprocal(const Jet2& x);
Jet2 pow(const Jet2& x, int n);

/// Composes a scalar function with a jet given the function's derivatives
/// f(x0), f'(x0), ..., f^(K)(x0) at the jet's value.
Jet2 compose(const Jet2& x, const std::vector<double>& derivatives);

/// One jet per ambient coordinate.
using JetVector = std::vector<Jet2>;

Jet2 dot(const JetVector& a, const JetVector& b);
JetVector operator+(const JetVector& a, const JetVector& b);
JetVector operator-(const JetVector& a, const JetVector& b);
JetVector operator*(const Jet2& s, const JetVector& a);
JetVector diff_u(const JetVector& a);
JetVector diff_v(const JetVector& a);
JetVector truncated(const JetVector& a, int order);

}  // namespace isosurf
