#pragma once

#include <array>
#include <cmath>

#include "tlab/error.hpp"

namespace tlab {

/// Truncated Taylor series in the flow time t, kept to order 4:
///   f(t) = c[0] + c[1] t + ... + c[4] t^4.
/// The k-th derivative at t = 0 is k! * c[k]. Arithmetic below is the
/// exact truncated Cauchy/Leibniz algebra, so compositions are exact up to
/// rounding.
class Jet4 {
public:
  static constexpr int kOrder = 4;
  static constexpr int kSize = kOrder + 1;

  constexpr Jet4() = default;
  constexpr Jet4(double value) : c_{value, 0.0, 0.0, 0.0, 0.0} {}  // NOLINT: implicit from scalar
  constexpr explicit Jet4(const std::array<double, kSize>& coeffs) : c_(coeffs) {}

  /// Seed for a coordinate moving with unit speed: value + t.
  static constexpr Jet4 variable(double value, double rate) {
    Jet4 j(value);
    j.c_[1] = rate;
    return j;
  }

  constexpr double value() const { return c_[0]; }
  constexpr double coeff(int k) const { return c_[k]; }
  constexpr double& coeff(int k) { return c_[k]; }
  const std::array<double, kSize>& coeffs() const { return c_; }

  /// d^k/dt^k at t = 0.
  double derivative(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f * c_[k];
  }

  friend Jet4 operator+(const Jet4& a, const Jet4& b) {
    Jet4 r;
    for (int k = 0; k < kSize; ++k) r.c_[k] = a.c_[k] + b.c_[k];
    return r;
  }
  friend Jet4 operator-(const Jet4& a, const Jet4& b) {
    Jet4 r;
    for (int k = 0; k < kSize; ++k) r.c_[k] = a.c_[k] - b.c_[k];
    return r;
  }
  friend Jet4 operator-(const Jet4& a) {
    Jet4 r;
    for (int k = 0; k < kSize; ++k) r.c_[k] = -a.c_[k];
    return r;
  }
  friend Jet4 operator*(const Jet4& a, const Jet4& b) {
    Jet4 r;
    for (int k = 0; k < kSize; ++k) {
      double s = 0.0;
      for (int j = 0; j <= k; ++j) s += a.c_[j] * b.c_[k - j];
      r.c_[k] = s;
    }
    return r;
  }
  friend Jet4 operator/(const Jet4& a, const Jet4& b) {
    if (b.c_[0] == 0.0) throw Error(ErrorCode::Domain, "division by zero");
    Jet4 q;
    for (int k = 0; k < kSize; ++k) {
      double s = a.c_[k];
      for (int j = 1; j <= k; ++j) s -= b.c_[j] * q.c_[k - j];
      q.c_[k] = s / b.c_[0];
    }
    return q;
  }

  friend Jet4 exp(const Jet4& a) {
    Jet4 e;
    e.c_[0] = std::exp(a.c_[0]);
    for (int k = 1; k < kSize; ++k) {
      double s = 0.0;
      for (int j = 1; j <= k; ++j) s += j * a.c_[j] * e.c_[k - j];
      e.c_[k] = s / k;
    }
    return e;
  }
  friend Jet4 log(const Jet4& a) {
    if (!(a.c_[0] > 0.0)) throw Error(ErrorCode::Domain, "log of non-positive value");
    Jet4 l;
    l.c_[0] = std::log(a.c_[0]);
    for (int k = 1; k < kSize; ++k) {
      double s = 0.0;
      for (int j = 1; j < k; ++j) s += j * l.c_[j] * a.c_[k - j];
      l.c_[k] = (a.c_[k] - s / k) / a.c_[0];
    }
    return l;
  }
  friend Jet4 sqrt(const Jet4& a) {
    if (a.c_[0] < 0.0) throw Error(ErrorCode::Domain, "sqrt of negative value");
    Jet4 s;
    s.c_[0] = std::sqrt(a.c_[0]);
    for (int k = 1; k < kSize; ++k) {
      if (s.c_[0] == 0.0) {
        if (a.c_[k] != 0.0) throw Error(ErrorCode::Domain, "sqrt not differentiable at 0");
        s.c_[k] = 0.0;
        continue;
      }
      double acc = a.c_[k];
      for (int j = 1; j < k; ++j) acc -= s.c_[j] * s.c_[k - j];
      s.c_[k] = acc / (2.0 * s.c_[0]);
    }
    return s;
  }
  friend void sincos(const Jet4& a, Jet4& sn, Jet4& cs) {
    sn.c_[0] = std::sin(a.c_[0]);
    cs.c_[0] = std::cos(a.c_[0]);
    for (int k = 1; k < kSize; ++k) {
      double ss = 0.0, cc = 0.0;
      for (int j = 1; j <= k; ++j) {
        ss += j * a.c_[j] * cs.c_[k - j];
        cc -= j * a.c_[j] * sn.c_[k - j];
      }
      sn.c_[k] = ss / k;
      cs.c_[k] = cc / k;
    }
  }
  friend Jet4 sin(const Jet4& a) {
    Jet4 s, c;
    sincos(a, s, c);
    return s;
  }
  friend Jet4 cos(const Jet4& a) {
    Jet4 s, c;
    sincos(a, s, c);
    return c;
  }

private:
  std::array<double, kSize> c_{};
};

}  // namespace tlab
