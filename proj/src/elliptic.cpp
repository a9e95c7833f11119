#include "halfdisk/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "halfdisk/se2.hpp"

namespace halfdisk {

namespace {

constexpr double kAgmTol = 1e-16;
constexpr int kAgmMaxIter = 32;

void require_modulus(double k, bool allow_one) {
  if (!(k >= 0.0) || k > 1.0 || (!allow_one && k == 1.0)) {
    throw std::domain_error("elliptic: modulus outside the supported range");
  }
}

double complementary_modulus(double k) {
  // (1 - k)(1 + k) avoids cancellation in 1 - k^2 for k near 1.
  return std::sqrt((1.0 - k) * (1.0 + k));
}

/// F(phi, k) on the principal interval phi in [-pi/2, pi/2].
double incomplete_F_principal(double phi, double k) {
  const double s = std::sin(phi);
  const double c = std::cos(phi);
  return s * carlson_rf(c * c, 1.0 - (k * s) * (k * s), 1.0);
}

/// E(phi, k) on the principal interval phi in [-pi/2, pi/2].
double incomplete_E_principal(double phi, double k) {
  const double s = std::sin(phi);
  const double c = std::cos(phi);
  const double q = 1.0 - (k * s) * (k * s);
  return s * carlson_rf(c * c, q, 1.0) -
         (k * k) * (s * s * s) / 3.0 * carlson_rd(c * c, q, 1.0);
}

}  // namespace

double carlson_rf(double x, double y, double z) {
  // Carlson duplication; relative error ~ errtol^6.
  constexpr double errtol = 0.0025;
  double ave = 0.0, dx = 0.0, dy = 0.0, dz = 0.0;
  do {
    const double sx = std::sqrt(x);
    const double sy = std::sqrt(y);
    const double sz = std::sqrt(z);
    const double lam = sx * (sy + sz) + sy * sz;
    x = 0.25 * (x + lam);
    y = 0.25 * (y + lam);
    z = 0.25 * (z + lam);
    ave = (x + y + z) / 3.0;
    dx = (ave - x) / ave;
    dy = (ave - y) / ave;
    dz = (ave - z) / ave;
  } while (std::max({std::fabs(dx), std::fabs(dy), std::fabs(dz)}) > errtol);
  const double e2 = dx * dy - dz * dz;
  const double e3 = dx * dy * dz;
  return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) /
         std::sqrt(ave);
}

double carlson_rd(double x, double y, double z) {
  constexpr double errtol = 0.0015;
  double sum = 0.0;
  double fac = 1.0;
  double ave = 0.0, dx = 0.0, dy = 0.0, dz = 0.0;
  do {
    const double sx = std::sqrt(x);
    const double sy = std::sqrt(y);
    const double sz = std::sqrt(z);
    const double lam = sx * (sy + sz) + sy * sz;
    sum += fac / (sz * (z + lam));
    fac *= 0.25;
    x = 0.25 * (x + lam);
    y = 0.25 * (y + lam);
    z = 0.25 * (z + lam);
    ave = 0.2 * (x + y + 3.0 * z);
    dx = (ave - x) / ave;
    dy = (ave - y) / ave;
    dz = (ave - z) / ave;
  } while (std::max({std::fabs(dx), std::fabs(dy), std::fabs(dz)}) > errtol);
  const double ea = dx * dy;
  const double eb = dz * dz;
  const double ec = ea - eb;
  const double ed = ea - 6.0 * eb;
  const double ee = ed + ec + ec;
  constexpr double c1 = 3.0 / 14.0;
  constexpr double c2 = 1.0 / 6.0;
  constexpr double c3 = 9.0 / 22.0;
  constexpr double c4 = 3.0 / 26.0;
  return 3.0 * sum +
         fac *
             (1.0 +
              ed * (-c1 + 0.25 * c3 * ed - 1.5 * c4 * dz * ee) +
              dz * (c2 * ee + dz * (-c3 * ec + dz * c4 * ea))) /
             (ave * std::sqrt(ave));
}

double complete_K(double k) {
  require_modulus(k, true);
  if (k == 1.0) {
    throw std::domain_error("complete_K: diverges as k -> 1");
  }
  double a = 1.0;
  double b = complementary_modulus(k);
  for (int i = 0; i < kAgmMaxIter && std::fabs(a - b) > kAgmTol * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return kPi / (2.0 * a);
}

double complete_E(double k) {
  require_modulus(k, true);
  if (k == 1.0) {
    return 1.0;
  }
  double a = 1.0;
  double b = complementary_modulus(k);
  double c = k;
  double sum = 0.5 * c * c;
  double pow2 = 1.0;
  for (int i = 0; i < kAgmMaxIter && std::fabs(c) > kAgmTol; ++i) {
    c = 0.5 * (a - b);
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
    pow2 *= 2.0;
    sum += 0.5 * pow2 * c * c;
  }
  return kPi / (2.0 * a) * (1.0 - sum);
}

double incomplete_F(double phi, double k) {
  require_modulus(k, false);
  if (!std::isfinite(phi)) {
    throw std::domain_error("incomplete_F: non-finite amplitude");
  }
  const double n = std::nearbyint(phi / kPi);
  const double phr = phi - n * kPi;
  double value = incomplete_F_principal(phr, k);
  if (n != 0.0) {
    value += 2.0 * n * complete_K(k);
  }
  return value;
}

double incomplete_E(double phi, double k) {
  require_modulus(k, false);
  if (!std::isfinite(phi)) {
    throw std::domain_error("incomplete_E: non-finite amplitude");
  }
  const double n = std::nearbyint(phi / kPi);
  const double phr = phi - n * kPi;
  double value = incomplete_E_principal(phr, k);
  if (n != 0.0) {
    value += 2.0 * n * complete_E(k);
  }
  return value;
}

JacobiValues jacobi(double u, double k) {
  require_modulus(k, true);
  if (!std::isfinite(u)) {
    throw std::domain_error("jacobi: non-finite argument");
  }
  JacobiValues v;
  if (k == 1.0) {
    v.sn = std::tanh(u);
    v.cn = 1.0 / std::cosh(u);
    v.dn = v.cn;
    v.am = std::atan(std::sinh(u));
    return v;
  }
  if (k == 0.0) {
    v.sn = std::sin(u);
    v.cn = std::cos(u);
    v.dn = 1.0;
    v.am = u;
    return v;
  }

  // Reduce by the 4K period; am picks up 2*pi per period.
  const double K = complete_K(k);
  double shift = 0.0;
  double ur = u;
  if (std::fabs(u) > 2.0 * K) {
    const double m = std::nearbyint(u / (4.0 * K));
    ur = u - 4.0 * K * m;
    shift = 2.0 * kPi * m;
  }

  // Descending Landen (AGM) ladder, then the ascending amplitude recurrence.
  double a[kAgmMaxIter + 1];
  double c[kAgmMaxIter + 1];
  a[0] = 1.0;
  c[0] = k;
  double b = complementary_modulus(k);
  int n = 0;
  while (n < kAgmMaxIter && std::fabs(c[n]) > kAgmTol * a[n]) {
    const double an = 0.5 * (a[n] + b);
    c[n + 1] = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    ++n;
    a[n] = an;
  }
  double phi = std::ldexp(a[n] * ur, n);
  for (int i = n; i >= 1; --i) {
    const double t = std::clamp(c[i] / a[i] * std::sin(phi), -1.0, 1.0);
    phi = 0.5 * (phi + std::asin(t));
  }
  v.am = phi + shift;
  v.sn = std::sin(phi);
  v.cn = std::cos(phi);
  // dn^2 = cn^2 + k'^2 sn^2: additive, so stable at the quarter periods
  // where the textbook ratio cos(am)/cos(phi1 - phi0) degenerates to 0/0.
  const double kp = complementary_modulus(k);
  v.dn = std::sqrt(v.cn * v.cn + (kp * v.sn) * (kp * v.sn));
  return v;
}

double jacobi_epsilon(double u, double k) {
  require_modulus(k, true);
  if (k == 1.0) {
    return std::tanh(u);
  }
  return incomplete_E(jacobi(u, k).am, k);
}

}  // namespace halfdisk
