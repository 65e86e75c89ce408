#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include <Eigen/Core>

#include "modecap/errors.hpp"

// Special functions used by the wavefield model: spherical Bessel functions of
// the first kind, their small-argument bound, Legendre polynomials and fully
// normalized complex spherical harmonics.
//
// Everything here is a pure function templated on the real scalar type.

namespace modecap {

inline constexpr int kMaxBesselOrder = 200;

/// Spatial mode n and order m of a spherical harmonic, |m| <= n.
struct ModeIndex
{
  int n = 0;
  int m = 0;

  constexpr ModeIndex() = default;
  constexpr ModeIndex(int n_, int m_) : n(n_), m(m_)
  {
    if (n_ < 0 || m_ < -n_ || m_ > n_)
      throw DomainError("ModeIndex requires n >= 0 and |m| <= n");
  }

  friend constexpr bool operator==(ModeIndex, ModeIndex) = default;
};

/// Row of (n, m) in every mode-major container: n^2 + n + m.
constexpr int mode_slot(int n, int m) { return n * n + n + m; }
constexpr int mode_slot(ModeIndex idx) { return mode_slot(idx.n, idx.m); }
constexpr int mode_count(int max_degree) { return (max_degree + 1) * (max_degree + 1); }

inline ModeIndex mode_at(int slot)
{
  int n = static_cast<int>(std::sqrt(static_cast<double>(slot)));
  while (n * n > slot)
    --n;
  while ((n + 1) * (n + 1) <= slot)
    ++n;
  return {n, slot - n * n - n};
}

namespace detail {

template <std::floating_point Real> void check_bessel_args(int n, Real z)
{
  if (n < 0 || n > kMaxBesselOrder)
    throw DomainError("spherical Bessel order " + std::to_string(n) + " outside [0, " +
                      std::to_string(kMaxBesselOrder) + "]");
  if (!(z >= Real(0)) || !std::isfinite(z))
    throw DomainError("spherical Bessel argument must be finite and >= 0");
}

// Power series z^n/(2n+1)!! * sum_k (-z^2/2)^k / (k! (2n+3)(2n+5)...(2n+2k+1)).
// Every term after the first is smaller than its predecessor for z < 1.
template <std::floating_point Real> Real sph_bessel_series(int n, Real z)
{
  Real lead = 1;
  for (int k = 1; k <= n; ++k) {
    lead *= z / Real(2 * k + 1);
    if (lead == Real(0))
      return Real(0);
  }
  Real const half_z2 = z * z / 2;
  Real sum = 1, term = 1;
  for (int k = 1; k < 100; ++k) {
    term *= -half_z2 / (Real(k) * Real(2 * n + 2 * k + 1));
    sum += term;
    if (std::abs(term) < std::numeric_limits<Real>::epsilon() * std::abs(sum) / 4)
      break;
  }
  return lead * sum;
}

template <std::floating_point Real> std::pair<Real, Real> sph_bessel_01(Real z)
{
  Real const s = std::sin(z), c = std::cos(z);
  return {s / z, s / (z * z) - c / z};
}

// Forward recurrence j_{k+1} = (2k+1)/z j_k - j_{k-1}; stable while k < z.
template <std::floating_point Real> Real sph_bessel_upward(int n, Real z)
{
  auto [j0, j1] = sph_bessel_01(z);
  if (n == 0)
    return j0;
  for (int k = 1; k < n; ++k) {
    Real const next = Real(2 * k + 1) / z * j1 - j0;
    j0 = j1;
    j1 = next;
  }
  return j1;
}

inline int miller_start(int n, double z)
{
  int const m = std::max(n, static_cast<int>(std::ceil(z)));
  return m + 32 + static_cast<int>(std::ceil(std::sqrt(40.0 * m)));
}

// Miller's backward recurrence from an arbitrary seed well above max(n, z),
// normalized against whichever of j_0, j_1 is larger in magnitude. Fills
// out[0..n] when out is non-null and returns j_n.
template <std::floating_point Real> Real sph_bessel_miller(int n, Real z, Real *out)
{
  constexpr Real big = Real(1e200), shrink = Real(1e-200);
  int const start = miller_start(n, static_cast<double>(z));
  Real above = 0; // f_{k+1}
  Real here = 1;  // f_k
  Real f_n = (start == n) ? here : Real(0);
  for (int k = start; k > 0; --k) {
    Real const below = Real(2 * k + 1) / z * here - above;
    above = here;
    here = below;
    if (k - 1 <= n) {
      if (out)
        out[k - 1] = here;
      if (k - 1 == n)
        f_n = here;
    }
    if (std::abs(here) > big) {
      here *= shrink;
      above *= shrink;
      f_n *= shrink;
      if (out)
        for (int i = k - 1; i <= n; ++i)
          out[i] *= shrink;
    }
  }
  // here = f_0, above = f_1
  auto const [j0, j1] = sph_bessel_01(z);
  Real const scale = (std::abs(j0) >= std::abs(j1)) ? j0 / here : j1 / above;
  if (out)
    for (int i = 0; i <= n; ++i)
      out[i] *= scale;
  return f_n * scale;
}

} // namespace detail

/// Spherical Bessel function of the first kind j_n(z), 0 <= n <= 200, z >= 0.
///
/// Upward recurrence for z > n, power series for z < 1, and Miller's
/// downward recurrence otherwise (the evanescent region n >= z where the
/// forward recurrence loses all accuracy).
template <std::floating_point Real> Real sph_bessel_j(int n, Real z)
{
  detail::check_bessel_args(n, z);
  if (z == Real(0))
    return n == 0 ? Real(1) : Real(0);
  if (z < Real(1))
    return detail::sph_bessel_series(n, z);
  if (z > Real(n))
    return detail::sph_bessel_upward(n, z);
  return detail::sph_bessel_miller<Real>(n, z, nullptr);
}

/// j_0(z) ... j_N(z) in one pass.
template <std::floating_point Real>
Eigen::Array<Real, Eigen::Dynamic, 1> sph_bessel_j_all(int max_order, Real z)
{
  detail::check_bessel_args(max_order, z);
  Eigen::Array<Real, Eigen::Dynamic, 1> out = Eigen::Array<Real, Eigen::Dynamic, 1>::Zero(max_order + 1);
  if (z == Real(0)) {
    out(0) = 1;
    return out;
  }
  if (z < Real(1)) {
    for (int k = 0; k <= max_order; ++k)
      out(k) = detail::sph_bessel_series(k, z);
    return out;
  }
  if (z > Real(max_order)) {
    auto [j0, j1] = detail::sph_bessel_01(z);
    out(0) = j0;
    if (max_order > 0)
      out(1) = j1;
    for (int k = 1; k < max_order; ++k)
      out(k + 1) = Real(2 * k + 1) / z * out(k) - out(k - 1);
    return out;
  }
  detail::sph_bessel_miller<Real>(max_order, z, out.data());
  return out;
}

/// Upper bound (sqrt(pi)/2) (z/2)^n / Gamma(n + 3/2) on |j_n(z)|, evaluated in
/// log space so that n up to a few hundred neither overflows nor underflows
/// prematurely.
template <std::floating_point Real> Real sph_bessel_j_bound(int n, Real z)
{
  if (n < 0)
    throw DomainError("spherical Bessel bound needs n >= 0");
  if (!(z >= Real(0)))
    throw DomainError("spherical Bessel bound needs z >= 0");
  if (z == Real(0))
    return n == 0 ? Real(1) : Real(0);
  using std::log;
  Real const log_bound = Real(0.5) * log(std::numbers::pi_v<Real>) - log(Real(2)) +
                         Real(n) * log(z / Real(2)) - std::lgamma(Real(n) + Real(1.5));
  return std::exp(log_bound);
}

/// Legendre polynomial P_n(x) on [-1, 1] by the three-term recurrence.
template <std::floating_point Real> Real legendre_p(int n, Real x)
{
  if (n < 0)
    throw DomainError("Legendre degree must be >= 0");
  if (!(std::abs(x) <= Real(1)))
    throw DomainError("Legendre polynomial argument outside [-1, 1]");
  if (n == 0)
    return Real(1);
  Real prev = 1, curr = x;
  for (int k = 1; k < n; ++k) {
    Real const next = (Real(2 * k + 1) * x * curr - Real(k) * prev) / Real(k + 1);
    prev = curr;
    curr = next;
  }
  return curr;
}

namespace detail {

// Normalized associated Legendre function with the Condon-Shortley phase,
// sqrt((2n+1)/(4pi) (n-m)!/(n+m)!) P_n^m(cos theta), for 0 <= m <= n.
template <std::floating_point Real> Real normalized_assoc_legendre(int n, int m, Real theta)
{
  Real const x = std::cos(theta), s = std::sin(theta);
  Real pmm = Real(1) / std::sqrt(Real(4) * std::numbers::pi_v<Real>);
  for (int k = 1; k <= m; ++k)
    pmm *= -std::sqrt(Real(2 * k + 1) / Real(2 * k)) * s;
  if (n == m)
    return pmm;
  Real pm1 = std::sqrt(Real(2 * m + 3)) * x * pmm;
  for (int l = m + 2; l <= n; ++l) {
    Real const a = std::sqrt(Real(4 * l * l - 1) / Real(l * l - m * m));
    Real const b = std::sqrt(Real((l - 1) * (l - 1) - m * m) / Real(4 * (l - 1) * (l - 1) - 1));
    Real const next = a * (x * pm1 - b * pmm);
    pmm = pm1;
    pm1 = next;
  }
  return pm1;
}

} // namespace detail

/// Orthonormal complex spherical harmonic Y_nm(theta, phi) with the
/// Condon-Shortley phase, so that Y_{n,-m} = (-1)^m conj(Y_nm) and the
/// unit-sphere integral of |Y_nm|^2 is exactly 1.
template <std::floating_point Real>
std::complex<Real> sph_harmonic(ModeIndex idx, Real theta, Real phi)
{
  int const am = std::abs(idx.m);
  Real const p = detail::normalized_assoc_legendre(idx.n, am, theta);
  std::complex<Real> const y = std::polar(p, Real(am) * phi);
  if (idx.m >= 0)
    return y;
  return (am % 2 == 0) ? std::conj(y) : -std::conj(y);
}

/// Y_nm(theta, phi) for every n <= max_degree, stored at mode_slot(n, m).
template <std::floating_point Real>
Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1> sph_harmonics_all(int max_degree, Real theta, Real phi)
{
  using Complex = std::complex<Real>;
  Eigen::Matrix<Complex, Eigen::Dynamic, 1> out(mode_count(max_degree));
  Real const x = std::cos(theta), s = std::sin(theta);
  Real pmm = Real(1) / std::sqrt(Real(4) * std::numbers::pi_v<Real>);
  for (int m = 0; m <= max_degree; ++m) {
    if (m > 0)
      pmm *= -std::sqrt(Real(2 * m + 1) / Real(2 * m)) * s;
    Complex const phase = std::polar(Real(1), Real(m) * phi);
    Real const sign = (m % 2 == 0) ? Real(1) : Real(-1);
    auto store = [&](int n, Real p) {
      Complex const y = p * phase;
      out(mode_slot(n, m)) = y;
      if (m > 0)
        out(mode_slot(n, -m)) = sign * std::conj(y);
    };
    store(m, pmm);
    if (m == max_degree)
      break;
    Real prev = pmm;
    Real curr = std::sqrt(Real(2 * m + 3)) * x * pmm;
    store(m + 1, curr);
    for (int l = m + 2; l <= max_degree; ++l) {
      Real const a = std::sqrt(Real(4 * l * l - 1) / Real(l * l - m * m));
      Real const b = std::sqrt(Real((l - 1) * (l - 1) - m * m) / Real(4 * (l - 1) * (l - 1) - 1));
      Real const next = a * (x * curr - b * prev);
      prev = curr;
      curr = next;
      store(l, curr);
    }
  }
  return out;
}

/// Gauss-Legendre nodes and weights on [-1, 1], nodes in descending order.
template <std::floating_point Real>
std::pair<Eigen::Array<Real, Eigen::Dynamic, 1>, Eigen::Array<Real, Eigen::Dynamic, 1>>
gauss_legendre(int count)
{
  if (count < 1)
    throw DomainError("Gauss-Legendre rule needs at least one node");
  Eigen::Array<Real, Eigen::Dynamic, 1> nodes(count), weights(count);
  for (int i = 0; i < (count + 1) / 2; ++i) {
    Real x = std::cos(std::numbers::pi_v<Real> * (Real(i) + Real(0.75)) / (Real(count) + Real(0.5)));
    Real deriv = 0;
    for (int iter = 0; iter < 100; ++iter) {
      Real p0 = 1, p1 = x;
      for (int k = 1; k < count; ++k) {
        Real const p2 = (Real(2 * k + 1) * x * p1 - Real(k) * p0) / Real(k + 1);
        p0 = p1;
        p1 = p2;
      }
      deriv = Real(count) * (x * p1 - p0) / (x * x - Real(1));
      Real const dx = p1 / deriv;
      x -= dx;
      if (std::abs(dx) <= 4 * std::numeric_limits<Real>::epsilon())
        break;
    }
    // one more derivative evaluation at the converged node
    Real p0 = 1, p1 = x;
    for (int k = 1; k < count; ++k) {
      Real const p2 = (Real(2 * k + 1) * x * p1 - Real(k) * p0) / Real(k + 1);
      p0 = p1;
      p1 = p2;
    }
    deriv = (count == 1) ? Real(1) : Real(count) * (x * p1 - p0) / (x * x - Real(1));
    Real const w = Real(2) / ((Real(1) - x * x) * deriv * deriv);
    nodes(i) = x;
    nodes(count - 1 - i) = -x;
    weights(i) = w;
    weights(count - 1 - i) = w;
  }
  if (count % 2 == 1)
    nodes(count / 2) = 0;
  return {nodes, weights};
}

} // namespace modecap
