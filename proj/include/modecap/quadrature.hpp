#pragma once

#include <complex>
#include <concepts>
#include <numbers>
#include <stdexcept>

#include <Eigen/Core>

#include "modecap/errors.hpp"
#include "modecap/specfun.hpp"

namespace modecap {

inline constexpr int kMaxQuadratureDegree = 512;

/// Product quadrature on the unit sphere: Gauss-Legendre in cos(theta) with
/// L+1 nodes times 2L+2 equispaced azimuths. Node q = i * azimuth_count + j.
///
/// Integrates Y_nm * conj(Y_n'm') exactly for n, n' <= max_degree (the
/// polar rule is exact to degree 2L+1, the azimuthal rule for |m - m'| < 2L+2).
template <std::floating_point Real> struct QuadratureRule
{
  using Array = Eigen::Array<Real, Eigen::Dynamic, 1>;

  Array theta;
  Array phi;
  Array weights;
  int max_degree = 0;

  Eigen::Index size() const { return weights.size(); }
};

template <std::floating_point Real = double> QuadratureRule<Real> make_quadrature(int max_degree)
{
  if (max_degree < 0)
    throw DomainError("quadrature degree must be >= 0");
  if (max_degree > kMaxQuadratureDegree)
    throw ResourceError("quadrature degree " + std::to_string(max_degree) + " exceeds " +
                        std::to_string(kMaxQuadratureDegree));
  int const polar = max_degree + 1;
  int const azimuth = 2 * max_degree + 2;
  auto const [x, w] = gauss_legendre<Real>(polar);

  QuadratureRule<Real> rule;
  rule.max_degree = max_degree;
  rule.theta.resize(polar * azimuth);
  rule.phi.resize(polar * azimuth);
  rule.weights.resize(polar * azimuth);
  Real const dphi = Real(2) * std::numbers::pi_v<Real> / Real(azimuth);
  for (int i = 0; i < polar; ++i) {
    Real const th = std::acos(x(i));
    for (int j = 0; j < azimuth; ++j) {
      int const q = i * azimuth + j;
      rule.theta(q) = th;
      rule.phi(q) = dphi * Real(j);
      rule.weights(q) = w(i) * dphi;
    }
  }
  return rule;
}

/// Weighted node sum approximating the integral of f over the unit sphere.
template <typename Derived, std::floating_point Real>
typename Derived::Scalar sphere_integrate(Eigen::MatrixBase<Derived> const &f, QuadratureRule<Real> const &rule)
{
  static_assert(Derived::ColsAtCompileTime == 1 || Derived::ColsAtCompileTime == Eigen::Dynamic);
  if (f.cols() != 1 || f.rows() != rule.size())
    throw std::invalid_argument("field sample count does not match quadrature node count");
  using Scalar = typename Derived::Scalar;
  return (rule.weights.matrix().template cast<Scalar>().array() * f.array()).sum();
}

/// Column-wise sphere integral of a node x column matrix.
template <typename Derived, std::floating_point Real>
Eigen::Matrix<typename Derived::Scalar, 1, Eigen::Dynamic>
sphere_integrate_columns(Eigen::MatrixBase<Derived> const &f, QuadratureRule<Real> const &rule)
{
  if (f.rows() != rule.size())
    throw std::invalid_argument("field sample count does not match quadrature node count");
  using Scalar = typename Derived::Scalar;
  return rule.weights.matrix().transpose().template cast<Scalar>() * f;
}

/// Matrix of Y_nm at every node: rows are mode slots up to max_degree,
/// columns are quadrature nodes.
template <std::floating_point Real>
Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>
harmonic_matrix(QuadratureRule<Real> const &rule, int max_degree)
{
  Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> y(mode_count(max_degree), rule.size());
  for (Eigen::Index q = 0; q < rule.size(); ++q)
    y.col(q) = sph_harmonics_all<Real>(max_degree, rule.theta(q), rule.phi(q));
  return y;
}

/// Gram matrix of the harmonics up to max_degree under the rule.
template <std::floating_point Real>
Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>
harmonic_gram(QuadratureRule<Real> const &rule, int max_degree)
{
  auto const y = harmonic_matrix(rule, max_degree);
  using Complex = std::complex<Real>;
  return y.conjugate() * rule.weights.matrix().template cast<Complex>().asDiagonal() * y.transpose();
}

} // namespace modecap
