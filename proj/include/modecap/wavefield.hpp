#pragma once

#include <complex>
#include <cstdint>
#include <span>

#include <Eigen/Core>

#include "modecap/dofcore.hpp"
#include "modecap/quadrature.hpp"

// Brute-force wavefield engine: far-field plane-wave sources observed on a
// sphere of radius R, projected onto spherical harmonics, with optional white
// Gaussian sensor noise.

namespace modecap {

/// Far-field plane wave arriving from direction (theta, phi). The amplitude
/// spectrum is sampled on the scenario frequency grid.
struct PlaneWaveSource
{
  double theta = 0.0;
  double phi = 0.0;
  Eigen::VectorXcd amplitude;
};

/// Observation sphere: radius plus the quadrature rule used on it.
struct SphericalGrid
{
  double radius = 0.0;
  QuadratureRule<double> rule;

  SphericalGrid() = default;
  SphericalGrid(double radius_, QuadratureRule<double> rule_);
};

/// Harmonic coefficients Psi_nm(R, f) for every mode slot up to max_degree
/// (rows) and frequency (columns).
struct ModeSpectrum
{
  double radius = 0.0;
  Eigen::VectorXd freqs;
  int max_degree = 0;
  Eigen::MatrixXcd coeffs;

  std::complex<double> operator()(int n, int m, Eigen::Index k) const { return coeffs(mode_slot(n, m), k); }
};

/// White noise model: per-mode noise power sigma0^2 and the best-case signal
/// spectrum power |alpha_max|^2.
struct NoiseModel
{
  double sigma0_sq = 1.0;
  double alpha_max_sq = 1.0;
  std::uint64_t seed = 0;

  double snr_alpha_max() const { return alpha_max_sq / sigma0_sq; }
};

/// Per-mode SNR on the frequency grid, rows indexed like ModeSpectrum.
struct ModeSnr
{
  Eigen::VectorXd freqs;
  int max_degree = 0;
  Eigen::MatrixXd values;
};

/// node x frequency samples of the field on the observation sphere
using FieldSamples = Eigen::MatrixXcd;

/// Uniform grid over [F0 - W, F0 + W]; W = 0 yields the single point F0.
Eigen::VectorXd band_frequency_grid(double mid_freq, double half_bandwidth, int points = 513);

/// Highest harmonic degree with non-negligible content in a plane-wave
/// field of wavenumber-radius product kR: ceil(kR) + 20.
int field_degree(double kr);

/// Quadrature degree needed to analyze up to max_degree a field whose content
/// reaches field_degree(kr_max).
int required_quadrature_degree(int max_degree, double kr_max);

FieldSamples synthesize_field(std::span<PlaneWaveSource const> sources, SphericalGrid const &grid,
                              Eigen::VectorXd const &freqs, double wave_speed = kDefaultWaveSpeed);

/// alpha_nm(f) = sum over sources of 4 pi i^n A(f) conj(Y_nm(source direction)).
Eigen::MatrixXcd source_mode_coefficients(std::span<PlaneWaveSource const> sources, Eigen::VectorXd const &freqs,
                                          int max_degree);

/// Jacobi-Anger coefficients alpha_nm(f) j_n(2 pi f R / c).
ModeSpectrum theoretical_modes(std::span<PlaneWaveSource const> sources, double radius, Eigen::VectorXd const &freqs,
                               int max_degree, double wave_speed = kDefaultWaveSpeed);

/// Quadrature projection of the field onto Y_nm, n <= max_degree. Throws
/// ResolutionError when the rule cannot resolve max_degree.
ModeSpectrum analyze_modes(FieldSamples const &field, SphericalGrid const &grid, int max_degree,
                           Eigen::VectorXd const &freqs);

/// Adds circular complex Gaussian noise with node variance sigma0^2 / w_q, so
/// that every projected mode coefficient carries variance exactly sigma0^2.
/// Sample (q, k) depends only on (seed, q, k).
FieldSamples add_noise(FieldSamples const &field, SphericalGrid const &grid, NoiseModel const &noise);

/// |Psi_nm|^2 / sigma0^2 (deterministic sources stand in for the expectation).
ModeSnr mode_snr(ModeSpectrum const &signal, NoiseModel const &noise);

/// Lowest grid frequency at which max_m SNR_nm reaches gamma; +inf if none.
double empirical_critical_frequency(ModeSnr const &snr, double gamma, int n);

/// Largest per-frequency relative gap between surface power and the sum of
/// squared mode coefficients.
double parseval_check(FieldSamples const &field, SphericalGrid const &grid, ModeSpectrum const &spectrum);

} // namespace modecap
