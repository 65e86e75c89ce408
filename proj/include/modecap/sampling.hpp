#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "modecap/dofcore.hpp"

// Per-mode time-domain machinery: band-limited mode signals, their Fourier
// coefficients and samples, the modulated-sinc basis phi_l, sinc
// reconstruction, and the support of the Legendre-kernel convolution.
//
// Frequencies are in hertz throughout; a spectrum is a function of f and the
// time signal is the integral of S(f) exp(i 2 pi f t) over the band.

namespace modecap {

using Spectrum = std::function<std::complex<double>(double freq)>;

struct ModeBand
{
  double w_n = 0.0;  // bandwidth, Hz
  double w_0n = 0.0; // midpoint, Hz
  double lo = 0.0;
  double hi = 0.0;

  static ModeBand from_edges(double lo, double hi);
  static ModeBand from_profile(ModeBandwidth const &mode);
};

/// Samples at t = l / w_n for l in [l_lo, l_hi].
struct SampleTrain
{
  std::vector<std::complex<double>> values;
  int l_lo = 0;
  int l_hi = -1;
  double spacing = 0.0;

  std::size_t size() const { return values.size(); }
};

/// Band integral of spectrum(f) exp(i 2 pi f t), adaptive Gauss-Kronrod with
/// relative tolerance 1e-9. Zero-width bands give 0.
std::complex<double> mode_time_signal(Spectrum const &spectrum, ModeBand const &band, double t);

/// c_l = (1/w_n) * band integral of spectrum(f) exp(i 2 pi f l / w_n), for l in
/// [l_lo, l_hi]. Evaluated on the unit interval u = (f - lo)/w_n, so it shares
/// no code path with mode_time_signal.
std::vector<std::complex<double>> fourier_coefficients(Spectrum const &spectrum, ModeBand const &band, int l_lo,
                                                       int l_hi);

/// Samples psi(l / w_n) obtained as w_n * c_l.
SampleTrain sample_mode_signal(Spectrum const &spectrum, ModeBand const &band, int l_lo, int l_hi);

/// exp(i 2 pi w_0n (t - l/w_n)) * sinc(pi w_n (t - l/w_n)).
std::complex<double> phi_basis(int l, double t, ModeBand const &band);

/// Integral of phi_l * conj(phi_l') over t. Integrates over [-T, T], [-2T, 2T]
/// and [-4T, 4T] (T = window rounded up to a multiple of 1/w_n) and removes
/// the 1/T and 1/T^3 tail terms by Richardson extrapolation.
std::complex<double> phi_inner(int l, int lp, ModeBand const &band, double window);

/// Sum over the train of psi(l / w_n) * phi_l(t).
std::complex<double> reconstruct(SampleTrain const &samples, ModeBand const &band, double t);

struct SupportMeasurement
{
  double support = 0.0;   // seconds
  double grid_step = 0.0; // seconds
};

/// Convolves a signal living on [0, duration] with P_n(c t / r), |t| <= r/c,
/// on a grid of step (r/c)/steps and measures the extent where the result
/// exceeds 1e-9 of its peak. duration = 0 treats the signal as an impulse of
/// weight signal(0); r = 0 returns {duration, 0}.
SupportMeasurement legendre_support_check(std::function<double(double)> const &signal, double duration, double r,
                                          int n, double wave_speed, int steps = 256);

} // namespace modecap
