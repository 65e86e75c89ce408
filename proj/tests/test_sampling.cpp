#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "modecap/errors.hpp"
#include "modecap/random.hpp"
#include "modecap/sampling.hpp"

using namespace modecap;

namespace {

constexpr double kPi = std::numbers::pi;
using Complex = std::complex<double>;

Complex flat(double) { return {1.0, 0.0}; }

// closed form of the band integral of exp(i 2 pi f t)
Complex flat_signal(ModeBand const &band, double t)
{
  double const x = kPi * band.w_n * t;
  double const s = x == 0.0 ? 1.0 : std::sin(x) / x;
  return band.w_n * s * std::polar(1.0, 2 * kPi * band.w_0n * t);
}

} // namespace

TEST_CASE("mode band construction")
{
  auto const band = ModeBand::from_edges(2.0, 3.5);
  CHECK(band.w_n == 1.5);
  CHECK(band.w_0n == 2.75);
  ModeBandwidth m;
  m.band_lo = 1.0;
  m.band_hi = 1.25;
  auto const from = ModeBand::from_profile(m);
  CHECK(from.w_n == 0.25);
  CHECK(from.w_0n == 1.125);
  CHECK_THROWS_AS(ModeBand::from_edges(2.0, 1.0), DomainError);
}

TEST_CASE("mode time signal of a flat spectrum")
{
  // baseband band of width B: t = 0 gives B
  auto const base = ModeBand::from_edges(-0.5, 0.5);
  CHECK(std::abs(mode_time_signal(flat, base, 0.0) - 1.0) <= 1e-12);
  auto const band = ModeBand::from_edges(2.0, 3.0);
  for (double t : {-7.3, -0.2, 0.0, 0.41, 3.0, 25.6}) {
    CAPTURE(t);
    CHECK(std::abs(mode_time_signal(flat, band, t) - flat_signal(band, t)) <= 1e-9);
  }
  CHECK(std::abs(mode_time_signal(flat, band, 1e4 + 0.5)) <= 1e-3);
  CHECK(mode_time_signal(flat, ModeBand::from_edges(1.0, 1.0), 0.3) == Complex(0.0, 0.0));
}

TEST_CASE("modulation property")
{
  Spectrum const shaped = [](double f) { return Complex(1.0 + f * f, std::sin(3 * f)); };
  auto const band = ModeBand::from_edges(1.0, 1.6);
  double const shift = 0.45;
  auto const moved = ModeBand::from_edges(1.0 + shift, 1.6 + shift);
  Spectrum const shifted = [&](double f) { return shaped(f - shift); };
  for (double t : {-2.0, 0.3, 5.5}) {
    Complex const want = std::polar(1.0, 2 * kPi * shift * t) * mode_time_signal(shaped, band, t);
    CHECK(std::abs(mode_time_signal(shifted, moved, t) - want) <= 1e-9 * std::abs(want) + 1e-12);
  }
}

TEST_CASE("Fourier coefficients equal scaled samples")
{
  auto const band = ModeBand::from_edges(3.0, 3.8);
  Spectrum const spec = [](double f) { return std::polar(1.0 + 0.3 * std::cos(5 * f), -1.7 * f); };
  auto const c = fourier_coefficients(spec, band, -6, 12);
  double peak = 0.0, worst = 0.0;
  for (int l = -6; l <= 12; ++l) {
    Complex const psi = mode_time_signal(spec, band, l / band.w_n);
    peak = std::max(peak, std::abs(psi));
    worst = std::max(worst, std::abs(band.w_n * c[static_cast<std::size_t>(l + 6)] - psi));
  }
  CHECK(worst / peak <= 1e-8);

  // flat spectrum: samples of the modulated sinc
  auto const fc = fourier_coefficients(flat, band, 0, 4);
  CHECK(std::abs(fc[0] - 1.0) <= 1e-12);
  for (int l = 1; l <= 4; ++l)
    CHECK(std::abs(fc[static_cast<std::size_t>(l)] - flat_signal(band, l / band.w_n) / band.w_n) <= 1e-12);
}

TEST_CASE("delay kernel peaks at its delay")
{
  auto const band = ModeBand::from_edges(0.5, 1.5);
  int const l0 = 4;
  Spectrum const kernel = [&](double f) { return std::polar(1.0, -2 * kPi * f * l0 / band.w_n); };
  auto const c = fourier_coefficients(kernel, band, 0, 9);
  std::size_t best = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (std::abs(c[i]) > std::abs(c[best]))
      best = i;
  CHECK(best == std::size_t(l0));
  CHECK(std::abs(c[l0] - 1.0) <= 1e-12);
}

TEST_CASE("phi basis")
{
  auto const band = ModeBand::from_edges(4.0, 5.0);
  CHECK(phi_basis(3, 3.0, band) == Complex(1.0, 0.0));
  for (int lp : {0, 1, 2, 4, 9})
    CHECK(std::abs(phi_basis(3, lp / band.w_n, band)) <= 1e-15);
  for (double t = -5.0; t <= 5.0; t += 0.037)
    CHECK(std::abs(phi_basis(2, t, band)) <= 1.0 + 1e-15);
  CHECK_THROWS_AS(phi_basis(0, 0.0, ModeBand::from_edges(1.0, 1.0)), DomainError);
}

TEST_CASE("phi orthogonality")
{
  for (auto const &band : {ModeBand::from_edges(2.0, 3.0), ModeBand::from_edges(0.25, 0.75)}) {
    double const window = 50.0 / band.w_n;
    CHECK(std::abs(band.w_n * phi_inner(0, 0, band, window) - 1.0) <= 1e-6);
    CHECK(std::abs(band.w_n * phi_inner(5, 5, band, window) - 1.0) <= 1e-6);
    CHECK(std::abs(band.w_n * phi_inner(0, 3, band, window)) <= 1e-6);
    CHECK(std::abs(band.w_n * phi_inner(7, 2, band, window)) <= 1e-6);
  }
  auto const band = ModeBand::from_edges(2.0, 3.0);
  CHECK_THROWS_AS(phi_inner(0, 0, band, 10.0), DomainError);
}

TEST_CASE("reconstruction interpolates its samples")
{
  auto const band = ModeBand::from_edges(1.0, 2.0);
  SampleTrain train;
  train.l_lo = 0;
  train.l_hi = 5;
  train.spacing = 1.0;
  train.values = {1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  for (double t : {-3.1, 0.0, 0.7, 2.2})
    CHECK(std::abs(reconstruct(train, band, t) - phi_basis(0, t, band)) <= 1e-15);
  for (int l = 1; l <= 5; ++l)
    CHECK(std::abs(reconstruct(train, band, double(l))) <= 1e-15);

  train.values.assign(6, 0.0);
  CHECK(reconstruct(train, band, 1.3) == Complex(0.0, 0.0));

  SampleTrain empty;
  CHECK_THROWS_AS(reconstruct(empty, band, 0.0), std::invalid_argument);
  train.spacing = 0.5;
  CHECK_THROWS_AS(reconstruct(train, band, 0.0), std::invalid_argument);
}

TEST_CASE("random in-band signal is reconstructed from floor(W T_eff) + 1 samples")
{
  auto const band = ModeBand::from_edges(6.0, 8.0);
  double const t_eff = 5.3;
  int const last = static_cast<int>(std::floor(band.w_n * t_eff));
  std::vector<Complex> gains;
  for (int l = 0; l <= last; ++l)
    gains.push_back(complex_gaussian(2024, 0, static_cast<std::uint64_t>(l), 1.0));
  // spectrum of sum_l g_l phi_l(t)
  Spectrum const spec = [&](double f) {
    Complex acc{0.0, 0.0};
    for (int l = 0; l <= last; ++l)
      acc += gains[static_cast<std::size_t>(l)] * std::polar(1.0, -2 * kPi * f * l / band.w_n);
    return acc / band.w_n;
  };
  auto const train = sample_mode_signal(spec, band, 0, last);
  REQUIRE(train.size() == std::size_t(last + 1));

  double err = 0.0, ref = 0.0;
  for (int i = 0; i <= 200; ++i) {
    double const t = t_eff * (0.1 + 0.8 * i / 200.0);
    Complex const truth = mode_time_signal(spec, band, t);
    err += std::norm(reconstruct(train, band, t) - truth);
    ref += std::norm(truth);
  }
  CHECK(std::sqrt(err / ref) <= 1e-2);
}

TEST_CASE("Legendre convolution support")
{
  double const c = 3e8;
  auto constant = [](double) { return 1.0; };
  // impulse: the kernel support itself
  auto const imp = legendre_support_check(constant, 0.0, 0.3, 0, c);
  CHECK(std::abs(imp.support - 2e-9) <= imp.grid_step);
  // 1 ms window, r = 0.3 m
  auto ramp = [](double t) { return 1.0 + 200.0 * t; };
  for (int n : {0, 1, 3, 8}) {
    auto const m = legendre_support_check(ramp, 1e-3, 0.3, n, c);
    CHECK(m.grid_step == doctest::Approx(1e-9 / 256));
    CHECK(std::abs(m.support - (1e-3 + 2e-9)) <= m.grid_step);
  }
  CHECK(legendre_support_check(constant, 1e-3, 0.0, 3, c).support == 1e-3);
  CHECK_THROWS_AS(legendre_support_check(constant, 1e-3, -1.0, 0, c), DomainError);
}

TEST_CASE("support is measured from both ends when the interior cancels")
{
  // P_1 is odd: a constant signal convolves to zero wherever the kernel fully overlaps it
  double const c = 1.0, r = 1.0;
  auto const m = legendre_support_check([](double) { return 1.0; }, 10.0, r, 1, c);
  CHECK(std::abs(m.support - 12.0) <= m.grid_step);
}
