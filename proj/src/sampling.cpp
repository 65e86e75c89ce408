#include "modecap/sampling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "modecap/errors.hpp"
#include "modecap/specfun.hpp"

namespace modecap {

namespace {

using Complex = std::complex<double>;

constexpr double kRelTolerance = 1e-9;
constexpr int kMaxDepth = 40;

// 15-point Kronrod extension of the 7-point Gauss rule.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {0.129484966168869693270611432679082,
                                                 0.279705391489276667901467771423780,
                                                 0.381830050505118944950369775488975,
                                                 0.417959183673469387755102040816327};

struct PanelEstimate
{
  Complex kronrod;
  double error;
  double magnitude; // integral of |f|
};

template <typename F> PanelEstimate gauss_kronrod(F const &f, double a, double b)
{
  double const half = 0.5 * (b - a);
  double const mid = 0.5 * (a + b);
  Complex const fc = f(mid);
  Complex k = kKronrodWeights[7] * fc;
  Complex g = kGaussWeights[3] * fc;
  double mag = kKronrodWeights[7] * std::abs(fc);
  for (int i = 0; i < 7; ++i) {
    Complex const f1 = f(mid - half * kKronrodNodes[i]);
    Complex const f2 = f(mid + half * kKronrodNodes[i]);
    k += kKronrodWeights[i] * (f1 + f2);
    mag += kKronrodWeights[i] * (std::abs(f1) + std::abs(f2));
    if (i % 2 == 1)
      g += kGaussWeights[i / 2] * (f1 + f2);
  }
  return {k * half, std::abs((k - g) * half), mag * std::abs(half)};
}

template <typename F> Complex adaptive(F const &f, double a, double b, double tol, int depth)
{
  auto const est = gauss_kronrod(f, a, b);
  if (est.error <= tol || depth >= kMaxDepth)
    return est.kronrod;
  double const mid = 0.5 * (a + b);
  return adaptive(f, a, mid, 0.5 * tol, depth + 1) + adaptive(f, mid, b, 0.5 * tol, depth + 1);
}

// Splits [a, b] into panels of at most half an oscillation of the carrier,
// sizes the tolerance from a first pass, then refines each panel adaptively.
template <typename F> Complex integrate_oscillatory(F const &f, double a, double b, double cycles)
{
  if (!(b > a))
    return {0.0, 0.0};
  int const panels = std::max(1, static_cast<int>(std::ceil(2.0 * cycles)));
  double const width = (b - a) / panels;
  double scale = 0.0;
  for (int p = 0; p < panels; ++p)
    scale += gauss_kronrod(f, a + p * width, a + (p + 1) * width).magnitude;
  if (scale == 0.0)
    return {0.0, 0.0};
  double const panel_tol = kRelTolerance * scale / panels;
  Complex total{0.0, 0.0};
  for (int p = 0; p < panels; ++p)
    total += adaptive(f, a + p * width, a + (p + 1) * width, panel_tol, 0);
  return total;
}

void check_band(ModeBand const &band)
{
  if (!(band.w_n >= 0.0) || !std::isfinite(band.w_n) || !std::isfinite(band.w_0n))
    throw DomainError("mode band must have finite, non-negative width");
}

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

} // namespace

ModeBand ModeBand::from_edges(double lo, double hi)
{
  if (!(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi))
    throw DomainError("band edges must satisfy lo <= hi");
  return {hi - lo, 0.5 * (lo + hi), lo, hi};
}

ModeBand ModeBand::from_profile(ModeBandwidth const &mode) { return from_edges(mode.band_lo, mode.band_hi); }

Complex mode_time_signal(Spectrum const &spectrum, ModeBand const &band, double t)
{
  check_band(band);
  if (band.w_n == 0.0)
    return {0.0, 0.0};
  double const omega = 2.0 * std::numbers::pi * t;
  auto integrand = [&](double f) { return spectrum(f) * std::polar(1.0, omega * f); };
  return integrate_oscillatory(integrand, band.lo, band.hi, std::abs(t) * band.w_n);
}

std::vector<Complex> fourier_coefficients(Spectrum const &spectrum, ModeBand const &band, int l_lo, int l_hi)
{
  check_band(band);
  if (l_hi < l_lo)
    throw std::invalid_argument("empty sample index range");
  std::vector<Complex> out(static_cast<std::size_t>(l_hi - l_lo + 1), Complex{0.0, 0.0});
  if (band.w_n == 0.0)
    return out;
  for (int l = l_lo; l <= l_hi; ++l) {
    double const cycles = std::abs(double(l));
    auto integrand = [&](double u) {
      return spectrum(band.lo + u * band.w_n) * std::polar(1.0, 2.0 * std::numbers::pi * u * l);
    };
    // exp(i 2 pi lo l / w_n) carries the band offset
    Complex const offset = std::polar(1.0, 2.0 * std::numbers::pi * std::fmod(band.lo * l / band.w_n, 1.0));
    out[static_cast<std::size_t>(l - l_lo)] = offset * integrate_oscillatory(integrand, 0.0, 1.0, cycles);
  }
  return out;
}

SampleTrain sample_mode_signal(Spectrum const &spectrum, ModeBand const &band, int l_lo, int l_hi)
{
  if (!(band.w_n > 0.0))
    throw DomainError("sampling needs a positive mode bandwidth");
  SampleTrain train;
  train.values = fourier_coefficients(spectrum, band, l_lo, l_hi);
  for (auto &v : train.values)
    v *= band.w_n;
  train.l_lo = l_lo;
  train.l_hi = l_hi;
  train.spacing = 1.0 / band.w_n;
  return train;
}

Complex phi_basis(int l, double t, ModeBand const &band)
{
  if (!(band.w_n > 0.0))
    throw DomainError("phi_l needs a positive mode bandwidth");
  double const shifted = t - l / band.w_n;
  return std::polar(sinc(std::numbers::pi * band.w_n * shifted), 2.0 * std::numbers::pi * band.w_0n * shifted);
}

Complex phi_inner(int l, int lp, ModeBand const &band, double window)
{
  if (!(band.w_n > 0.0))
    throw DomainError("phi_l needs a positive mode bandwidth");
  if (!(window >= 50.0 / band.w_n))
    throw DomainError("orthogonality window must be at least 50 / w_n");
  double const step = 1.0 / band.w_n;
  long const cells = static_cast<long>(std::ceil(window * band.w_n - 1e-9));
  static auto const rule = gauss_legendre<double>(16);
  auto const &[x, w] = rule;

  // running sum over [-k step, k step], symmetric cells added in pairs
  auto cell = [&](long k) {
    double const a = k * step;
    Complex acc{0.0, 0.0};
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      double const t = a + 0.5 * step * (x(i) + 1.0);
      acc += w(i) * phi_basis(l, t, band) * std::conj(phi_basis(lp, t, band));
    }
    return 0.5 * step * acc;
  };
  std::array<Complex, 3> levels{};
  Complex running{0.0, 0.0};
  long done = 0;
  for (int level = 0; level < 3; ++level) {
    long const target = cells << level;
    for (; done < target; ++done)
      running += cell(done) + cell(-done - 1);
    levels[level] = running;
  }
  // I(T) = I + A/T + B/T^3: eliminate A pairwise, then B
  Complex const e1 = 2.0 * levels[1] - levels[0];
  Complex const e2 = 2.0 * levels[2] - levels[1];
  return (8.0 * e2 - e1) / 7.0;
}

Complex reconstruct(SampleTrain const &samples, ModeBand const &band, double t)
{
  if (samples.values.empty())
    throw std::invalid_argument("cannot reconstruct from an empty sample train");
  if (static_cast<long>(samples.values.size()) != long(samples.l_hi) - samples.l_lo + 1)
    throw std::invalid_argument("sample train length does not match its index range");
  if (!(band.w_n > 0.0) || std::abs(samples.spacing * band.w_n - 1.0) > 1e-12)
    throw std::invalid_argument("sample spacing does not match 1 / w_n");
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < samples.values.size(); ++i)
    acc += samples.values[i] * phi_basis(samples.l_lo + static_cast<int>(i), t, band);
  return acc;
}

SupportMeasurement legendre_support_check(std::function<double(double)> const &signal, double duration, double r,
                                          int n, double wave_speed, int steps)
{
  if (!(duration >= 0.0) || !(r >= 0.0) || !(wave_speed > 0.0) || n < 0 || steps < 1)
    throw DomainError("support check needs duration >= 0, r >= 0, c > 0, n >= 0, steps >= 1");
  if (r == 0.0)
    return {duration, 0.0};

  double const half = r / wave_speed;
  double const h = half / steps;
  static auto const rule = gauss_legendre<double>(48);
  auto const &[x, w] = rule;

  auto output = [&](double t) {
    if (duration == 0.0)
      return std::abs(t) <= half ? signal(0.0) * legendre_p(n, std::clamp(t / half, -1.0, 1.0)) : 0.0;
    double const lo = std::max(-half, t - duration);
    double const hi = std::min(half, t);
    if (!(hi > lo))
      return 0.0;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      double const tau = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x(i);
      acc += w(i) * signal(t - tau) * legendre_p(n, std::clamp(tau / half, -1.0, 1.0));
    }
    return 0.5 * (hi - lo) * acc;
  };

  // half-step offset keeps grid points off the exact support edges
  long const guard = 8;
  double const origin = -half - (guard - 0.5) * h;
  long const count = static_cast<long>(std::ceil((duration + 2.0 * half) / h)) + 2 * guard;
  auto at = [&](long k) { return std::abs(output(origin + k * h)); };

  // peak: dense near both edges, strided across the interior
  long const edge = 2 * steps + guard;
  long const stride = std::max<long>(1, count / 100000);
  double peak = 0.0;
  for (long k = 0; k < count; k += (k < edge || k > count - edge) ? 1 : stride)
    peak = std::max(peak, at(k));
  if (peak == 0.0)
    return {0.0, h};
  double const floor = 1e-9 * peak;

  long first = 0;
  while (first < count && at(first) <= floor)
    ++first;
  long last = count - 1;
  while (last > first && at(last) <= floor)
    --last;
  return {double(last - first + 1) * h, h};
}

} // namespace modecap
