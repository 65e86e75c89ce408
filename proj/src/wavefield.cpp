#include "modecap/wavefield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "modecap/errors.hpp"
#include "modecap/parallel.hpp"
#include "modecap/random.hpp"
#include "modecap/specfun.hpp"

namespace modecap {

namespace {

using Complex = std::complex<double>;

constexpr Eigen::Index kColumnBlock = 16;

Eigen::Vector3d unit_vector(double theta, double phi)
{
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

void check_sources(std::span<PlaneWaveSource const> sources, Eigen::Index freq_count)
{
  if (sources.empty())
    throw std::invalid_argument("at least one plane-wave source is required");
  for (auto const &src : sources)
    if (src.amplitude.size() != freq_count)
      throw std::invalid_argument("source amplitude length does not match the frequency grid");
}

Complex i_pow(int n)
{
  switch (n % 4) {
  case 0: return {1.0, 0.0};
  case 1: return {0.0, 1.0};
  case 2: return {-1.0, 0.0};
  default: return {0.0, -1.0};
  }
}

} // namespace

SphericalGrid::SphericalGrid(double radius_, QuadratureRule<double> rule_) : radius(radius_), rule(std::move(rule_))
{
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw DomainError("observation sphere radius must be > 0");
}

Eigen::VectorXd band_frequency_grid(double mid_freq, double half_bandwidth, int points)
{
  if (!(mid_freq > 0.0) || half_bandwidth < 0.0 || half_bandwidth > mid_freq)
    throw DomainError("band must satisfy 0 <= W <= F0");
  if (half_bandwidth == 0.0)
    return Eigen::VectorXd::Constant(1, mid_freq);
  if (points < 2)
    throw DomainError("a band grid needs at least two points");
  return Eigen::VectorXd::LinSpaced(points, mid_freq - half_bandwidth, mid_freq + half_bandwidth);
}

int field_degree(double kr)
{
  if (!(kr >= 0.0))
    throw DomainError("kR must be >= 0");
  return static_cast<int>(std::ceil(kr)) + 20;
}

int required_quadrature_degree(int max_degree, double kr_max) { return max_degree + field_degree(kr_max); }

FieldSamples synthesize_field(std::span<PlaneWaveSource const> sources, SphericalGrid const &grid,
                              Eigen::VectorXd const &freqs, double wave_speed)
{
  check_sources(sources, freqs.size());
  auto const &rule = grid.rule;
  Eigen::Index const nodes = rule.size();
  Eigen::Index const nsrc = static_cast<Eigen::Index>(sources.size());

  // projection x_q . y_s scaled by R
  Eigen::MatrixXd path(nodes, nsrc);
  for (Eigen::Index s = 0; s < nsrc; ++s) {
    Eigen::Vector3d const y = unit_vector(sources[s].theta, sources[s].phi);
    for (Eigen::Index q = 0; q < nodes; ++q)
      path(q, s) = grid.radius * unit_vector(rule.theta(q), rule.phi(q)).dot(y);
  }

  FieldSamples field(nodes, freqs.size());
  parallel_for(static_cast<std::size_t>(freqs.size()), [&](std::size_t kk) {
    auto const k = static_cast<Eigen::Index>(kk);
    double const wavenumber = 2.0 * std::numbers::pi * freqs(k) / wave_speed;
    for (Eigen::Index q = 0; q < nodes; ++q) {
      Complex acc{0.0, 0.0};
      for (Eigen::Index s = 0; s < nsrc; ++s)
        acc += sources[s].amplitude(k) * std::polar(1.0, wavenumber * path(q, s));
      field(q, k) = acc;
    }
  });
  return field;
}

Eigen::MatrixXcd source_mode_coefficients(std::span<PlaneWaveSource const> sources, Eigen::VectorXd const &freqs,
                                          int max_degree)
{
  check_sources(sources, freqs.size());
  if (max_degree < 0)
    throw DomainError("mode degree must be >= 0");
  int const modes = mode_count(max_degree);
  Eigen::MatrixXcd alpha = Eigen::MatrixXcd::Zero(modes, freqs.size());
  for (auto const &src : sources) {
    Eigen::VectorXcd const y = sph_harmonics_all<double>(max_degree, src.theta, src.phi);
    Eigen::VectorXcd weight(modes);
    for (int slot = 0; slot < modes; ++slot)
      weight(slot) = 4.0 * std::numbers::pi * i_pow(mode_at(slot).n) * std::conj(y(slot));
    alpha.noalias() += weight * src.amplitude.transpose();
  }
  return alpha;
}

ModeSpectrum theoretical_modes(std::span<PlaneWaveSource const> sources, double radius, Eigen::VectorXd const &freqs,
                               int max_degree, double wave_speed)
{
  if (!(radius >= 0.0))
    throw DomainError("radius must be >= 0");
  ModeSpectrum out;
  out.radius = radius;
  out.freqs = freqs;
  out.max_degree = max_degree;
  out.coeffs = source_mode_coefficients(sources, freqs, max_degree);
  for (Eigen::Index k = 0; k < freqs.size(); ++k) {
    double const kr = 2.0 * std::numbers::pi * freqs(k) * radius / wave_speed;
    auto const j = sph_bessel_j_all<double>(max_degree, kr);
    for (int slot = 0; slot < out.coeffs.rows(); ++slot)
      out.coeffs(slot, k) *= j(mode_at(slot).n);
  }
  return out;
}

ModeSpectrum analyze_modes(FieldSamples const &field, SphericalGrid const &grid, int max_degree,
                           Eigen::VectorXd const &freqs)
{
  if (max_degree < 0)
    throw DomainError("mode degree must be >= 0");
  if (max_degree > grid.rule.max_degree)
    throw ResolutionError("analysis degree " + std::to_string(max_degree) + " exceeds quadrature degree " +
                              std::to_string(grid.rule.max_degree),
                          max_degree);
  if (field.rows() != grid.rule.size() || field.cols() != freqs.size())
    throw std::invalid_argument("field shape does not match grid nodes x frequencies");

  Eigen::MatrixXcd const projector =
      harmonic_matrix(grid.rule, max_degree).conjugate() * grid.rule.weights.matrix().cast<Complex>().asDiagonal();

  ModeSpectrum out;
  out.radius = grid.radius;
  out.freqs = freqs;
  out.max_degree = max_degree;
  out.coeffs.resize(projector.rows(), field.cols());
  Eigen::Index const blocks = (field.cols() + kColumnBlock - 1) / kColumnBlock;
  parallel_for(static_cast<std::size_t>(blocks), [&](std::size_t b) {
    Eigen::Index const first = static_cast<Eigen::Index>(b) * kColumnBlock;
    Eigen::Index const width = std::min(kColumnBlock, field.cols() - first);
    out.coeffs.middleCols(first, width).noalias() = projector * field.middleCols(first, width);
  });
  return out;
}

FieldSamples add_noise(FieldSamples const &field, SphericalGrid const &grid, NoiseModel const &noise)
{
  if (field.rows() != grid.rule.size())
    throw std::invalid_argument("field rows do not match grid nodes");
  if (!(noise.sigma0_sq >= 0.0))
    throw DomainError("noise power must be >= 0");
  FieldSamples out = field;
  if (noise.sigma0_sq == 0.0)
    return out;
  parallel_for(static_cast<std::size_t>(field.rows()), [&](std::size_t qq) {
    auto const q = static_cast<Eigen::Index>(qq);
    double const variance = noise.sigma0_sq / grid.rule.weights(q);
    for (Eigen::Index k = 0; k < field.cols(); ++k)
      out(q, k) += complex_gaussian(noise.seed, qq, static_cast<std::uint64_t>(k), variance);
  });
  return out;
}

ModeSnr mode_snr(ModeSpectrum const &signal, NoiseModel const &noise)
{
  if (!(noise.sigma0_sq > 0.0))
    throw DomainError("SNR needs a positive noise power");
  ModeSnr out;
  out.freqs = signal.freqs;
  out.max_degree = signal.max_degree;
  out.values = signal.coeffs.cwiseAbs2() / noise.sigma0_sq;
  return out;
}

double empirical_critical_frequency(ModeSnr const &snr, double gamma, int n)
{
  if (n < 0 || n > snr.max_degree)
    throw DomainError("mode index outside the SNR table");
  for (Eigen::Index k = 0; k < snr.freqs.size(); ++k) {
    double best = 0.0;
    for (int m = -n; m <= n; ++m)
      best = std::max(best, snr.values(mode_slot(n, m), k));
    if (best >= gamma)
      return snr.freqs(k);
  }
  return std::numeric_limits<double>::infinity();
}

double parseval_check(FieldSamples const &field, SphericalGrid const &grid, ModeSpectrum const &spectrum)
{
  if (field.rows() != grid.rule.size() || field.cols() != spectrum.coeffs.cols())
    throw std::invalid_argument("field and spectrum shapes disagree");
  Eigen::RowVectorXd const surface = grid.rule.weights.matrix().transpose() * field.cwiseAbs2();
  Eigen::RowVectorXd const modal = spectrum.coeffs.cwiseAbs2().colwise().sum();
  if (surface.maxCoeff() <= 0.0)
    throw DomainError("Parseval check is undefined for an identically zero field");
  double worst = 0.0;
  for (Eigen::Index k = 0; k < surface.size(); ++k) {
    if (surface(k) <= 0.0)
      continue;
    worst = std::max(worst, std::abs(surface(k) - modal(k)) / surface(k));
  }
  return worst;
}

} // namespace modecap
