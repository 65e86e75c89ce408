#include "modecap/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "modecap/errors.hpp"
#include "modecap/random.hpp"
#include "modecap/sampling.hpp"
#include "modecap/specfun.hpp"
#include "modecap/wavefield.hpp"

namespace modecap {

namespace {

using Complex = std::complex<double>;

constexpr double kJacobiAngerTolerance = 1e-8;
constexpr double kParsevalTolerance = 1e-8;
constexpr double kReconstructionTolerance = 1e-2;
constexpr int kGuardSamples = 32;
constexpr int kParsevalStride = 32;

// Source whose time signal is sum_l g_l phi_l(t) for the full band, so its
// spectrum is (1/B) sum_l g_l exp(-i 2 pi f l / B) on [F0 - W, F0 + W].
struct SourceSignal
{
  double theta = 0.0;
  double phi = 0.0;
  std::vector<Complex> gains;
  double lo = 0.0;
  double hi = 0.0;

  Complex amplitude(double f) const
  {
    double const width = hi - lo;
    if (width == 0.0)
      return f == lo ? gains.front() : Complex{0.0, 0.0};
    if (f < lo || f > hi)
      return {0.0, 0.0};
    Complex acc{0.0, 0.0};
    for (std::size_t l = 0; l < gains.size(); ++l)
      acc += gains[l] * std::polar(1.0, -2.0 * std::numbers::pi * f * double(l) / width);
    return acc / width;
  }
};

std::vector<SourceSignal> make_sources(Scenario const &s, SimulationConfig const &config)
{
  double const lo = s.mid_freq - s.half_bandwidth;
  double const hi = s.mid_freq + s.half_bandwidth;
  int const taps = static_cast<int>(std::floor(2.0 * s.half_bandwidth * s.obs_time)) + 1;
  std::vector<SourceSignal> out(static_cast<std::size_t>(config.sources));
  for (int k = 0; k < config.sources; ++k) {
    auto &src = out[static_cast<std::size_t>(k)];
    std::uint64_t const stream = 1000 + static_cast<std::uint64_t>(k);
    src.theta = std::acos(1.0 - 2.0 * uniform_unit(config.seed, stream, 0));
    src.phi = 2.0 * std::numbers::pi * uniform_unit(config.seed, stream, 1);
    src.lo = lo;
    src.hi = hi;
    for (int l = 0; l < taps; ++l)
      src.gains.push_back(complex_gaussian(config.seed, stream + 1000, static_cast<std::uint64_t>(l), 1.0));
  }
  return out;
}

PropertyResult property(std::string name, double value, double tolerance, std::string detail = {})
{
  return {std::move(name), value <= tolerance, value, tolerance, std::move(detail)};
}

double normwise_error(Eigen::MatrixXcd const &got, Eigen::MatrixXcd const &want)
{
  double const scale = want.cwiseAbs().maxCoeff();
  double const diff = (got - want).cwiseAbs().maxCoeff();
  return scale > 0.0 ? diff / scale : diff;
}

struct NoiseStats
{
  double variance_error = 0.0;
  double correlation = 0.0;
  double samples = 0.0;
};

NoiseStats noise_statistics(Eigen::MatrixXcd const &noise, double sigma0_sq)
{
  NoiseStats out;
  out.samples = double(noise.cols());
  Eigen::MatrixXcd const gram = noise * noise.adjoint();
  for (Eigen::Index a = 0; a < gram.rows(); ++a) {
    double const var = gram(a, a).real() / out.samples;
    out.variance_error = std::max(out.variance_error, std::abs(var / sigma0_sq - 1.0));
    for (Eigen::Index b = a + 1; b < gram.rows(); ++b) {
      double const corr = std::abs(gram(a, b)) / std::sqrt(gram(a, a).real() * gram(b, b).real());
      out.correlation = std::max(out.correlation, corr);
    }
  }
  return out;
}

} // namespace

bool SimulationReport::passed() const
{
  return std::all_of(properties.begin(), properties.end(), [](auto const &p) { return p.passed; });
}

SimulationReport run_simulation(Scenario const &s, SimulationConfig const &config, CutoffModel const &model)
{
  s.validate();
  if (config.sources < 1)
    throw DomainError("simulation needs at least one source");
  if (config.trials < 1)
    throw DomainError("simulation needs at least one noise trial");
  if (s.half_bandwidth > 0.0 && config.freq_points < 2)
    throw DomainError("frequency grid needs at least two points");

  auto const profile = bandwidth_profile(s, std::nullopt, model);
  int const n_max = profile.n_max;
  double const kr_max = 2.0 * std::numbers::pi * (s.mid_freq + s.half_bandwidth) * s.radius / s.wave_speed;
  int const n_field = field_degree(kr_max);
  int const required = required_quadrature_degree(n_max, kr_max);
  int const degree = config.quadrature_degree.value_or(required);
  if (degree < required) {
    std::ostringstream msg;
    msg << "quadrature degree " << degree << " cannot resolve modes up to " << n_max << " for kR = " << kr_max
        << "; required degree " << required;
    throw ResolutionError(msg.str(), required);
  }

  SimulationReport report;
  report.analysis_degree = n_max;
  report.field_degree = n_field;
  report.quadrature_degree = degree;

  Eigen::VectorXd const freqs = band_frequency_grid(s.mid_freq, s.half_bandwidth, config.freq_points);
  report.freq_step = freqs.size() > 1 ? freqs(1) - freqs(0) : 0.0;

  auto const signals = make_sources(s, config);
  std::vector<PlaneWaveSource> sources;
  for (auto const &sig : signals) {
    PlaneWaveSource src{sig.theta, sig.phi, Eigen::VectorXcd(freqs.size())};
    for (Eigen::Index k = 0; k < freqs.size(); ++k)
      src.amplitude(k) = sig.amplitude(freqs(k));
    sources.push_back(std::move(src));
  }

  SphericalGrid const grid(s.radius, make_quadrature<double>(degree));
  FieldSamples const field = synthesize_field(sources, grid, freqs, s.wave_speed);
  ModeSpectrum const theory = theoretical_modes(sources, s.radius, freqs, n_max, s.wave_speed);
  ModeSpectrum const clean = analyze_modes(field, grid, n_max, freqs);
  report.properties.push_back(property("jacobi_anger", normwise_error(clean.coeffs, theory.coeffs),
                                       kJacobiAngerTolerance, "max |analyzed - theory| / max |theory|"));

  Eigen::MatrixXcd const alpha = source_mode_coefficients(sources, freqs, n_max);
  report.alpha_max_sq = alpha.cwiseAbs2().maxCoeff();
  NoiseModel noise{report.alpha_max_sq / s.snr_alpha_max, report.alpha_max_sq, config.seed};
  report.sigma0_sq = noise.sigma0_sq;

  // noise statistics for n <= 5, pooled over frequencies and trials
  int const noise_degree = std::min(5, n_max);
  Eigen::Index const noise_modes = mode_count(noise_degree);
  Eigen::MatrixXcd pooled(noise_modes, freqs.size() * config.trials);
  for (int trial = 0; trial < config.trials; ++trial) {
    NoiseModel trial_noise = noise;
    trial_noise.seed = derive_seed(config.seed, static_cast<std::uint64_t>(trial));
    ModeSpectrum const noisy = analyze_modes(add_noise(field, grid, trial_noise), grid, n_max, freqs);
    pooled.middleCols(trial * freqs.size(), freqs.size()) =
        (noisy.coeffs - clean.coeffs).topRows(noise_modes);
  }
  auto const stats = noise_statistics(pooled, noise.sigma0_sq);
  double const mc_tol = 4.0 / std::sqrt(stats.samples);
  report.properties.push_back(property("noise_variance", stats.variance_error, mc_tol,
                                       "max |Var/sigma0^2 - 1| over n <= " + std::to_string(noise_degree)));
  report.properties.push_back(property("noise_whiteness", stats.correlation, mc_tol,
                                       "max cross-mode |correlation|"));

  // SNR bound chain, amplitude form: |Psi| <= |alpha_max| |j_n| <= |alpha_max| bound
  double const alpha_max = std::sqrt(report.alpha_max_sq);
  double const floor = 1e-9 * clean.coeffs.cwiseAbs().maxCoeff();
  double chain = 0.0;
  for (Eigen::Index k = 0; k < freqs.size(); ++k) {
    double const kr = 2.0 * std::numbers::pi * freqs(k) * s.radius / s.wave_speed;
    auto const j = sph_bessel_j_all<double>(n_max, kr);
    for (int n = 0; n <= n_max; ++n) {
      double const jn = std::abs(j(n));
      double const bound = sph_bessel_j_bound<double>(n, kr);
      chain = std::max(chain, jn - bound * (1.0 + 1e-12));
      for (int m = -n; m <= n; ++m)
        chain = std::max(chain, (std::abs(clean(n, m, k)) - alpha_max * jn - floor) / alpha_max);
    }
  }
  report.properties.push_back(property("snr_bound_chain", std::max(0.0, chain), 0.0,
                                       "SNR <= SNR_max |j_n|^2 <= SNR_max bound^2"));

  ModeSnr const snr = mode_snr(clean, noise);
  bool detect_ok = true;
  double worst_gap = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    ModeDetection det;
    det.n = n;
    det.critical_freq = critical_frequency(s, n, model);
    det.detected_freq = empirical_critical_frequency(snr, s.threshold, n);
    det.passed = det.detected_freq >= det.critical_freq - report.freq_step * (1.0 + 1e-9);
    if (std::isfinite(det.detected_freq))
      worst_gap = std::max(worst_gap, det.critical_freq - det.detected_freq);
    detect_ok = detect_ok && det.passed;
    report.detections.push_back(det);
  }
  PropertyResult detect{"detectability", detect_ok, worst_gap, report.freq_step,
                        "max (F_n - detected F_n) over n = 1..N_max"};
  report.properties.push_back(detect);

  std::vector<Eigen::Index> subset;
  for (Eigen::Index k = 0; k < freqs.size(); k += kParsevalStride)
    subset.push_back(k);
  if (subset.back() != freqs.size() - 1)
    subset.push_back(freqs.size() - 1);
  FieldSamples part(field.rows(), static_cast<Eigen::Index>(subset.size()));
  Eigen::VectorXd part_freqs(part.cols());
  for (Eigen::Index i = 0; i < part.cols(); ++i) {
    part.col(i) = field.col(subset[static_cast<std::size_t>(i)]);
    part_freqs(i) = freqs(subset[static_cast<std::size_t>(i)]);
  }
  ModeSpectrum const full = analyze_modes(part, grid, n_field, part_freqs);
  report.properties.push_back(property("parseval", parseval_check(part, grid, full), kParsevalTolerance,
                                       "analysis to degree " + std::to_string(n_field)));

  // mode (0, 0) time signal through the full band
  if (s.half_bandwidth > 0.0) {
    ModeBand const band = ModeBand::from_profile(profile.per_mode.front());
    double const kscale = 2.0 * std::numbers::pi * s.radius / s.wave_speed;
    double const y00 = 1.0 / std::sqrt(4.0 * std::numbers::pi);
    Spectrum const psi00 = [&](double f) {
      Complex acc{0.0, 0.0};
      for (auto const &sig : signals)
        acc += sig.amplitude(f);
      return 4.0 * std::numbers::pi * y00 * acc * sph_bessel_j<double>(0, kscale * f);
    };
    double const delay = s.radius / s.wave_speed;
    double const t0 = -delay;
    double const t1 = s.obs_time + delay;
    int const l_lo = static_cast<int>(std::floor(t0 * band.w_n)) - kGuardSamples;
    int const l_hi = static_cast<int>(std::ceil(t1 * band.w_n)) + kGuardSamples;
    SampleTrain const train = sample_mode_signal(psi00, band, l_lo, l_hi);
    double err = 0.0, ref = 0.0;
    int const points = 201;
    for (int i = 0; i < points; ++i) {
      double const t = t0 + (t1 - t0) * (0.1 + 0.8 * i / double(points - 1));
      Complex const truth = mode_time_signal(psi00, band, t);
      err += std::norm(reconstruct(train, band, t) - truth);
      ref += std::norm(truth);
    }
    report.properties.push_back(property("reconstruction", ref > 0.0 ? std::sqrt(err / ref) : std::sqrt(err),
                                         kReconstructionTolerance,
                                         "mode (0,0), " + std::to_string(train.size()) + " samples, interior 80%"));
  }
  return report;
}

} // namespace modecap
