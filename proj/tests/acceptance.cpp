// Acceptance runner: one PASS/FAIL line per criterion, exit 1 if any fails.
// Usage: modecap_acceptance [criterion ...]   (no arguments runs all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "modecap/dofcore.hpp"
#include "modecap/quadrature.hpp"
#include "modecap/random.hpp"
#include "modecap/sampling.hpp"
#include "modecap/simulation.hpp"
#include "modecap/specfun.hpp"
#include "modecap/wavefield.hpp"

using namespace modecap;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEPi = std::numbers::e * std::numbers::pi;
using Complex = std::complex<double>;

struct Outcome
{
  bool passed = false;
  std::string detail;
};

struct Criterion
{
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

std::string num(double v, int digits = 6)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::vector<double> linspace(double lo, double hi, int count)
{
  std::vector<double> out;
  for (int i = 0; i < count; ++i)
    out.push_back(lo + (hi - lo) * i / double(count - 1));
  return out;
}

// normalized units: F0 = 1, c = 1, R = a, W = b, T = d
int ceil_index(double x) { return std::max(0, int(std::ceil(x))); }

double mode_sum_oracle(double a, double b, double d, double rho)
{
  double const t_eff = d + 2 * a;
  int const n_min = ceil_index(kEPi * a * (1 - b) + 0.5 * std::log(rho));
  int const n_max = std::max(n_min, ceil_index(kEPi * a * (1 + b) + 0.5 * std::log(rho)));
  double total = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    double const fn = n == 0 ? 0.0 : std::max(0.0, (n - 0.5 * std::log(rho)) / (kEPi * a));
    double const wn = n <= n_min ? 2 * b : std::max(0.0, 1 + b - std::max(fn, 1 - b));
    total += (2 * n + 1) * (wn * t_eff + 1);
  }
  return total;
}

double closed_form_oracle(double a, double b, double d, double rho)
{
  double const t_eff = d + 2 * a;
  int const n_min = ceil_index(kEPi * a * (1 - b) + 0.5 * std::log(rho));
  int const n_max = std::max(n_min, ceil_index(kEPi * a * (1 + b) + 0.5 * std::log(rho)));
  double const d1 = std::pow(n_max + 1, 2);
  double const d2 = 2 * b * t_eff * std::pow(n_min + 1, 2);
  double const d3 = 2 * b * t_eff *
                    (2 * std::pow(kEPi * a, 2) * (b - b * b / 3) + kEPi * a * (2 - b) +
                     std::log(rho) * (kEPi * b * a + 1));
  return d1 + std::max(0.0, d2) + std::max(0.0, d3);
}

Outcome shannon()
{
  double worst = 0.0;
  for (double wt : {1.0, 10.0, 100.0}) {
    Scenario s;
    s.mid_freq = 10.0;
    s.half_bandwidth = 2.5;
    s.obs_time = wt / s.half_bandwidth;
    double const want = 2 * wt + 1;
    worst = std::max(worst, std::abs(dof_asymptotic(s).total - want) / want);
  }
  return {worst <= 1e-9, "max rel err " + num(worst)};
}

Outcome narrowband()
{
  bool ok = true;
  std::string detail;
  for (double a : {0.5, 1.0, 2.0}) {
    double const side = std::ceil(kEPi * a) + 1;
    double const got = dof_normalized({a, 0.0, 1.0, 1.0});
    ok = ok && got == side * side;
    detail += "a=" + num(a) + ":" + num(got) + " ";
  }
  ok = ok && dof_normalized({1.0, 0.0, 1.0, 1.0}) == 100.0;
  return {ok, detail + "(want 100 at a=1)"};
}

Outcome pinned()
{
  Scenario const s = to_scenario({1.0, 0.5, 1.0, 1.0});
  auto const idx = truncation_indices(s);
  double const closed = dof_closed_form(s).total;
  double const sum = dof_mode_sum(s);
  double const closed_ref = closed_form_oracle(1.0, 0.5, 1.0, 1.0);
  double const sum_ref = mode_sum_oracle(1.0, 0.5, 1.0, 1.0);
  bool const ok = idx.n_min == 5 && idx.n_max == 13 && std::abs(closed - 524.75) <= 0.5 &&
                  std::abs(sum - 462.3) <= 0.5 && std::abs(closed - closed_ref) <= 1e-9 * closed_ref &&
                  std::abs(sum - sum_ref) <= 1e-9 * sum_ref && sum <= closed;
  return {ok, "n_min=" + std::to_string(idx.n_min) + " n_max=" + std::to_string(idx.n_max) + " closed=" +
                  num(closed, 10) + " (oracle " + num(closed_ref, 10) + ") sum=" + num(sum, 10) + " (oracle " +
                  num(sum_ref, 10) + ")"};
}

Outcome trends()
{
  auto const as = linspace(0.0, 2.0, 21);
  auto const bs = linspace(0.0, 1.0, 21);
  std::vector<double> const ds{0.5, 1.0, 2.0}, rhos{0.5, 1.0, 2.0};
  auto at = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return dof_normalized({as[i], bs[j], ds[k], rhos[l]});
  };
  auto drops = [](double lo, double hi) { return hi < lo * (1 - 1e-12); };
  int bad[4] = {0, 0, 0, 0}, pairs[4] = {0, 0, 0, 0};
  int ratio_bad = 0, ratio_total = 0;
  double worst_ratio = 0.0;
  for (std::size_t i = 0; i < as.size(); ++i)
    for (std::size_t j = 0; j < bs.size(); ++j)
      for (std::size_t k = 0; k < ds.size(); ++k)
        for (std::size_t l = 0; l < rhos.size(); ++l) {
          double const v = at(i, j, k, l);
          if (i + 1 < as.size())
            ++pairs[0], bad[0] += drops(v, at(i + 1, j, k, l));
          if (j + 1 < bs.size())
            ++pairs[1], bad[1] += drops(v, at(i, j + 1, k, l));
          if (k + 1 < ds.size())
            ++pairs[2], bad[2] += drops(v, at(i, j, k + 1, l));
          if (l + 1 < rhos.size())
            ++pairs[3], bad[3] += drops(v, at(i, j, k, l + 1));
          // D(2a) / D(a) for a >= 1 with 2a still on the grid
          if (as[i] >= 1.0 - 1e-12 && 2 * i < as.size()) {
            double const ratio = at(2 * i, j, k, l) / v;
            ++ratio_total;
            ratio_bad += ratio > 4.5;
            worst_ratio = std::max(worst_ratio, ratio);
          }
        }
  bool const ok = bad[0] + bad[1] + bad[2] + bad[3] == 0 && ratio_bad == 0;
  std::ostringstream d;
  d << "decreasing steps a:" << bad[0] << "/" << pairs[0] << " b:" << bad[1] << "/" << pairs[1] << " d:" << bad[2]
    << "/" << pairs[2] << " rho:" << bad[3] << "/" << pairs[3] << "; D(2a)/D(a) > 4.5 at " << ratio_bad << "/"
    << ratio_total << " (max " << num(worst_ratio, 4) << ")";
  return {ok, d.str()};
}

Outcome bessel_bound()
{
  double worst = 0.0;
  bool ok = true;
  for (int k = 1; k <= 1000; ++k) {
    double const z = 0.1 * k;
    auto const j = sph_bessel_j_all<double>(60, z);
    for (int n = 0; n <= 60; ++n) {
      double const bound = sph_bessel_j_bound<double>(n, z);
      ok = ok && std::abs(j(n)) <= bound * (1 + 1e-12);
      if (bound > 0)
        worst = std::max(worst, std::abs(j(n)) / bound);
    }
  }
  return {ok, "max |j_n|/bound " + num(worst)};
}

Outcome harmonic_gram_check()
{
  auto const rule = make_quadrature<double>(15);
  Eigen::MatrixXcd const gram = harmonic_gram(rule, 15);
  double const err = (gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  return {err <= 1e-10, "max |G - I| " + num(err) + " over " + std::to_string(gram.rows()) + " modes"};
}

Outcome jacobi_anger()
{
  double worst = 0.0;
  for (double kr : {1.0, 5.0, 10.0}) {
    int const n = field_degree(kr);
    SphericalGrid const grid(1.0, make_quadrature<double>(required_quadrature_degree(n, kr)));
    Eigen::VectorXd const f = Eigen::VectorXd::Constant(1, kr / (2 * kPi));
    std::vector<PlaneWaveSource> src{{0.7, 2.1, Eigen::VectorXcd::Constant(1, {1.0, 0.4})},
                                     {2.6, -1.0, Eigen::VectorXcd::Constant(1, {-0.5, 0.9})}};
    auto const theory = theoretical_modes(src, 1.0, f, n, 1.0);
    auto const got = analyze_modes(synthesize_field(src, grid, f, 1.0), grid, n, f);
    double const err = (got.coeffs - theory.coeffs).cwiseAbs().maxCoeff() / theory.coeffs.cwiseAbs().maxCoeff();
    worst = std::max(worst, err);
  }
  return {worst <= 1e-8, "max rel err " + num(worst) + " at kR in {1,5,10}"};
}

Outcome noise()
{
  int const trials = 10000;
  int const degree = 5;
  SphericalGrid const grid(1.0, make_quadrature<double>(degree));
  NoiseModel const model{0.8, 1.0, 20240501};
  FieldSamples const noisy = add_noise(FieldSamples::Zero(grid.rule.size(), trials), grid, model);
  auto const nu = analyze_modes(noisy, grid, degree, Eigen::VectorXd::Zero(trials));
  Eigen::MatrixXcd const cov = nu.coeffs * nu.coeffs.adjoint() / double(trials);
  double var_err = 0.0, corr = 0.0;
  int over = 0;
  double const corr_tol = 3.0 / std::sqrt(double(trials));
  for (Eigen::Index i = 0; i < cov.rows(); ++i) {
    var_err = std::max(var_err, std::abs(cov(i, i).real() / model.sigma0_sq - 1.0));
    for (Eigen::Index j = i + 1; j < cov.rows(); ++j) {
      double const c = std::abs(cov(i, j)) / std::sqrt(cov(i, i).real() * cov(j, j).real());
      corr = std::max(corr, c);
      over += c >= corr_tol;
    }
  }
  bool const ok = var_err <= 0.05 && over == 0;
  return {ok, "max |var/sigma0^2 - 1| " + num(var_err, 4) + ", max |corr| " + num(corr, 4) + " (tol " +
                  num(corr_tol, 4) + ", " + std::to_string(over) + " pairs over)"};
}

Outcome detectability()
{
  bool ok = true;
  std::string detail;
  for (double rho : {1.0, 1e4}) {
    Scenario const s = to_scenario({1.0, 0.5, 1.0, rho});
    auto const report = run_simulation(s);
    double const step = 2 * s.half_bandwidth / 512;
    int detected = 0;
    double margin = 0.0;
    for (auto const &d : report.detections) {
      if (!std::isfinite(d.detected_freq))
        continue;
      ++detected;
      ok = ok && d.detected_freq >= d.critical_freq - step;
      margin = std::max(margin, (d.critical_freq - d.detected_freq) / step);
    }
    ok = ok && std::abs(report.freq_step - step) <= 1e-15;
    if (rho == 1.0)
      ok = ok && report.analysis_degree == 13;
    detail += "rho=" + num(rho) + ": " + std::to_string(detected) + "/" + std::to_string(report.detections.size()) +
              " detected, max (F_n - F^_n)/df " + num(margin, 4) + "; ";
  }
  return {ok, detail};
}

Outcome phi_orthogonality()
{
  double worst = 0.0;
  for (auto const &band : {ModeBand::from_edges(0.5, 1.5), ModeBand::from_edges(3.2, 3.45)}) {
    double const window = 50.0 / band.w_n;
    for (int l = 0; l <= 10; ++l)
      for (int lp = 0; lp <= 10; ++lp) {
        Complex const g = band.w_n * phi_inner(l, lp, band, window);
        worst = std::max(worst, std::abs(g - (l == lp ? 1.0 : 0.0)));
      }
  }
  return {worst <= 1e-6, "max |W_n G - I| " + num(worst)};
}

Outcome sampling()
{
  // coefficient / sample identity
  auto const band = ModeBand::from_edges(2.0, 3.0);
  Spectrum const shaped = [](double f) { return std::polar(1.0 + 0.4 * std::sin(2 * f), 0.9 * f * f); };
  auto const c = fourier_coefficients(shaped, band, -5, 15);
  double id_err = 0.0, peak = 0.0;
  for (int l = -5; l <= 15; ++l) {
    Complex const psi = mode_time_signal(shaped, band, l / band.w_n);
    peak = std::max(peak, std::abs(psi));
    id_err = std::max(id_err, std::abs(band.w_n * c[std::size_t(l + 5)] - psi));
  }
  id_err /= peak;

  // random in-band signal over T_eff, sum of phi_l with Gaussian gains
  double const t_eff = 20.5;
  int const last = int(std::floor(band.w_n * t_eff));
  std::vector<Complex> gains;
  for (int l = 0; l <= last; ++l)
    gains.push_back(complex_gaussian(77, 1, std::uint64_t(l), 1.0));
  Spectrum const spec = [&](double f) {
    Complex acc{0.0, 0.0};
    for (int l = 0; l <= last; ++l)
      acc += gains[std::size_t(l)] * std::polar(1.0, -2 * kPi * f * l / band.w_n);
    return acc / band.w_n;
  };
  auto truth_at = [&](double t) { return mode_time_signal(spec, band, t); };
  auto l2_error = [&](auto const &approx) {
    double err = 0.0, ref = 0.0;
    for (int i = 0; i <= 200; ++i) {
      double const t = t_eff * (0.1 + 0.8 * i / 200.0);
      Complex const truth = truth_at(t);
      err += std::norm(approx(t) - truth);
      ref += std::norm(truth);
    }
    return std::sqrt(err / ref);
  };
  auto const train = sample_mode_signal(spec, band, 0, last);
  double const full = l2_error([&](double t) { return reconstruct(train, band, t); });

  // negative control: half as many samples, so half the bandwidth at twice the spacing
  auto const half_band = ModeBand::from_edges(band.w_0n - band.w_n / 4, band.w_0n + band.w_n / 4);
  SampleTrain half;
  half.l_lo = 0;
  half.l_hi = last / 2;
  half.spacing = 1.0 / half_band.w_n;
  for (int l = half.l_lo; l <= half.l_hi; ++l)
    half.values.push_back(truth_at(l * half.spacing));
  double const halved = l2_error([&](double t) { return reconstruct(half, half_band, t); });

  bool const ok = id_err <= 1e-8 && full <= 1e-2 && halved > 5e-2;
  return {ok, "identity err " + num(id_err, 3) + ", L2 err " + num(full, 3) + " with " + std::to_string(train.size()) +
                  " samples, " + num(halved, 3) + " with " + std::to_string(half.size())};
}

Outcome support()
{
  double const c = 3e8;
  double worst = 0.0;
  bool ok = true;
  for (auto [duration, r] : {std::pair{1e-3, 0.3}, std::pair{2e-6, 30.0}}) {
    auto signal = [&](double t) { return 1.0 + 0.5 * std::sin(2 * kPi * t / duration); };
    for (int n : {0, 1, 3, 8}) {
      auto const m = legendre_support_check(signal, duration, r, n, c);
      double const gap = std::abs(m.support - (duration + 2 * r / c)) / m.grid_step;
      ok = ok && gap <= 1.0;
      worst = std::max(worst, gap);
    }
  }
  return {ok, "max |support - (T + 2r/c)| " + num(worst, 3) + " grid steps"};
}

} // namespace

int main(int argc, char **argv)
{
  std::vector<Criterion> const all{
      {1, "shannon_reduction", 1, shannon},
      {2, "narrowband_reduction", 1, narrowband},
      {3, "pinned_point", 1, pinned},
      {4, "figure_trends", 10, trends},
      {5, "bessel_bound", 5, bessel_bound},
      {6, "harmonic_orthonormality", 5, harmonic_gram_check},
      {7, "jacobi_anger_round_trip", 30, jacobi_anger},
      {8, "projected_noise", 60, noise},
      {9, "cutoff_one_sidedness", 30, detectability},
      {10, "phi_orthogonality", 10, phi_orthogonality},
      {11, "mode_sampling", 10, sampling},
      {12, "convolution_support", 10, support},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i)
    only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (auto const &c : all) {
    if (!only.empty() && !only.contains(c.id))
      continue;
    auto const start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (std::exception const &e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    double const secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool const in_time = secs <= c.budget_s;
    bool const ok = out.passed && in_time;
    failed += !ok;
    std::printf("%s %2d %s: %s [%.2fs of %.0fs]\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(), out.detail.c_str(),
                secs, c.budget_s);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
