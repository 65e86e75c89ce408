#include "modecap/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "modecap/quadrature.hpp"
#include "modecap/sampling.hpp"
#include "modecap/simulation.hpp"
#include "modecap/specfun.hpp"

namespace modecap {

namespace {

std::vector<double> linspace(double lo, double hi, int count)
{
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    out[static_cast<std::size_t>(i)] = count == 1 ? lo : lo + (hi - lo) * i / double(count - 1);
  return out;
}

// a > 0 so that every point has a mode structure
std::vector<NormalizedParams> ordering_grid(std::vector<double> const &rhos)
{
  std::vector<NormalizedParams> grid;
  for (double a : linspace(0.1, 2.0, 20))
    for (double b : linspace(0.0, 1.0, 21))
      for (double d : {0.5, 1.0, 2.0})
        for (double rho : rhos)
          grid.push_back({a, b, d, rho});
  return grid;
}

} // namespace

PropertyResult check_bessel_bound()
{
  PropertyResult r{"bessel_bound", true, 0.0, 1.0 + 1e-12, "max |j_n(z)| / bound, n <= 60, z = 0.1 .. 100"};
  for (int k = 1; k <= 1000; ++k) {
    double const z = 0.1 * k;
    auto const j = sph_bessel_j_all<double>(60, z);
    for (int n = 0; n <= 60; ++n) {
      double const bound = sph_bessel_j_bound<double>(n, z);
      double const mag = std::abs(j(n));
      if (mag > bound * r.tolerance)
        r.passed = false;
      if (bound > 0.0)
        r.value = std::max(r.value, mag / bound);
    }
  }
  return r;
}

PropertyResult check_harmonic_gram()
{
  auto const rule = make_quadrature<double>(15);
  Eigen::MatrixXcd const gram = harmonic_gram(rule, 15);
  double const err = (gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  return {"harmonic_gram", err <= 1e-10, err, 1e-10, "max |G - I|, degree <= 15"};
}

PropertyResult check_phi_orthogonality()
{
  double worst = 0.0;
  for (auto const &band : {ModeBand::from_edges(2.0, 3.0), ModeBand::from_edges(1.25, 1.5)}) {
    double const window = 50.0 / band.w_n;
    for (int l = 0; l <= 10; ++l)
      for (int lp = 0; lp <= 10; ++lp) {
        std::complex<double> const g = band.w_n * phi_inner(l, lp, band, window);
        worst = std::max(worst, std::abs(g - (l == lp ? 1.0 : 0.0)));
      }
  }
  return {"phi_orthogonality", worst <= 1e-6, worst, 1e-6, "max |W_n G - I|, l <= 10, two bands"};
}

PropertyResult check_legendre_support()
{
  constexpr double c = 3e8;
  struct Case
  {
    double duration;
    double r;
  };
  double worst = 0.0;
  bool ok = true;
  for (Case const cs : {Case{1e-3, 0.3}, Case{2e-6, 30.0}}) {
    auto signal = [&](double t) { return 1.0 + 0.5 * std::sin(2.0 * std::numbers::pi * t / cs.duration); };
    double const expected = cs.duration + 2.0 * cs.r / c;
    for (int n : {0, 1, 3, 8}) {
      auto const m = legendre_support_check(signal, cs.duration, cs.r, n, c);
      double const gap = std::abs(m.support - expected);
      ok = ok && gap <= m.grid_step;
      worst = std::max(worst, gap / m.grid_step);
    }
  }
  return {"legendre_support", ok, worst, 1.0, "max |support - (T + 2r/c)| in grid steps"};
}

PropertyResult check_dof_ordering(CutoffModel const &model)
{
  PropertyResult r{"dof_ordering", true, 0.0, 1.0, "max mode-sum / closed-form, rho in {1, 2}"};
  for (auto const &p : ordering_grid({1.0, 2.0})) {
    Scenario const s = to_scenario(p);
    double const ratio = dof_mode_sum(s) / dof_closed_form(s, model).total;
    r.value = std::max(r.value, ratio);
  }
  r.passed = r.value <= r.tolerance * (1.0 + 1e-12);
  return r;
}

PropertyResult check_dof_consistency()
{
  PropertyResult r{"dof_consistency", true, 0.0, 1e-9, "max relative gap: SI vs normalized, asymptotic at rho = 1"};
  for (auto const &p : ordering_grid({0.5, 1.0, 2.0})) {
    Scenario const s = to_scenario(p);
    double const closed = dof_closed_form(s).total;
    r.value = std::max(r.value, std::abs(closed - dof_normalized(p)) / closed);
    if (p.rho == 1.0)
      r.value = std::max(r.value, std::abs(closed - dof_asymptotic(s).total) / closed);
  }
  r.passed = r.value <= r.tolerance;
  return r;
}

PropertyResult check_reductions()
{
  PropertyResult r{"dof_reductions", true, 0.0, 1e-9, "R = 0 gives 2WT + 1; W = 0 gives (ceil(e pi a) + 1)^2"};
  for (double wt : {1.0, 10.0, 100.0}) {
    Scenario s;
    s.mid_freq = 1.0;
    s.half_bandwidth = 0.5;
    s.obs_time = wt / s.half_bandwidth;
    double const want = 2.0 * wt + 1.0;
    r.value = std::max(r.value, std::abs(dof_asymptotic(s).total - want) / want);
  }
  for (double a : {0.5, 1.0, 2.0}) {
    double const side = std::ceil(kModeDecayScale * a) + 1.0;
    if (dof_normalized({a, 0.0, 1.0, 1.0}) != side * side)
      r.passed = false;
  }
  r.passed = r.passed && r.value <= r.tolerance;
  return r;
}

PropertyResult check_detectability(CutoffModel const &model)
{
  PropertyResult r{"detectability", true, 0.0, 1.0, ""};
  std::string detail = "max (F_n - detected) / grid step;";
  for (double rho : {1.0, 1e4}) {
    Scenario const s = to_scenario({1.0, 0.5, 1.0, rho});
    auto const report = run_simulation(s, {}, model);
    int detected = 0;
    for (auto const &d : report.detections) {
      r.passed = r.passed && d.passed;
      if (std::isfinite(d.detected_freq)) {
        ++detected;
        r.value = std::max(r.value, (d.critical_freq - d.detected_freq) / report.freq_step);
      }
    }
    detail += (rho == 1.0 ? " rho=1: " : " rho=1e4: ") + std::to_string(detected) + " of " +
              std::to_string(report.detections.size()) + " modes detected";
  }
  r.detail = detail;
  return r;
}

std::vector<PropertyResult> run_verify_suite(VerifyOptions const &options)
{
  std::vector<PropertyResult> out{check_bessel_bound(),
                                  check_harmonic_gram(),
                                  check_phi_orthogonality(),
                                  check_legendre_support(),
                                  check_dof_ordering(options.model),
                                  check_dof_consistency(),
                                  check_reductions()};
  if (options.include_simulation)
    out.push_back(check_detectability(options.model));
  return out;
}

} // namespace modecap
