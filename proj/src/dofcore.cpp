#include "modecap/dofcore.hpp"

#include <algorithm>
#include <cmath>

#include "modecap/errors.hpp"

namespace modecap {

namespace {

bool finite_all(std::initializer_list<double> values)
{
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

int round_index(double x, IndexRounding rounding)
{
  double const r = (rounding == IndexRounding::ceiling) ? std::ceil(x) : std::floor(x);
  return std::max(0, static_cast<int>(r));
}

void require_positive_radius(Scenario const &s)
{
  if (!(s.radius > 0.0))
    throw DomainError("mode cutoffs are undefined for a point region (R = 0)");
}

} // namespace

void Scenario::validate() const
{
  if (!finite_all({radius, mid_freq, half_bandwidth, obs_time, wave_speed, threshold, snr_alpha_max}))
    throw DomainError("scenario fields must be finite");
  if (radius < 0.0)
    throw DomainError("radius must be >= 0");
  if (!(mid_freq > 0.0))
    throw DomainError("mid-band frequency must be > 0");
  if (half_bandwidth < 0.0 || half_bandwidth > mid_freq)
    throw DomainError("half bandwidth must lie in [0, F0]");
  if (obs_time < 0.0)
    throw DomainError("observation time must be >= 0");
  if (!(wave_speed > 0.0))
    throw DomainError("wave speed must be > 0");
  if (!(threshold > 0.0) || !(snr_alpha_max > 0.0))
    throw DomainError("threshold and maximum SNR must be > 0");
}

void NormalizedParams::validate() const
{
  if (!finite_all({a, b, d, rho}))
    throw DomainError("normalized parameters must be finite");
  if (a < 0.0)
    throw DomainError("a must be >= 0");
  if (b < 0.0 || b > 1.0)
    throw DomainError("b must lie in [0, 1]");
  if (d < 0.0)
    throw DomainError("d must be >= 0");
  if (!(rho > 0.0))
    throw DomainError("rho must be > 0");
}

NormalizedParams from_scenario(Scenario const &s)
{
  s.validate();
  return {s.radius * s.mid_freq / s.wave_speed, s.half_bandwidth / s.mid_freq, s.obs_time * s.mid_freq,
          s.snr_ratio()};
}

Scenario to_scenario(NormalizedParams const &p, double mid_freq, double wave_speed)
{
  p.validate();
  Scenario s;
  s.radius = p.a * wave_speed / mid_freq;
  s.mid_freq = mid_freq;
  s.half_bandwidth = p.b * mid_freq;
  s.obs_time = p.d / mid_freq;
  s.wave_speed = wave_speed;
  s.threshold = 1.0;
  s.snr_alpha_max = p.rho;
  s.validate();
  return s;
}

double effective_time(Scenario const &s)
{
  s.validate();
  return s.obs_time + 2.0 * s.radius / s.wave_speed;
}

double critical_frequency(Scenario const &s, int n, CutoffModel const &model)
{
  s.validate();
  require_positive_radius(s);
  if (n < 0)
    throw DomainError("mode index must be >= 0");
  if (n == 0)
    return 0.0;
  double const unit = s.wave_speed / (model.decay_scale * s.radius);
  double const f = n * unit + 0.5 * unit * std::log(s.threshold / s.snr_alpha_max);
  return std::max(0.0, f);
}

TruncationIndices truncation_indices(Scenario const &s, CutoffModel const &model)
{
  s.validate();
  require_positive_radius(s);
  double const kr_scale = model.decay_scale * s.radius / s.wave_speed;
  double const shift = 0.5 * std::log(s.snr_ratio());
  TruncationIndices idx;
  idx.n_min = round_index(kr_scale * (s.mid_freq - s.half_bandwidth) + shift, model.rounding);
  idx.n_max = std::max(idx.n_min, round_index(kr_scale * (s.mid_freq + s.half_bandwidth) + shift, model.rounding));
  return idx;
}

ModeBandwidthProfile bandwidth_profile(Scenario const &s, std::optional<int> n_cap, CutoffModel const &model)
{
  auto const idx = truncation_indices(s, model);
  double const lo = s.mid_freq - s.half_bandwidth;
  double const hi = s.mid_freq + s.half_bandwidth;

  ModeBandwidthProfile profile;
  profile.n_min = idx.n_min;
  profile.n_max = idx.n_max;
  int const last = std::max(idx.n_max, n_cap.value_or(idx.n_max));
  profile.per_mode.reserve(static_cast<std::size_t>(last) + 1);
  for (int n = 0; n <= last; ++n) {
    ModeBandwidth mode;
    mode.n = n;
    mode.critical_freq = critical_frequency(s, n, model);
    if (n <= idx.n_min) {
      mode.band_lo = lo;
      mode.band_hi = hi;
    } else if (n <= idx.n_max) {
      // the ceiling in N_max can admit a mode whose F_n already exceeds the band
      mode.band_lo = std::min(std::max(lo, mode.critical_freq), hi);
      mode.band_hi = hi;
    } else {
      mode.band_lo = hi;
      mode.band_hi = hi;
    }
    mode.eff_bandwidth = mode.band_hi - mode.band_lo;
    mode.mid_band = 0.5 * (mode.band_lo + mode.band_hi);
    profile.per_mode.push_back(mode);
  }
  return profile;
}

double dof_mode_sum(Scenario const &s, CutoffModel const &model)
{
  auto const profile = bandwidth_profile(s, std::nullopt, model);
  double const t_eff = effective_time(s);
  double total = 0.0;
  for (auto const &mode : profile.per_mode)
    total += (2.0 * mode.n + 1.0) * (mode.eff_bandwidth * t_eff + 1.0);
  return total;
}

DofBreakdown dof_closed_form(Scenario const &s, CutoffModel const &model)
{
  auto const idx = truncation_indices(s, model);
  double const t_eff = effective_time(s);
  double const w = s.half_bandwidth;
  double const f0 = s.mid_freq;
  double const scale_r = model.decay_scale * s.radius / s.wave_speed; // eπR/c
  double const log_ratio = std::log(s.snr_ratio());

  DofBreakdown out;
  out.t_eff = t_eff;
  out.d1 = double(idx.n_max + 1) * double(idx.n_max + 1);
  out.d2 = 2.0 * w * t_eff * double(idx.n_min + 1) * double(idx.n_min + 1);
  double const partial = 2.0 * scale_r * scale_r * (f0 * w - w * w / 3.0) + scale_r * (2.0 * f0 - w) +
                         log_ratio * (scale_r * w + 1.0);
  out.d3 = std::max(0.0, 2.0 * w * t_eff * partial);
  out.total = out.d1 + out.d2 + out.d3;
  return out;
}

TruncationIndices truncation_indices(NormalizedParams const &p)
{
  p.validate();
  double const ea = kModeDecayScale * p.a;
  double const shift = 0.5 * std::log(p.rho);
  TruncationIndices idx;
  idx.n_min = round_index(ea * (1.0 - p.b) + shift, IndexRounding::ceiling);
  idx.n_max = std::max(idx.n_min, round_index(ea * (1.0 + p.b) + shift, IndexRounding::ceiling));
  return idx;
}

DofBreakdown dof_normalized_breakdown(NormalizedParams const &p)
{
  auto const [eta_min, eta_max] = truncation_indices(p);
  double const ea = kModeDecayScale * p.a;
  double const log_rho = std::log(p.rho);
  double const prefix = p.b * (2.0 * p.a + p.d);

  DofBreakdown out;
  out.t_eff = p.d + 2.0 * p.a;
  out.d1 = double(eta_max + 1) * double(eta_max + 1);
  out.d2 = prefix * 2.0 * double(eta_min + 1) * double(eta_min + 1);
  double partial = 0.0;
  if (p.b > 0.0) {
    double const eab2 = 2.0 * ea * p.b;
    partial = eab2 * eab2 * (1.0 / p.b - 1.0 / 3.0) + eab2 * (2.0 / p.b - 1.0) + 2.0 * log_rho * (ea * p.b + 1.0);
  }
  out.d3 = std::max(0.0, prefix * partial);
  out.total = out.d1 + out.d2 + out.d3;
  return out;
}

double dof_normalized(NormalizedParams const &p) { return dof_normalized_breakdown(p).total; }

DofBreakdown dof_asymptotic(Scenario const &s)
{
  s.validate();
  double const t_eff = effective_time(s);
  double const w = s.half_bandwidth;
  double const f0 = s.mid_freq;
  double const scale_r = kModeDecayScale * s.radius / s.wave_speed;
  double const upper = std::ceil(scale_r * (f0 + w)) + 1.0;
  double const lower = std::ceil(scale_r * (f0 - w)) + 1.0;

  DofBreakdown out;
  out.t_eff = t_eff;
  out.d1 = upper * upper;
  out.d2 = 2.0 * w * t_eff * lower * lower;
  out.d3 = w * t_eff * ((2.0 * scale_r) * (2.0 * scale_r) * (f0 * w - w * w / 3.0) + 2.0 * scale_r * (2.0 * f0 - w));
  out.total = out.d1 + out.d2 + out.d3;
  return out;
}

DofBreakdown dof_bound(Scenario const &s)
{
  s.validate();
  if (s.radius > 0.0)
    return dof_closed_form(s);
  DofBreakdown out;
  out.t_eff = s.obs_time;
  out.d1 = 1.0;
  out.d2 = 2.0 * s.half_bandwidth * s.obs_time;
  out.d3 = 0.0;
  out.total = out.d1 + out.d2;
  return out;
}

} // namespace modecap
