#pragma once

#include <numbers>
#include <optional>
#include <vector>

// Observation scenario and the closed-form results built on it: effective
// observation time, per-mode critical frequencies and usable bandwidths, the
// mode truncation indices, and the degrees-of-freedom (DoF) counts.

namespace modecap {

inline constexpr double kDefaultWaveSpeed = 299792458.0;

/// e * pi, the exponential-decay scale relating mode index to kR.
inline constexpr double kModeDecayScale = std::numbers::e * std::numbers::pi;

/// Spherical observation region of radius R, band [F0 - W, F0 + W], time
/// window [0, T], wave speed c, and the detection threshold gamma against the
/// best-case per-mode signal SNR.
struct Scenario
{
  double radius = 0.0;         // m
  double mid_freq = 1.0;       // Hz
  double half_bandwidth = 0.0; // Hz
  double obs_time = 0.0;       // s
  double wave_speed = kDefaultWaveSpeed;
  double threshold = 1.0;      // gamma, linear
  double snr_alpha_max = 1.0;  // linear

  /// Throws DomainError unless every invariant holds.
  void validate() const;

  double snr_ratio() const { return snr_alpha_max / threshold; }
};

/// Wavelength-normalized view: R = a lambda0, W = b F0, T = d / F0,
/// rho = snr_alpha_max / gamma.
struct NormalizedParams
{
  double a = 0.0;
  double b = 0.0;
  double d = 0.0;
  double rho = 1.0;

  void validate() const;
};

NormalizedParams from_scenario(Scenario const &s);

/// Scenario with the given anchor frequency and wave speed; threshold is 1 and
/// snr_alpha_max carries rho.
Scenario to_scenario(NormalizedParams const &p, double mid_freq = 1.0, double wave_speed = kDefaultWaveSpeed);

enum class IndexRounding
{
  ceiling,
  floor
};

/// Constants of the mode cutoff model. The defaults are the physical ones;
/// the knobs exist so that verification can run mutation checks.
struct CutoffModel
{
  double decay_scale = kModeDecayScale;
  IndexRounding rounding = IndexRounding::ceiling;
};

struct ModeBandwidth
{
  int n = 0;
  double critical_freq = 0.0; // F_n, Hz
  double band_lo = 0.0;       // usable band, Hz
  double band_hi = 0.0;
  double eff_bandwidth = 0.0; // W_n = band_hi - band_lo
  double mid_band = 0.0;      // W_0n = (band_lo + band_hi) / 2
};

struct ModeBandwidthProfile
{
  int n_min = 0;
  int n_max = 0;
  std::vector<ModeBandwidth> per_mode; // n = 0 .. max(n_max, n_cap)
};

struct DofBreakdown
{
  double d1 = 0.0; // spatial term (N_max + 1)^2
  double d2 = 0.0; // full-band modes
  double d3 = 0.0; // partial-band modes
  double total = 0.0;
  double t_eff = 0.0;
};

/// T + 2R/c. Independent of mode index, band and threshold.
double effective_time(Scenario const &s);

/// F_n = max(0, n c/(eπR) + c/(2eπR) ln(gamma/SNR_max)); F_0 = 0. Natural
/// logarithm. Throws DomainError for R = 0.
double critical_frequency(Scenario const &s, int n, CutoffModel const &model = {});

struct TruncationIndices
{
  int n_min = 0;
  int n_max = 0;
};

/// N_min/N_max from the ceiling formulas, clamped so 0 <= N_min <= N_max.
TruncationIndices truncation_indices(Scenario const &s, CutoffModel const &model = {});

/// Per-mode usable band. The table covers n = 0 .. n_max, extended to n_cap
/// when given (modes past n_max have zero bandwidth).
ModeBandwidthProfile bandwidth_profile(Scenario const &s, std::optional<int> n_cap = std::nullopt,
                                       CutoffModel const &model = {});

/// Exact mode sum over n <= N_max of (2n+1)(W_n T_eff + 1).
double dof_mode_sum(Scenario const &s, CutoffModel const &model = {});

/// Closed-form upper bound D1 + D2 + D3; each term clamped at zero. R > 0.
DofBreakdown dof_closed_form(Scenario const &s, CutoffModel const &model = {});

/// eta_min/eta_max: the truncation indices in normalized form (valid at a = 0).
TruncationIndices truncation_indices(NormalizedParams const &p);

/// Closed form written directly in (a, b, d, rho). t_eff is in units of 1/F0.
DofBreakdown dof_normalized_breakdown(NormalizedParams const &p);
double dof_normalized(NormalizedParams const &p);

/// Threshold-equals-best-SNR specialization. Valid for R >= 0; R = 0 gives
/// 2WT + 1.
DofBreakdown dof_asymptotic(Scenario const &s);

/// Dispatch used by reports: the closed form for R > 0, the single-point
/// Shannon count 2WT + 1 for R = 0.
DofBreakdown dof_bound(Scenario const &s);

} // namespace modecap
