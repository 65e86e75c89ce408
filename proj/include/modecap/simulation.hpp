#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "modecap/dofcore.hpp"
#include "modecap/property.hpp"

// End-to-end brute-force run: random band-limited plane-wave sources,
// synthesis on a sphere, noisy projection, per-mode SNR and the empirical
// cutoff frequencies compared with the analytic ones.

namespace modecap {

struct SimulationConfig
{
  int sources = 3;
  int freq_points = 513;
  std::optional<int> quadrature_degree; // default: the smallest adequate one
  std::uint64_t seed = 1;
  int trials = 1;
};

struct ModeDetection
{
  int n = 0;
  double critical_freq = 0.0; // analytic F_n
  double detected_freq = 0.0; // first grid frequency with max_m SNR >= gamma; +inf if none
  bool passed = false;
};

struct SimulationReport
{
  int analysis_degree = 0;   // N_max
  int field_degree = 0;      // content degree of the synthesized field
  int quadrature_degree = 0; // rule degree actually used
  double freq_step = 0.0;
  double alpha_max_sq = 0.0;
  double sigma0_sq = 0.0;
  std::vector<ModeDetection> detections; // n = 1 .. N_max
  std::vector<PropertyResult> properties;

  bool passed() const;
};

/// Throws ResolutionError (carrying the required degree) if
/// config.quadrature_degree is below N_max plus the field degree.
SimulationReport run_simulation(Scenario const &s, SimulationConfig const &config = {},
                                CutoffModel const &model = {});

} // namespace modecap
