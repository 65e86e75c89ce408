#pragma once

#include <functional>
#include <vector>

#include "modecap/dofcore.hpp"
#include "modecap/property.hpp"

// Invariant suite run by `modecap verify`. Each check returns one named
// result; the cutoff model is injectable so mutation tests can show that a
// perturbed constant is caught.

namespace modecap {

PropertyResult check_bessel_bound();
PropertyResult check_harmonic_gram();
PropertyResult check_phi_orthogonality();
PropertyResult check_legendre_support();

/// dof_mode_sum <= dof_closed_form over a normalized grid with rho >= 1. The
/// model perturbs the closed form only; the mode sum stays the reference.
PropertyResult check_dof_ordering(CutoffModel const &model = {});

/// SI and normalized closed forms agree; the asymptotic form equals the
/// closed form at rho = 1.
PropertyResult check_dof_consistency();

/// R = 0 gives 2WT + 1; W = 0, rho = 1 gives (ceil(e pi a) + 1)^2.
PropertyResult check_reductions();

/// Empirical cutoffs never precede the analytic ones by more than one grid
/// step (a = 1, b = 0.5, d = 1 at rho = 1 and rho = 1e4).
PropertyResult check_detectability(CutoffModel const &model = {});

struct VerifyOptions
{
  CutoffModel model;
  bool include_simulation = true;
};

std::vector<PropertyResult> run_verify_suite(VerifyOptions const &options = {});

} // namespace modecap
