#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ahres/extended_operator.hpp"
#include "ahres/grid.hpp"
#include "ahres/metric_model.hpp"

namespace ahres {

struct BranchCut : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SquareRootFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Realization { MatrixFunction, PrincipalPolynomial };

/// Complex-absorption recipe. The profile chi is identically zero on
/// mu >= -eps1 and climbs to a flat plateau of height 1 at mu = -delta0.
struct AbsorptionSpec {
  double eps1 = 0.0125;
  double C_abs = 1.0;
  double sharpness = 1.0;
  Realization realization = Realization::MatrixFunction;
};

/// C-infinity cutoff: 0 for mu >= -eps1, 1 at mu = -delta0.
double chi_profile(double mu, const AbsorptionSpec& spec, double delta0);

/// q = 2 [2(1+a2) xi + z] (xi^2 + eta^2/f + z^2 + C^2 h^2)^(1/2) chi(mu),
/// principal branch. Throws BranchCut when the square-root argument lands on
/// the cut (-inf, 0].
Complex q_symbol(const WarpedMetricModel& m, const AbsorptionSpec& spec,
                 double mu, double xi, double eta, Complex z, double h);

/// Matrix realization of Q at frozen (z, h) on the collocation grid; all
/// content sits in Q0 of the triple. Rows and columns at nodes with
/// chi == 0 vanish identically.
AbsorptionTriple assemble_Q_frozen(const WarpedMetricModel& m,
                                   const AbsorptionSpec& spec,
                                   const SpectralGrid& grid, int mode_m,
                                   Complex z, double h);

/// Q at the semiclassical parameters of lambda: z = lambda/|lambda|,
/// h = min(1, 1/|lambda|); lambda == 0 falls back to z = 1, h = 1.
AbsorptionTriple assemble_Q(const WarpedMetricModel& m,
                            const AbsorptionSpec& spec,
                            const SpectralGrid& grid, int mode_m,
                            Complex lambda);

struct SignConditionsReport {
  double ellipticity_margin = 0.0;   // min |p - i q| / (xi^2 + eta^2 + 1) near the edge
  double sign_margin = 0.0;          // min of (+/-) Re q over sampled Sigma_+/-
  double edge_ellipticity = 0.0;     // min |q| / (xi^2 + eta^2 + 1) on Sigma at mu = -delta0
  int branch_cut_hits = 0;
  int samples = 0;
};

struct PhaseGridSpec {
  int n_mu = 24, n_xi = 24, n_eta = 9;
  double xi_max = 8.0, eta_max = 2.0;
};

/// Samples (mu, xi, eta) over [-delta0, -eps1] x annulus and verifies the
/// edge ellipticity and the sign conditions on the characteristic halves
/// (split by the sign of 2(1+a2) xi + Re z). Violations land in the report.
SignConditionsReport sign_conditions_report(const WarpedMetricModel& m,
                                            const AbsorptionSpec& spec,
                                            const PhaseGridSpec& phase_grid,
                                            Complex z, double h = 1.0);

}  // namespace ahres
