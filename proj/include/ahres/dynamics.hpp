#pragma once

#include <optional>
#include <vector>

#include "ahres/metric_model.hpp"

namespace ahres {

struct OutsideNeighborhood : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotCharacteristic : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonRealZ : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Point of T*X in (mu, y, xi, eta) coordinates.
struct PhasePoint {
  double mu = 0.0, y = 0.0, xi = 0.0, eta = 0.0;
};

/// Fiber-compactified coordinates: rho_tilde = 1/|xi| >= 0 (0 is the sphere
/// at infinity), eta_hat = eta/|xi|, sign of xi kept separately.
struct ProjectivePoint {
  double mu = 0.0, y = 0.0, rho_tilde = 0.0, eta_hat = 0.0;
  int sgn_xi = +1;

  /// rho-hat-0 = |eta_hat|^2_h + rho_tilde^4, the defining function of the
  /// radial sets L_+- used by the margin checks.
  double rho0(const WarpedMetricModel& m) const;

  static ProjectivePoint from_phase(const PhasePoint& p);
  PhasePoint to_phase() const;  // requires rho_tilde > 0
};

struct TrajectorySample {
  double t = 0.0;
  double mu = 0.0, y = 0.0, xi = 0.0, eta = 0.0;
  double p_residual = 0.0;  // |p - p(0)| vs (1+|p(0)|), scaled form near infinity
};

using Trajectory = std::vector<TrajectorySample>;

enum class FlowTag { ToLPlus, ToLMinus, ExitInner, ExitOuter, Undecided };

struct FlowClassification {
  FlowTag tag = FlowTag::Undecided;
  double time = 0.0;
  Trajectory trajectory;
};

/// H_p in (mu, y, xi, eta): (8 mu xi, 2 eta / f, -4 xi^2 - eta^2 (1/f)',  0).
std::array<double, 4> hamiltonian_field(const WarpedMetricModel& m,
                                        const PhasePoint& p);

/// Hamilton field of the semiclassical symbol at real z:
/// (4(2 mu xi - (1+a2) z), 2 eta / f, -(4 xi^2 - 4 z xi a2' + eta^2 (1/f)'), 0).
std::array<double, 4> semiclassical_field(const WarpedMetricModel& m,
                                          const PhasePoint& p, Complex z);

/// Fiber-rescaled flow report at a projective point. Components carry the
/// clock in which each displayed quantity is conventionally stated:
///   mu_w        = |xi|^{-1} H_p mu            = 8 sgn(xi) mu
///   y_w         = |xi|^{-1} H_p y             = 2 eta_hat / f
///   rho_hp      = H_p rho_tilde               = 4 sgn(xi) + a'
///   etahat_sq_w = |xi|^{-1} H_p |eta_hat|^2_h = 8 sgn(xi)|eta_hat|^2 + a
/// where a and a' are the warp-curvature corrections vanishing on the conormal
/// bundle of {mu = 0}.
struct RescaledField {
  double mu_w = 0.0, y_w = 0.0, rho_hp = 0.0, etahat_sq_w = 0.0;
};
RescaledField rescaled_field(const WarpedMetricModel& m,
                             const ProjectivePoint& q);

/// Adaptive integration of the classical flow; switches internally to the
/// compactified variables when |xi| grows. The trajectory samples carry the
/// energy-conservation residual.
Trajectory integrate_flow(const WarpedMetricModel& m, const PhasePoint& p0,
                          double t_span, double tol = 1e-12);

/// Event-detected classification of a null bicharacteristic. Capture at L_+-
/// is declared at rho0 + mu^2 < 1e-10; exits fire at mu <= -eps0 (inner) and
/// mu >= +outer threshold. `backward` integrates the reversed flow.
FlowClassification classify_trajectory(const WarpedMetricModel& m,
                                       const PhasePoint& p0, double eps0,
                                       double t_max, bool backward = false);

/// Semiclassical version (real z), classification per the source/sink
/// refinement for non-trapping warps.
FlowClassification semiclassical_classify(const WarpedMetricModel& m,
                                          const PhasePoint& p0, double z_real,
                                          double eps0, double t_max,
                                          bool backward = false);

/// Declared neighborhood radius for the radial-set margin checks.
constexpr double kRadialNeighborhood = 1e-2;

struct RadialMargin {
  double margin16 = 0.0;  // sgn(xi) W rho0 - 16 rho0
  double margin8 = 0.0;   // sgn(xi) W rho0 -  8 rho0
  double rho0 = 0.0;
};

/// Quantitative radial-point inequality at q. Returns the margin against the
/// constant-16 normalization; both normalizations are in the detail struct
/// (which constant admits a uniform O(rho0^{3/2}) correction is recorded by
/// the radial report below). Throws OutsideNeighborhood when rho0 or mu are
/// too large for the statement to apply.
double radial_inequality_margin(const WarpedMetricModel& m,
                                const ProjectivePoint& q);
RadialMargin radial_margin_detail(const WarpedMetricModel& m,
                                  const ProjectivePoint& q);

struct RadialSweepReport {
  double fitted_C16 = 0.0, fitted_C8 = 0.0;      // max(0, -margin/rho0^{3/2})
  double fine_C16 = 0.0, fine_C8 = 0.0;          // same, fitted on rho0 < coarse/100
  bool sixteen_holds = false, eight_holds = false;
  int samples = 0;
};

/// Fits the correction constants over random samples with rho0 below the
/// given threshold and decides which normalization admits a threshold-stable
/// constant.
RadialSweepReport radial_sweep(const WarpedMetricModel& m, int samples,
                               unsigned long long seed,
                               double rho0_max = 1e-2);

struct ImSignReport {
  double min_margin = 0.0;  // of -sign(Im z) sgn(xi) Im p over the samples
  int samples = 0;
};

struct ImSignRegion {
  double rho_max = 0.02;   // fiber compactification band near S*X
  double eta_hat_max = 0.5;
  int n = 50;              // samples per axis
};

ImSignReport im_symbol_sign_report(const WarpedMetricModel& m, Complex z,
                                   const ImSignRegion& region);

/// Commutant principal-symbol margins from the positive-commutator arguments,
/// evaluated on samples near L_+- with the concrete mollified-step localizer
/// phi(t) = exp(-t/(r0 - t)). Windows:
///   direct   needs s - 1/2 + Im(lambda) - delta > 0 and certifies margin <= 0,
///   adjoint  needs s < 1/2 + Im(lambda)         and certifies margin >= 0,
///   semiclassical variant (real z) mirrors the direct one.
struct CommutantReport {
  double window_direct = 0.0, window_adjoint = 0.0;
  bool direct_window_ok = false, adjoint_window_ok = false;
  double worst_direct = 0.0;   // max over samples (want <= 0)
  double worst_adjoint = 0.0;  // min over samples (want >= 0)
  double worst_semicl = 0.0;   // max over samples (want <= 0)
  int samples = 0;
};

CommutantReport commutant_symbol_margin(const WarpedMetricModel& m, double s,
                                        double im_lambda, double delta,
                                        double eps,
                                        const std::vector<ProjectivePoint>&
                                            phase_samples,
                                        double z_real = 1.0);

/// Samples near L_+- suitable for the commutant and radial checks:
/// rho0 <= rho0_max, |mu| <= sqrt(rho0), both fiber signs.
std::vector<ProjectivePoint> sample_near_radial_sets(
    const WarpedMetricModel& m, int count, unsigned long long seed,
    double rho0_max);

/// Null seeds on the classical characteristic set (mu < 0), split evenly
/// between the two halves.
std::vector<PhasePoint> sample_characteristic_seeds(
    const WarpedMetricModel& m, int count, unsigned long long seed,
    double mu_lo, double mu_hi);

/// Seeds on the semiclassical characteristic set at real z.
std::vector<PhasePoint> sample_semiclassical_seeds(
    const WarpedMetricModel& m, double z_real, int count,
    unsigned long long seed, double mu_lo, double mu_hi);

}  // namespace ahres
