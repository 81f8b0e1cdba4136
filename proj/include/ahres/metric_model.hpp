#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace ahres {

using Complex = std::complex<double>;

enum class InnerBc { Dirichlet, Neumann };

/// Sentinel for an infinite evenness order (no odd content at all).
constexpr int kInfiniteOrder = std::numeric_limits<int>::max();

struct NonPositiveWarp : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BadEvenness : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BadDomain : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OutOfDomain : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Rotationally symmetric warp family on the extended interval [-delta0, mu_max]:
///
///   f(mu) = sum_j f_j mu^j  +  eps * |mu|^(k + 1/2)
///
/// realizing a boundary metric h(mu) = f(mu) dtheta^2 whose pullback to x
/// coordinates (mu = x^2) is even in x up to the first odd term eps * x^(2k+1).
/// Models are immutable once built; share freely across threads.
struct WarpedMetricModel {
  int n = 1;  // boundary dimension; formulas keep n symbolic, tests use 1
  std::vector<double> even_coeffs;
  int k = kInfiniteOrder;
  double odd_amplitude = 0.0;  // eps >= 0
  double delta0 = 0.05;
  double mu_max = 1.0;
  InnerBc inner_bc = InnerBc::Dirichlet;

  bool in_domain(double mu) const {
    return mu >= -delta0 - 1e-14 && mu <= mu_max + 1e-14;
  }
};

/// Validates and returns a model. Throws NonPositiveWarp if f <= 0 anywhere on
/// the extension interval (checked by dense sampling), BadEvenness for k < 2,
/// BadDomain for delta0 >= 1 or mu_max < 4*delta0.
WarpedMetricModel build_model(std::vector<double> even_coeffs, int k,
                              double odd_amplitude, double delta0,
                              double mu_max, InnerBc inner_bc, int n = 1);

/// f(mu); strictly positive on the model domain.
double eval_h(const WarpedMetricModel& m, double mu);

/// df/dmu; the one-sided limit is used at mu = 0 (continuous there since k >= 2).
double eval_h_prime(const WarpedMetricModel& m, double mu);

/// gamma(mu) = -f'(mu)/f(mu).  Sign fixed so that the first-conjugated operator
/// is formally symmetric for real spectral parameter with respect to the
/// density f^(1/2) dmu / 2; the self-adjointness oracle in the operator module
/// checks this choice.
double eval_gamma(const WarpedMetricModel& m, double mu);

/// Declared k when the odd amplitude is nonzero, infinite otherwise.
int classify_evenness(const WarpedMetricModel& m);

/// Same evaluators without the domain guard, for the formal polynomial
/// extension used by symbol-level routines. Throws NonPositiveWarp if the
/// extended warp is nonpositive at mu.
double eval_h_extended(const WarpedMetricModel& m, double mu);
double eval_h_prime_extended(const WarpedMetricModel& m, double mu);

enum class Smoothness { CInf, Ck, CkMinus1 };

/// A scalar coefficient mu -> C with a declared smoothness class and domain.
struct CoefficientField {
  std::function<Complex(double)> f;
  Smoothness tag = Smoothness::CInf;
  double lo = 0.0, hi = 0.0;

  Complex operator()(double mu) const {
    if (mu < lo - 1e-14 || mu > hi + 1e-14)
      throw OutOfDomain("coefficient field evaluated at mu=" +
                        std::to_string(mu));
    return f(mu);
  }
};

}  // namespace ahres
