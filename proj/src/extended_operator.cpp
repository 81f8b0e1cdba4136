#include "ahres/extended_operator.hpp"

#include <cmath>

namespace ahres {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {
const Complex kI(0.0, 1.0);

// phi with e^phi = mu^(1/2) (1+mu)^(-1/4)
double phase_phi(double mu) {
  return 0.5 * std::log(mu) - 0.25 * std::log1p(mu);
}

double sigma_max_estimate(const MatrixXcd& T, int iters = 40) {
  VectorXcd v = VectorXcd::Ones(T.cols());
  v.normalize();
  double s = 0.0;
  for (int it = 0; it < iters; ++it) {
    VectorXcd w = T * v;
    v = T.adjoint() * w;
    s = std::sqrt(v.norm());
    if (v.norm() == 0.0) return 0.0;
    v.normalize();
  }
  return s;
}

}  // namespace

double coeff_a2(double mu) { return -mu / (2.0 * (1.0 + mu)); }

CoefficientSet assemble_coefficients(const WarpedMetricModel& m,
                                     Complex lambda) {
  CoefficientSet cs;
  cs.n = m.n;
  cs.lambda = lambda;
  double lo = -m.delta0, hi = m.mu_max;
  bool rough = m.odd_amplitude > 0.0;

  cs.a2 = CoefficientField{[](double mu) { return Complex(coeff_a2(mu)); },
                           Smoothness::CInf, lo, hi};
  cs.b1 = CoefficientField{
      [&m](double mu) { return 2.0 * kI * eval_gamma(m, mu); },
      rough ? Smoothness::CkMinus1 : Smoothness::CInf, lo, hi};
  cs.b2 = CoefficientField{
      [&m, lambda](double mu) {
        double g = eval_gamma(m, mu);
        Complex inner = (lambda / 4.0 + kI) * (mu / (1.0 + mu)) -
                        Complex(1.0, 1.0) - kI * g * (2.0 + mu) / 2.0;
        return inner / (1.0 + mu);
      },
      rough ? Smoothness::CkMinus1 : Smoothness::CInf, lo, hi};
  cs.c1 = CoefficientField{
      [&m](double mu) {
        return Complex((m.n - 1) * 0.5 * eval_gamma(m, mu));
      },
      rough ? Smoothness::CkMinus1 : Smoothness::CInf, lo, hi};
  return cs;
}

Complex pencil_coeff_zeroth(const WarpedMetricModel& m, int mode_m,
                            double mu) {
  double f = eval_h_extended(m, mu);
  double g = eval_gamma(m, mu);
  return Complex(mode_m * mode_m / f + 0.5 * m.n * g);
}

Complex pencil_coeff_lambda1(const WarpedMetricModel& m, double mu) {
  double g = eval_gamma(m, mu);
  double om = 1.0 + mu;
  return kI * (mu / (om * om) - 1.0 / om - g * (2.0 + mu) / (2.0 * om));
}

double pencil_coeff_lambda2(double mu) {
  double om = 1.0 + mu;
  return -(4.0 + 3.0 * mu) / (4.0 * om * om);
}

OperatorPencil assemble_pencil(const WarpedMetricModel& m,
                               std::shared_ptr<const SpectralGrid> grid,
                               int mode_m, const AbsorptionTriple* absorption,
                               std::optional<InnerBc> edge_closure) {
  if (!grid) throw GridModelMismatch("pencil needs a grid");
  if (std::abs(grid->delta0 - m.delta0) > 1e-12 ||
      std::abs(grid->mu_max - m.mu_max) > 1e-12)
    throw GridModelMismatch("grid interval does not match the model");
  if (mode_m < 0) throw std::invalid_argument("mode index must be >= 0");
  if (!absorption && !edge_closure)
    throw MissingAbsorptionAtEdge(
        "pencil requested without absorption and without an explicit edge "
        "closure");

  const int n = grid->N + 1;
  const VectorXd& mu = grid->mu;

  VectorXcd z0(n), z1(n);
  VectorXd first(n), lam1re(n), c2(n), one_a2(n);
  for (int i = 0; i < n; ++i) {
    double g = eval_gamma(m, mu[i]);
    first[i] = -4.0 + 2.0 * g * mu[i];
    z0[i] = pencil_coeff_zeroth(m, mode_m, mu[i]);
    z1[i] = pencil_coeff_lambda1(m, mu[i]);
    c2[i] = pencil_coeff_lambda2(mu[i]);
    one_a2[i] = 1.0 + coeff_a2(mu[i]);
  }

  OperatorPencil p;
  p.mode_m = mode_m;
  p.closure = m.inner_bc;
  p.grid = grid;
  p.absorbed = absorption != nullptr;

  p.A = (-4.0 * mu.asDiagonal().toDenseMatrix() * grid->D2 +
         first.asDiagonal().toDenseMatrix() * grid->D1)
            .cast<Complex>();
  p.A += z0.asDiagonal();
  p.B = (4.0 * kI) * (one_a2.asDiagonal().toDenseMatrix() * grid->D1)
                         .cast<Complex>();
  p.B += z1.asDiagonal();
  p.C = MatrixXcd::Zero(n, n);
  p.C.diagonal() = c2.cast<Complex>();

  auto close_row = [&](int row, InnerBc bc) {
    p.A.row(row).setZero();
    p.B.row(row).setZero();
    p.C.row(row).setZero();
    if (bc == InnerBc::Dirichlet)
      p.A(row, row) = 1.0;
    else
      p.A.row(row) = grid->D1.row(row).cast<Complex>();
  };

  close_row(0, m.inner_bc);  // mu = mu_max
  if (!absorption) close_row(n - 1, *edge_closure);

  if (absorption) {
    p.A -= kI * absorption->Q0;
    p.B -= kI * absorption->Q1;
    p.C -= kI * absorption->Q2;
  }
  return p;
}

double principal_symbol(const WarpedMetricModel& m, double mu, double xi,
                        double eta) {
  return 4.0 * mu * xi * xi + eta * eta / eval_h_extended(m, mu);
}

Complex semiclassical_symbol(const WarpedMetricModel& m, double mu, double xi,
                             double eta, Complex z) {
  if (std::abs(std::abs(z) - 1.0) > 1e-12)
    throw std::invalid_argument("semiclassical direction z must be unimodular");
  double f = eval_h_extended(m, mu);
  return 4.0 * mu * xi * xi - 4.0 * (1.0 + coeff_a2(mu)) * z * xi - z * z +
         eta * eta / f;
}

double conjugation_roundtrip(const WarpedMetricModel& m, Complex lambda,
                             const BumpFunction& u, int N, int mode_m) {
  if (!(u.lo() > 0.0))
    throw SupportViolation("manufactured function touches mu <= 0");
  if (!(u.hi() < m.mu_max))
    throw SupportViolation("manufactured function touches mu = mu_max");

  // path (i): assembled pencil on the mu grid
  auto grid = std::make_shared<SpectralGrid>(
      build_grid(N, m.delta0, m.mu_max, 2.0));
  OperatorPencil pen =
      assemble_pencil(m, grid, mode_m, nullptr, m.inner_bc);
  const int n = grid->N + 1;
  VectorXcd uvec(n);
  for (int i = 0; i < n; ++i) uvec[i] = u(grid->mu[i]);
  VectorXcd lhs = pen.at(lambda) * uvec;

  // path (ii): weight/conjugate to x coordinates, apply the spatial operator
  double xa = std::sqrt(u.lo()), xb = std::sqrt(u.hi());
  VectorXd x;
  MatrixXd Dx;
  chebyshev_lobatto(N, xa, xb, x, Dx);
  MatrixXd Dx2 = Dx * Dx;

  double ex = 0.25 * (m.n + 2.0) - 0.5;  // mu-power in the conjugating weight
  VectorXcd v(N + 1);
  for (int i = 0; i <= N; ++i) {
    double mux = x[i] * x[i];
    Complex wgt =
        std::exp(Complex(ex) * std::log(mux) - kI * lambda * phase_phi(mux));
    v[i] = wgt * u(mux);
  }
  VectorXcd dv = Dx * v, ddv = Dx2 * v;
  VectorXcd applied(N + 1);
  for (int i = 0; i <= N; ++i) {
    double xi_ = x[i], mux = xi_ * xi_;
    double F = eval_h(m, mux);
    double Fp_over_F = 2.0 * xi_ * eval_h_prime(m, mux) / F;
    applied[i] = -mux * ddv[i] - 0.5 * mux * Fp_over_F * dv[i] +
                 (mode_m * mode_m * mux / F - 0.25 * m.n * m.n -
                  lambda * lambda) *
                     v[i];
  }

  // pull the result back to the mu grid nodes inside the support
  VectorXcd chain = VectorXcd::Zero(n);
  Eigen::VectorXd bw = chebyshev_bary_weights(N);
  // reference coordinates of the x grid are its own Chebyshev nodes
  for (int i = 0; i < n; ++i) {
    double muv = grid->mu[i];
    if (muv <= u.lo() || muv >= u.hi()) continue;
    double xq = std::sqrt(muv);
    VectorXd target(1);
    target[0] = xq;
    VectorXcd val = barycentric_interpolate(x, bw, applied, target);
    Complex wgt = std::exp(Complex(-ex) * std::log(muv) +
                           kI * lambda * phase_phi(muv));
    chain[i] = wgt * val[0];
  }

  double scale = chain.cwiseAbs().maxCoeff();
  if (scale == 0.0) return (lhs.cwiseAbs().maxCoeff() == 0.0) ? 0.0 : 1.0;
  return (lhs - chain).cwiseAbs().maxCoeff() / scale;
}

double selfadjointness_defect(const WarpedMetricModel& m, double lambda,
                              int N, int mode_m, bool flip_gamma_sign) {
  // first-conjugation-stage operator, Legendre-Lobatto collocation on
  // [0, mu_max]; the boundary closure at mu_max is eliminated, no condition
  // is needed at the degenerate end mu = 0.
  LglGrid g = legendre_lobatto(N, 0.0, m.mu_max);
  const int n = N + 1;
  MatrixXd D2 = g.D * g.D;

  double sgn = flip_gamma_sign ? -1.0 : 1.0;
  MatrixXcd M(n, n);
  M.setZero();
  Complex lam(lambda, 0.0);
  for (int i = 0; i < n; ++i) {
    double mu = g.x[i];
    double f = eval_h(m, mu);
    double gam = sgn * eval_gamma(m, mu);
    for (int j = 0; j < n; ++j)
      M(i, j) = -4.0 * mu * D2(i, j) +
                (4.0 * kI * lam - 4.0 + 2.0 * gam * mu) * g.D(i, j);
    M(i, i) += mode_m * mode_m / f - kI * lam * gam + 0.5 * m.n * gam;
  }

  // eliminate the inner boundary closure at mu_max (last LGL node)
  MatrixXcd Mr;
  MatrixXd Dr;
  if (m.inner_bc == InnerBc::Dirichlet) {
    Mr = M.topLeftCorner(n - 1, n - 1);
    Dr = g.D.topLeftCorner(n - 1, n - 1);
  } else {
    // u'(mu_max) = 0: u_N = -sum_j D(N,j)/D(N,N) u_j
    Eigen::RowVectorXd r = -g.D.row(n - 1).head(n - 1) / g.D(n - 1, n - 1);
    Mr = M.topLeftCorner(n - 1, n - 1) +
         M.col(n - 1).head(n - 1) * r.cast<Complex>();
    Dr = g.D.topLeftCorner(n - 1, n - 1) +
         g.D.col(n - 1).head(n - 1) * r;
  }

  const int nr = n - 1;
  VectorXd wts(nr);
  for (int i = 0; i < nr; ++i)
    wts[i] = 0.5 * g.w[i] * std::sqrt(eval_h(m, g.x[i]));
  VectorXd e = wts.cwiseSqrt();

  MatrixXcd ME = e.asDiagonal() * Mr * e.cwiseInverse().asDiagonal();
  MatrixXd GE = e.asDiagonal() * Dr * e.cwiseInverse().asDiagonal();
  MatrixXcd L = (GE.transpose() * GE).cast<Complex>();
  MatrixXcd S = MatrixXcd::Identity(nr, nr) + L;

  Eigen::PartialPivLU<MatrixXcd> slu(S);
  MatrixXcd Minv_scaled = slu.solve(ME.transpose()).transpose();
  MatrixXcd Einv_scaled =
      slu.solve((ME - ME.adjoint()).transpose()).transpose();
  double denom = sigma_max_estimate(Minv_scaled);
  double numer = sigma_max_estimate(Einv_scaled);
  return numer / denom;
}

}  // namespace ahres
