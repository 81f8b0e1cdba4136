#include "ahres/absorption.hpp"

#include <cmath>

namespace ahres {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {
const Complex kI(0.0, 1.0);

double bump_theta(double s, double sharp) {
  return s <= 0.0 ? 0.0 : std::exp(-sharp / s);
}

// Hermitian part with respect to the quadrature inner product.
MatrixXcd sym_weighted(const MatrixXcd& T, const VectorXd& w) {
  MatrixXcd Tadj = w.cwiseInverse().asDiagonal() * T.adjoint() *
                   w.asDiagonal().toDenseMatrix().cast<Complex>();
  return 0.5 * (T + Tadj);
}

// PSD square root of the weighted-Hermitian part of S; small negative
// eigenvalues are clipped, a large negative fraction is a failure.
MatrixXcd sqrt_psd_weighted(const MatrixXcd& S, const VectorXd& w,
                            double regularize = 0.0) {
  const int n = static_cast<int>(S.rows());
  VectorXd e = w.cwiseSqrt();
  MatrixXcd SE = e.asDiagonal() * S * e.cwiseInverse().asDiagonal();
  MatrixXcd H = 0.5 * (SE + SE.adjoint());
  Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(H);
  if (eig.info() != Eigen::Success)
    throw SquareRootFailure("eigendecomposition failed");
  VectorXd lam = eig.eigenvalues();
  double top = lam.cwiseAbs().maxCoeff();
  if (lam.minCoeff() < -0.05 * top)
    throw SquareRootFailure("operator core far from positive semidefinite");
  VectorXd rt(n);
  for (int i = 0; i < n; ++i) {
    double v = std::max(lam[i], 0.0) + regularize;
    rt[i] = std::sqrt(v);
  }
  MatrixXcd R = eig.eigenvectors() * rt.asDiagonal() *
                eig.eigenvectors().adjoint();
  return e.cwiseInverse().asDiagonal() * R * e.asDiagonal().toDenseMatrix()
                                                 .cast<Complex>();
}

// first-order regularized modulus: V diag(l/sqrt(l + c^2)) V^H built on the
// same Hermitian second-order core
MatrixXcd regularized_modulus(const MatrixXcd& S, const VectorXd& w,
                              double c2) {
  VectorXd e = w.cwiseSqrt();
  MatrixXcd SE = e.asDiagonal() * S * e.cwiseInverse().asDiagonal();
  MatrixXcd H = 0.5 * (SE + SE.adjoint());
  Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(H);
  if (eig.info() != Eigen::Success)
    throw SquareRootFailure("eigendecomposition failed");
  VectorXd lam = eig.eigenvalues().cwiseMax(0.0);
  VectorXd mod(lam.size());
  for (int i = 0; i < lam.size(); ++i)
    mod[i] = lam[i] / std::sqrt(lam[i] + c2);
  MatrixXcd R = eig.eigenvectors() * mod.asDiagonal() *
                eig.eigenvectors().adjoint();
  return e.cwiseInverse().asDiagonal() * R * e.asDiagonal().toDenseMatrix()
                                                 .cast<Complex>();
}

}  // namespace

double chi_profile(double mu, const AbsorptionSpec& spec, double delta0) {
  if (mu >= -spec.eps1) return 0.0;
  double s = (-spec.eps1 - mu) / (delta0 - spec.eps1);
  if (s >= 1.0) return 1.0;
  double a = bump_theta(s, spec.sharpness);
  double b = bump_theta(1.0 - s, spec.sharpness);
  return a / (a + b);
}

Complex q_symbol(const WarpedMetricModel& m, const AbsorptionSpec& spec,
                 double mu, double xi, double eta, Complex z, double h) {
  double chi = chi_profile(mu, spec, m.delta0);
  if (chi == 0.0) return 0.0;
  double f = eval_h_extended(m, mu);
  Complex arg = xi * xi + eta * eta / f + z * z +
                spec.C_abs * spec.C_abs * h * h;
  if (std::abs(arg.imag()) < 1e-14 * (1.0 + std::abs(arg.real())) &&
      arg.real() <= 0.0)
    throw BranchCut("square-root argument on the cut at mu=" +
                    std::to_string(mu));
  Complex bracket = 2.0 * (1.0 + coeff_a2(mu)) * xi + z;
  return 2.0 * bracket * std::sqrt(arg) * chi;
}

AbsorptionTriple assemble_Q_frozen(const WarpedMetricModel& m,
                                   const AbsorptionSpec& spec,
                                   const SpectralGrid& grid, int mode_m,
                                   Complex z, double h) {
  if (!(spec.eps1 > 0.0) || spec.eps1 >= m.delta0)
    throw std::invalid_argument("eps1 must lie in (0, delta0)");
  const int n = grid.N + 1;

  VectorXd chi(n), one_a2(n), m2f(n);
  for (int i = 0; i < n; ++i) {
    chi[i] = chi_profile(grid.mu[i], spec, m.delta0);
    one_a2[i] = 1.0 + coeff_a2(grid.mu[i]);
    m2f[i] = mode_m * mode_m / eval_h_extended(m, grid.mu[i]);
  }

  MatrixXcd D = -kI * grid.D1.cast<Complex>();  // quantization of xi
  MatrixXcd first =
      chi.asDiagonal().toDenseMatrix().cast<Complex>() *
      (2.0 * one_a2.asDiagonal().toDenseMatrix().cast<Complex>() * D +
       z * MatrixXcd::Identity(n, n));
  MatrixXcd first_sym = sym_weighted(first, grid.w);

  Complex shift = z * z + spec.C_abs * spec.C_abs * h * h;
  if (std::abs(shift.imag()) < 1e-14 && shift.real() <= 0.0)
    throw BranchCut("frozen absorption shift on the cut");

  MatrixXcd core = D * D;
  core += m2f.asDiagonal().toDenseMatrix().cast<Complex>();

  MatrixXcd second;
  switch (spec.realization) {
    case Realization::MatrixFunction: {
      second = sqrt_psd_weighted(core, grid.w, std::abs(shift));
      break;
    }
    case Realization::PrincipalPolynomial: {
      double c2 = 1.0 + mode_m * mode_m + std::abs(shift);
      second = regularized_modulus(core, grid.w, c2);
      break;
    }
  }

  AbsorptionTriple t;
  t.Q0 = first_sym * second;
  // hard support: kernel confined to the chi > 0 block
  for (int i = 0; i < n; ++i) {
    if (chi[i] == 0.0) {
      t.Q0.row(i).setZero();
      t.Q0.col(i).setZero();
    }
  }
  t.Q1 = MatrixXcd::Zero(n, n);
  t.Q2 = MatrixXcd::Zero(n, n);
  return t;
}

AbsorptionTriple assemble_Q(const WarpedMetricModel& m,
                            const AbsorptionSpec& spec,
                            const SpectralGrid& grid, int mode_m,
                            Complex lambda) {
  Complex z(1.0, 0.0);
  double h = 1.0;
  double al = std::abs(lambda);
  if (al > 0.0) {
    z = lambda / al;
    h = std::min(1.0, 1.0 / al);
  }
  return assemble_Q_frozen(m, spec, grid, mode_m, z, h);
}

SignConditionsReport sign_conditions_report(const WarpedMetricModel& m,
                                            const AbsorptionSpec& spec,
                                            const PhaseGridSpec& pg,
                                            Complex z, double h) {
  SignConditionsReport rep;
  rep.ellipticity_margin = 1e300;
  rep.sign_margin = 1e300;
  rep.edge_ellipticity = 1e300;

  double edge_band = 0.15 * (m.delta0 - spec.eps1);
  for (int a = 0; a <= pg.n_mu; ++a) {
    double mu = -m.delta0 + (m.delta0 - spec.eps1) * a / pg.n_mu;
    double f = eval_h_extended(m, mu);
    for (int b = 0; b <= pg.n_xi; ++b) {
      double xi = -pg.xi_max + 2.0 * pg.xi_max * b / pg.n_xi;
      for (int c = 0; c <= pg.n_eta; ++c) {
        double eta = pg.eta_max * c / pg.n_eta;
        ++rep.samples;
        double p = principal_symbol(m, mu, xi, eta);
        Complex q;
        try {
          q = q_symbol(m, spec, mu, xi, eta, z, h);
        } catch (const BranchCut&) {
          ++rep.branch_cut_hits;
          continue;
        }
        double weight = xi * xi + eta * eta + 1.0;

        if (mu <= -m.delta0 + edge_band) {
          double margin = std::abs(Complex(p, 0.0) - kI * q) / weight;
          rep.ellipticity_margin = std::min(rep.ellipticity_margin, margin);
        }

        // near-characteristic box samples also feed the sign check
        double bracket = 2.0 * (1.0 + coeff_a2(mu)) * xi + z.real();
        if (std::abs(p) < 0.05 * weight && std::abs(bracket) > 1e-9) {
          double sgn = bracket > 0 ? 1.0 : -1.0;
          rep.sign_margin = std::min(rep.sign_margin, sgn * q.real());
        }
      }
    }
  }

  // exact characteristic sweep: for mu < 0 solve 4 mu xi^2 + eta^2/f = 0
  for (int a = 0; a <= pg.n_mu; ++a) {
    double mu = -m.delta0 + (m.delta0 - spec.eps1) * a / pg.n_mu;
    if (mu >= 0.0) continue;
    double f = eval_h_extended(m, mu);
    for (int c = 1; c <= pg.n_eta; ++c) {
      double eta = pg.eta_max * c / pg.n_eta;
      double xi_char = std::sqrt(eta * eta / (4.0 * std::abs(mu) * f));
      for (double xi : {xi_char, -xi_char}) {
        if (std::abs(xi) > pg.xi_max) continue;
        ++rep.samples;
        Complex q;
        try {
          q = q_symbol(m, spec, mu, xi, eta, z, h);
        } catch (const BranchCut&) {
          ++rep.branch_cut_hits;
          continue;
        }
        double weight = xi * xi + eta * eta + 1.0;
        double bracket = 2.0 * (1.0 + coeff_a2(mu)) * xi + z.real();
        if (std::abs(bracket) < 1e-9) continue;
        double sgn = bracket > 0 ? 1.0 : -1.0;
        rep.sign_margin = std::min(rep.sign_margin, sgn * q.real());
        double p = principal_symbol(m, mu, xi, eta);
        double margin = std::abs(Complex(p, 0.0) - kI * q) / weight;
        rep.ellipticity_margin = std::min(rep.ellipticity_margin, margin);
        if (mu <= -m.delta0 + edge_band)
          rep.edge_ellipticity =
              std::min(rep.edge_ellipticity, std::abs(q) / weight);
      }
    }
  }
  return rep;
}

}  // namespace ahres
