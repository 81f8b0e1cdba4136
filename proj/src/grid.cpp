#include "ahres/grid.hpp"

#include <cmath>

namespace ahres {

namespace {

// Ratio condition locating the map center: sinh(a(1-t0))/sinh(a(1+t0)) = q.
double center_ratio(double alpha, double t0) {
  return std::sinh(alpha * (1.0 - t0)) / std::sinh(alpha * (1.0 + t0));
}

double solve_t0(double alpha, double q) {
  double lo = -1.0 + 1e-9, hi = 1.0 - 1e-9;
  // ratio decreases in t0 from +inf to ~0
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (center_ratio(alpha, mid) > q ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double solve_alpha(double t0, double q, double alpha_hint) {
  // center_ratio is monotone in alpha for fixed t0 < 0 (q > 1 case)
  double lo = 1e-4, hi = std::max(4.0 * alpha_hint, 30.0);
  if (center_ratio(lo, t0) > q) return lo;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (center_ratio(mid, t0) < q ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void chebyshev_lobatto(int N, double a, double b, Eigen::VectorXd& x,
                       Eigen::MatrixXd& D) {
  x.resize(N + 1);
  Eigen::VectorXd t(N + 1);
  for (int i = 0; i <= N; ++i) t[i] = std::cos(M_PI * i / N);
  double c = 0.5 * (b - a);
  for (int i = 0; i <= N; ++i) x[i] = a + c * (t[i] + 1.0);

  D.resize(N + 1, N + 1);
  Eigen::VectorXd cc(N + 1);
  for (int i = 0; i <= N; ++i)
    cc[i] = ((i == 0 || i == N) ? 2.0 : 1.0) * ((i % 2) ? -1.0 : 1.0);
  for (int i = 0; i <= N; ++i)
    for (int j = 0; j <= N; ++j)
      if (i != j) D(i, j) = (cc[i] / cc[j]) / (t[i] - t[j]);
  // negative row-sum trick keeps D * const == 0 exactly
  for (int i = 0; i <= N; ++i) {
    double s = 0.0;
    for (int j = 0; j <= N; ++j)
      if (i != j) s += D(i, j);
    D(i, i) = -s;
  }
  D /= c;
}

Eigen::VectorXd clenshaw_curtis_weights(int N) {
  Eigen::VectorXd w(N + 1);
  for (int i = 0; i <= N; ++i) {
    double theta = M_PI * i / N;
    double s = 0.0;
    for (int k = 1; k <= N / 2; ++k) {
      double bk = (2 * k == N) ? 1.0 : 2.0;
      s += bk * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
    }
    double ci = (i == 0 || i == N) ? 1.0 : 2.0;
    w[i] = (ci / N) * (1.0 - s);
  }
  return w;
}

Eigen::VectorXd chebyshev_bary_weights(int N) {
  Eigen::VectorXd bw(N + 1);
  for (int i = 0; i <= N; ++i) {
    bw[i] = (i % 2) ? -1.0 : 1.0;
    if (i == 0 || i == N) bw[i] *= 0.5;
  }
  return bw;
}

SpectralGrid build_grid(int N, double delta0, double mu_max,
                        double clustering) {
  if (N < 16) throw BadParameters("grid degree N must be >= 16");
  if (!(delta0 > 0.0) || !(mu_max > 0.0))
    throw BadParameters("grid interval must satisfy delta0, mu_max > 0");
  if (clustering < 0.0) throw BadParameters("clustering must be >= 0");

  SpectralGrid g;
  g.N = N;
  g.delta0 = delta0;
  g.mu_max = mu_max;
  g.clustering = clustering;

  g.t.resize(N + 1);
  for (int i = 0; i <= N; ++i) g.t[i] = std::cos(M_PI * i / N);

  Eigen::MatrixXd Dt(N + 1, N + 1);
  {
    Eigen::VectorXd dummy;
    chebyshev_lobatto(N, -1.0, 1.0, dummy, Dt);
  }
  Eigen::VectorXd wt = clenshaw_curtis_weights(N);

  g.mu.resize(N + 1);
  Eigen::VectorXd dmu(N + 1);
  double q = mu_max / delta0;

  if (clustering == 0.0) {
    double c = 0.5 * (mu_max + delta0);
    for (int i = 0; i <= N; ++i) {
      g.mu[i] = -delta0 + c * (g.t[i] + 1.0);
      dmu[i] = c;
    }
    g.map_A = 0.0;
  } else {
    double t0 = solve_t0(clustering, q);
    // snap the map center onto the nearest interior node so mu = 0 is a node
    int j0 = 1;
    for (int i = 1; i < N; ++i)
      if (std::abs(g.t[i] - t0) < std::abs(g.t[j0] - t0)) j0 = i;
    t0 = g.t[j0];
    double alpha = solve_alpha(t0, q, clustering);
    double A = mu_max / std::sinh(alpha * (1.0 - t0));
    g.map_A = A;
    g.map_alpha = alpha;
    g.map_t0 = t0;
    g.i_zero = j0;
    for (int i = 0; i <= N; ++i) {
      g.mu[i] = A * std::sinh(alpha * (g.t[i] - t0));
      dmu[i] = A * alpha * std::cosh(alpha * (g.t[i] - t0));
    }
    g.mu[j0] = 0.0;
    g.mu[0] = mu_max;
    g.mu[N] = -delta0;
  }

  g.D1 = dmu.cwiseInverse().asDiagonal() * Dt;
  g.D2 = g.D1 * g.D1;
  g.w = wt.cwiseProduct(dmu);
  return g;
}

double SpectralGrid::to_reference(double mu_pt) const {
  if (map_A == 0.0) {
    double c = 0.5 * (mu_max + delta0);
    return (mu_pt + delta0) / c - 1.0;
  }
  return map_t0 + std::asinh(mu_pt / map_A) / map_alpha;
}

Eigen::VectorXcd barycentric_interpolate(const Eigen::VectorXd& nodes,
                                         const Eigen::VectorXd& bw,
                                         const Eigen::VectorXcd& values,
                                         const Eigen::VectorXd& targets) {
  Eigen::VectorXcd out(targets.size());
  for (int k = 0; k < targets.size(); ++k) {
    double x = targets[k];
    std::complex<double> num = 0.0;
    double den = 0.0;
    bool hit = false;
    for (int j = 0; j < nodes.size(); ++j) {
      double d = x - nodes[j];
      if (std::abs(d) < 1e-14 * (1.0 + std::abs(x))) {
        out[k] = values[j];
        hit = true;
        break;
      }
      double c = bw[j] / d;
      num += c * values[j];
      den += c;
    }
    if (!hit) out[k] = num / den;
  }
  return out;
}

Eigen::VectorXcd SpectralGrid::interpolate(
    const Eigen::VectorXcd& values, const Eigen::VectorXd& mu_targets) const {
  Eigen::VectorXd tt(mu_targets.size());
  for (int i = 0; i < mu_targets.size(); ++i)
    tt[i] = to_reference(mu_targets[i]);
  return barycentric_interpolate(t, chebyshev_bary_weights(N), values, tt);
}

LglGrid legendre_lobatto(int N, double a, double b) {
  if (N < 1) throw BadParameters("LGL degree must be >= 1");
  Eigen::VectorXd x(N + 1), PN(N + 1);
  // Newton iteration from the Chebyshev-Lobatto guess (ascending here)
  for (int i = 0; i <= N; ++i) x[i] = -std::cos(M_PI * i / N);
  for (int it = 0; it < 100; ++it) {
    Eigen::VectorXd xold = x;
    for (int i = 0; i <= N; ++i) {
      // evaluate P_N and P_{N-1} by recurrence
      double p0 = 1.0, p1 = x[i];
      for (int k = 2; k <= N; ++k) {
        double p2 = ((2.0 * k - 1.0) * x[i] * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      PN[i] = p1;
      if (i == 0 || i == N) continue;
      // root of (1-x^2) P_N'(x): Newton step via recurrence identities
      double dPN = N * (x[i] * p1 - p0) / (x[i] * x[i] - 1.0);
      double g = (1.0 - x[i] * x[i]) * dPN;
      double dg = -2.0 * x[i] * dPN +
                  (1.0 - x[i] * x[i]) *
                      ((2.0 * x[i] * dPN - N * (N + 1.0) * p1) /
                       (1.0 - x[i] * x[i]));
      x[i] -= g / dg;
    }
    if ((x - xold).cwiseAbs().maxCoeff() < 1e-15) break;
  }
  x[0] = -1.0;
  x[N] = 1.0;
  // refresh P_N at the converged nodes
  for (int i = 0; i <= N; ++i) {
    double p0 = 1.0, p1 = x[i];
    for (int k = 2; k <= N; ++k) {
      double p2 = ((2.0 * k - 1.0) * x[i] * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    PN[i] = p1;
  }

  LglGrid g;
  g.x.resize(N + 1);
  g.w.resize(N + 1);
  Eigen::VectorXd bw(N + 1);
  for (int i = 0; i <= N; ++i) {
    double wref = 2.0 / (N * (N + 1.0) * PN[i] * PN[i]);
    g.w[i] = 0.5 * (b - a) * wref;
    bw[i] = ((i % 2) ? -1.0 : 1.0) * std::sqrt(wref);
  }
  for (int i = 0; i <= N; ++i) g.x[i] = a + 0.5 * (b - a) * (x[i] + 1.0);

  g.D.resize(N + 1, N + 1);
  for (int i = 0; i <= N; ++i)
    for (int j = 0; j <= N; ++j)
      if (i != j) g.D(i, j) = (bw[j] / bw[i]) / (g.x[i] - g.x[j]);
  for (int i = 0; i <= N; ++i) {
    double s = 0.0;
    for (int j = 0; j <= N; ++j)
      if (i != j) s += g.D(i, j);
    g.D(i, i) = -s;
  }
  return g;
}

}  // namespace ahres
