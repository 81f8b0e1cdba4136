#pragma once

#include <Eigen/Dense>
#include <memory>
#include <stdexcept>

namespace ahres {

struct BadParameters : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Mapped Chebyshev-Lobatto collocation grid on [-delta0, mu_max].
///
/// Reference nodes t_i = cos(i pi / N) descend from +1 to -1; the analytic map
/// mu(t) = A sinh(alpha (t - t0)) pins mu = 0 to a grid node and clusters
/// nodes there (the warp's regularity break sits at mu = 0). Nodes therefore
/// descend: mu[0] = mu_max, mu[N] = -delta0.
struct SpectralGrid {
  int N = 0;  // polynomial degree; N+1 nodes
  double delta0 = 0.0, mu_max = 0.0, clustering = 0.0;
  Eigen::VectorXd t;    // reference nodes
  Eigen::VectorXd mu;   // mapped nodes (descending)
  Eigen::VectorXd w;    // quadrature weights for integration in mu
  Eigen::MatrixXd D1;   // d/dmu
  Eigen::MatrixXd D2;   // d^2/dmu^2 (= D1*D1)
  int i_zero = -1;      // node index with mu == 0, -1 if not pinned

  // map parameters (A == 0 marks a plain linear map)
  double map_A = 0.0, map_alpha = 0.0, map_t0 = 0.0;

  double to_reference(double mu_pt) const;

  /// Evaluate the grid interpolant of nodal values at arbitrary points.
  Eigen::VectorXcd interpolate(const Eigen::VectorXcd& values,
                               const Eigen::VectorXd& mu_targets) const;
};

/// Builds the grid. clustering > 0 is the sinh-map strength (larger clusters
/// harder at mu = 0); clustering == 0 gives the linear map. Throws
/// BadParameters for N < 16 or inconsistent interval data.
SpectralGrid build_grid(int N, double delta0, double mu_max,
                        double clustering = 4.0);

/// Plain Chebyshev-Lobatto nodes (descending) and differentiation matrix on
/// [a, b].
void chebyshev_lobatto(int N, double a, double b, Eigen::VectorXd& x,
                       Eigen::MatrixXd& D);

/// Clenshaw-Curtis weights for the descending Chebyshev-Lobatto nodes on
/// [-1, 1].
Eigen::VectorXd clenshaw_curtis_weights(int N);

/// Legendre-Gauss-Lobatto nodes (ascending), quadrature weights and
/// differentiation matrix on [a, b]. Quadrature is exact through degree 2N-1,
/// which makes discrete integration by parts exact on the polynomial space.
struct LglGrid {
  Eigen::VectorXd x, w;
  Eigen::MatrixXd D;
};
LglGrid legendre_lobatto(int N, double a, double b);

/// Barycentric interpolation from arbitrary distinct nodes.
Eigen::VectorXcd barycentric_interpolate(const Eigen::VectorXd& nodes,
                                         const Eigen::VectorXd& bary_weights,
                                         const Eigen::VectorXcd& values,
                                         const Eigen::VectorXd& targets);

/// Barycentric weights for Chebyshev-Lobatto nodes (descending order).
Eigen::VectorXd chebyshev_bary_weights(int N);

}  // namespace ahres
