#include "ahres/metric_model.hpp"

#include <cmath>

namespace ahres {

namespace {

double eval_even(const std::vector<double>& c, double mu) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * mu + *it;
  return acc;
}

double eval_even_prime(const std::vector<double>& c, double mu) {
  double acc = 0.0;
  for (int j = static_cast<int>(c.size()) - 1; j >= 1; --j)
    acc = acc * mu + j * c[j];
  return acc;
}

double odd_term(const WarpedMetricModel& m, double mu) {
  if (m.odd_amplitude == 0.0) return 0.0;
  return m.odd_amplitude * std::pow(std::abs(mu), m.k + 0.5);
}

double odd_term_prime(const WarpedMetricModel& m, double mu) {
  if (m.odd_amplitude == 0.0 || mu == 0.0) return 0.0;
  double s = mu > 0 ? 1.0 : -1.0;
  return m.odd_amplitude * (m.k + 0.5) * std::pow(std::abs(mu), m.k - 0.5) * s;
}

}  // namespace

WarpedMetricModel build_model(std::vector<double> even_coeffs, int k,
                              double odd_amplitude, double delta0,
                              double mu_max, InnerBc inner_bc, int n) {
  if (even_coeffs.empty())
    throw std::invalid_argument("even_coeffs must be nonempty");
  if (odd_amplitude < 0.0)
    throw std::invalid_argument("odd_amplitude must be >= 0");
  if (k != kInfiniteOrder && k < 2)
    throw BadEvenness("evenness order must be >= 2");
  if (delta0 <= 0.0 || delta0 >= 1.0)
    throw BadDomain("extension depth delta0 must lie in (0, 1)");
  if (mu_max <= 0.0 || mu_max < 4.0 * delta0)
    throw BadDomain("mu_max must be positive and at least 4*delta0");

  WarpedMetricModel m;
  m.n = n;
  m.even_coeffs = std::move(even_coeffs);
  m.k = (odd_amplitude == 0.0) ? kInfiniteOrder : k;
  m.odd_amplitude = odd_amplitude;
  m.delta0 = delta0;
  m.mu_max = mu_max;
  m.inner_bc = inner_bc;

  if (m.even_coeffs[0] <= 0.0)
    throw NonPositiveWarp("boundary value f(0) must be positive");

  // Dense positivity sweep over the extension interval.
  const int samples = 4096;
  for (int i = 0; i <= samples; ++i) {
    double mu = -delta0 + (mu_max + delta0) * i / samples;
    double f = eval_even(m.even_coeffs, mu) + odd_term(m, mu);
    if (!(f > 0.0))
      throw NonPositiveWarp("warp nonpositive at mu=" + std::to_string(mu) +
                            " (f=" + std::to_string(f) + ")");
  }
  return m;
}

double eval_h(const WarpedMetricModel& m, double mu) {
  if (!m.in_domain(mu))
    throw OutOfDomain("eval_h at mu=" + std::to_string(mu));
  return eval_even(m.even_coeffs, mu) + odd_term(m, mu);
}

double eval_h_prime(const WarpedMetricModel& m, double mu) {
  if (!m.in_domain(mu))
    throw OutOfDomain("eval_h_prime at mu=" + std::to_string(mu));
  return eval_even_prime(m.even_coeffs, mu) + odd_term_prime(m, mu);
}

double eval_gamma(const WarpedMetricModel& m, double mu) {
  return -eval_h_prime(m, mu) / eval_h(m, mu);
}

int classify_evenness(const WarpedMetricModel& m) {
  return m.odd_amplitude > 0.0 ? m.k : kInfiniteOrder;
}

double eval_h_extended(const WarpedMetricModel& m, double mu) {
  double f = eval_even(m.even_coeffs, mu) + odd_term(m, mu);
  if (!(f > 0.0))
    throw NonPositiveWarp("extended warp nonpositive at mu=" +
                          std::to_string(mu));
  return f;
}

double eval_h_prime_extended(const WarpedMetricModel& m, double mu) {
  return eval_even_prime(m.even_coeffs, mu) + odd_term_prime(m, mu);
}

}  // namespace ahres
