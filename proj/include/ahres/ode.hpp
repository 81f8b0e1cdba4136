#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace ahres {

struct StepFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Embedded Dormand-Prince 5(4) with PI step control and event localization
/// by bisection on the step. Events are scalar functions of (t, y); a sign
/// change from positive to nonpositive inside a step stops the integration at
/// the crossing.
template <int K>
class DormandPrince {
 public:
  using State = std::array<double, K>;
  using Rhs = std::function<State(double, const State&)>;
  using Event = std::function<double(double, const State&)>;

  struct Outcome {
    double t = 0.0;
    State y{};
    int event_id = -1;  // -1: reached t_end
    int steps = 0;
  };

  DormandPrince(Rhs rhs, double rtol, double atol)
      : rhs_(std::move(rhs)), rtol_(rtol), atol_(atol) {}

  /// Integrates from (t0, y0) toward t_end (t_end may be < t0). The observer,
  /// when given, is called after each accepted step.
  Outcome run(double t0, const State& y0, double t_end,
              const std::vector<Event>& events = {},
              const std::function<void(double, const State&)>& observer = {}) {
    Outcome out;
    out.t = t0;
    out.y = y0;
    double dir = (t_end >= t0) ? 1.0 : -1.0;
    double h = dir * initial_step(t0, y0, t_end);
    std::vector<double> ev_prev(events.size());
    for (size_t i = 0; i < events.size(); ++i)
      ev_prev[i] = events[i](out.t, out.y);

    int rejected_in_a_row = 0;
    while (dir * (t_end - out.t) > 1e-14 * (1.0 + std::abs(out.t))) {
      if (dir * (out.t + h - t_end) > 0.0) h = t_end - out.t;
      State ynew;
      double err = attempt(out.t, out.y, h, ynew);
      if (err > 1.0) {
        h *= std::max(0.2, 0.9 * std::pow(err, -0.25));
        if (std::abs(h) < 1e-15 * (1.0 + std::abs(out.t)) ||
            ++rejected_in_a_row > 60)
          throw StepFailure("step size underflow in adaptive integrator");
        continue;
      }
      rejected_in_a_row = 0;
      double t_new = out.t + h;

      bool crossed = false;
      for (size_t i = 0; i < events.size(); ++i) {
        double val = events[i](t_new, ynew);
        if (ev_prev[i] > 0.0 && val <= 0.0) {
          // bisect on the step for the crossing
          double ta = out.t, tb = t_new;
          State ya = out.y, yb = ynew;
          for (int bit = 0; bit < 60; ++bit) {
            double tm = 0.5 * (ta + tb);
            State ym;
            attempt(ta, ya, tm - ta, ym);
            if (events[i](tm, ym) > 0.0) {
              ta = tm;
              ya = ym;
            } else {
              tb = tm;
              yb = ym;
            }
            if (std::abs(tb - ta) < 1e-13 * (1.0 + std::abs(tb))) break;
          }
          out.t = tb;
          out.y = yb;
          out.event_id = static_cast<int>(i);
          crossed = true;
          break;
        }
        ev_prev[i] = val;
      }
      if (crossed) {
        if (observer) observer(out.t, out.y);
        return out;
      }

      out.t = t_new;
      out.y = ynew;
      ++out.steps;
      if (observer) observer(out.t, out.y);
      if (out.steps > max_steps_)
        throw StepFailure("step budget exhausted");
      h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-10),
                                                      -0.2)));
    }
    return out;
  }

  int max_steps_ = 2000000;

 private:
  Rhs rhs_;
  double rtol_, atol_;

  double initial_step(double t0, const State& y0, double t_end) {
    State f = rhs_(t0, y0);
    double ny = 0.0, nf = 0.0;
    for (int i = 0; i < K; ++i) {
      ny = std::max(ny, std::abs(y0[i]));
      nf = std::max(nf, std::abs(f[i]));
    }
    double h = (nf > 0.0) ? 0.01 * (1.0 + ny) / nf : 1e-4;
    return std::min(h, std::abs(t_end - t0));
  }

  // returns scaled error estimate; ynew filled on any outcome
  double attempt(double t, const State& y, double h, State& ynew) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                            c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15,
                            a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113,
                            b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                            e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    auto axpy = [&](const std::initializer_list<double>& cs,
                    const std::initializer_list<const State*>& ks) {
      State r = y;
      auto ci = cs.begin();
      auto ki = ks.begin();
      for (; ci != cs.end(); ++ci, ++ki)
        for (int i = 0; i < K; ++i) r[i] += h * (*ci) * (**ki)[i];
      return r;
    };

    State k1 = rhs_(t, y);
    State k2 = rhs_(t + c2 * h, axpy({a21}, {&k1}));
    State k3 = rhs_(t + c3 * h, axpy({a31, a32}, {&k1, &k2}));
    State k4 = rhs_(t + c4 * h, axpy({a41, a42, a43}, {&k1, &k2, &k3}));
    State k5 =
        rhs_(t + c5 * h, axpy({a51, a52, a53, a54}, {&k1, &k2, &k3, &k4}));
    State k6 = rhs_(t + h, axpy({a61, a62, a63, a64, a65},
                                {&k1, &k2, &k3, &k4, &k5}));
    ynew = axpy({b1, b3, b4, b5, b6}, {&k1, &k3, &k4, &k5, &k6});
    State k7 = rhs_(t + h, ynew);

    double err = 0.0;
    for (int i = 0; i < K; ++i) {
      double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                      e6 * k6[i] + e7 * k7[i]);
      double sc = atol_ + rtol_ * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err = std::max(err, std::abs(e) / sc);
    }
    return err;
  }
};

}  // namespace ahres
