// integrate.hpp — adaptive embedded Runge-Kutta (Dormand-Prince 5(4))
//
// Drives a linear-in-state right-hand side on a flat complex vector and stops
// exactly on the requested sample times. All norm reductions run serially in a
// fixed order, so a run is bitwise reproducible for a given tolerance and grid
// regardless of how the right-hand side parallelizes internally.
#pragma once

#include "bjj/errors.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace bjj::ode {

using Eigen::VectorXcd;

struct Options {
    double tol = 1e-9;        // absolute and relative local error target per unit time
    double initial_step = 0;  // 0 = choose automatically
    double max_step = 0;      // 0 = no cap
};

struct Stats {
    long steps_accepted = 0;
    long steps_rejected = 0;
    long rhs_evaluations = 0;
};

using Rhs = std::function<void(double t, const VectorXcd& y, VectorXcd& dy)>;
using Observer = std::function<void(int sample_index, double t, const VectorXcd& y)>;

// Integrates y' = f(t, y) from t_grid.front() to t_grid.back(), calling
// observe() at every grid time including the first. Throws NumericalError on
// step-size underflow.
inline Stats integrate(const Rhs& f, VectorXcd& y, const std::vector<double>& t_grid,
                       const Options& opt, const Observer& observe) {
    if (t_grid.empty()) throw std::invalid_argument("integrate: empty time grid");
    for (size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1]))
            throw std::invalid_argument("integrate: time grid must be strictly increasing");
    if (!(opt.tol > 0)) throw std::invalid_argument("integrate: tol must be > 0");

    // Dormand-Prince coefficients.
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695,
                        e4 = b4 - 393.0 / 640, e5 = b5 + 92097.0 / 339200,
                        e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

    const auto n = y.size();
    VectorXcd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n);

    Stats st;
    double t = t_grid.front();
    observe(0, t, y);

    f(t, y, k1);
    ++st.rhs_evaluations;

    // Initial step from the first derivative scale.
    double h = opt.initial_step;
    if (h <= 0) {
        const double d0 = y.norm(), d1 = k1.norm();
        h = (d1 > 1e-30) ? 0.01 * std::max(d0, 1e-6) / d1 : 1e-6;
        const double span = t_grid.back() - t_grid.front();
        h = std::min(h, 0.1 * span);
    }
    if (opt.max_step > 0) h = std::min(h, opt.max_step);

    const double t_end = t_grid.back();
    size_t next = 1;

    while (next < t_grid.size()) {
        const double t_stop = t_grid[next];
        bool clipped = false;
        double h_try = h;
        if (t + h_try >= t_stop) {
            h_try = t_stop - t;
            clipped = true;
        }
        if (h_try < 1e-14 * std::max(1.0, std::abs(t)))
            throw NumericalError("integrate: step size underflow at t=" + std::to_string(t) +
                                 " (configuration appears too stiff for the requested tolerance)");

        ytmp = y + h_try * (a21 * k1);
        f(t + c2 * h_try, ytmp, k2);
        ytmp = y + h_try * (a31 * k1 + a32 * k2);
        f(t + c3 * h_try, ytmp, k3);
        ytmp = y + h_try * (a41 * k1 + a42 * k2 + a43 * k3);
        f(t + c4 * h_try, ytmp, k4);
        ytmp = y + h_try * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        f(t + c5 * h_try, ytmp, k5);
        ytmp = y + h_try * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        f(t + h_try, ytmp, k6);
        ynew = y + h_try * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        f(t + h_try, ynew, k7);
        st.rhs_evaluations += 6;

        // Scaled RMS error, accumulated serially for reproducibility.
        double acc = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const std::complex<double> err =
                h_try * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = opt.tol + opt.tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double q = std::abs(err) / sc;
            acc += q * q;
        }
        // errnorm measures the step error in tol units; dividing by the step
        // length makes the acceptance test error-per-unit-time.
        const double errnorm = std::sqrt(acc / static_cast<double>(n));
        const double ratio = errnorm / h_try;

        if (ratio <= 1.0) {
            t = clipped ? t_stop : t + h_try;
            y.swap(ynew);
            k1.swap(k7); // first-same-as-last
            ++st.steps_accepted;
            if (clipped) {
                observe(static_cast<int>(next), t, y);
                ++next;
            }
        } else {
            ++st.steps_rejected; // k1 still matches (t, y)
        }

        // error/h ~ C h^4 for the embedded order-4 estimate
        double fac = 0.9 * std::pow(std::max(ratio, 1e-12), -0.25);
        fac = std::clamp(fac, 0.2, 5.0);
        double h_next = h_try * fac;
        if (opt.max_step > 0) h_next = std::min(h_next, opt.max_step);
        // Keep the natural step memory when a clipped step succeeded easily.
        h = clipped && ratio <= 1.0 ? std::max(h, h_next) : h_next;
        if (t >= t_end) break;
    }
    return st;
}

} // namespace bjj::ode
