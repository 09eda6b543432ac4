#ifndef MACEXP_ORACLE_HPP
#define MACEXP_ORACLE_HPP

#include <functional>
#include <utility>
#include <vector>

#include "macexp/engine.hpp"

// Brute-force evaluators used by tests and the `verify` subcommand.  Kept
// deliberately free of the search machinery they are meant to check.

namespace macexp::oracle {

// Exhaustive maximum of `objective` over a uniform n-point grid on [0, 1].
inline std::pair<double, double> grid_max_rho(
    const std::function<double(double)>& objective, int n) {
    double best_x = 0.0, best_v = objective(0.0);
    for (int j = 1; j < n; ++j) {
        double x = static_cast<double>(j) / (n - 1);
        double v = objective(x);
        if (v > best_v) {
            best_v = v;
            best_x = x;
        }
    }
    return {best_x, best_v};
}

struct GammaSweep {
    int n = 0;
    std::vector<double> d;  // n*n values, row-major in gamma1
    double max_value = 0.0;
    std::array<double, 2> argmax{};

    double at(int a, int b) const { return d[static_cast<size_t>(a) * n + b]; }
};

// d on the uniform n x n threshold grid (full-precision cells).
inline GammaSweep gamma_sweep(const Evaluator& ev, int n) {
    GammaSweep out;
    out.n = n;
    out.d.resize(static_cast<size_t>(n) * n);
    out.max_value = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            double g1 = static_cast<double>(a) / (n - 1);
            double g2 = static_cast<double>(b) / (n - 1);
            double v = ev.d_full(ev.gamma_params(g1, g2)).as_double();
            out.d[static_cast<size_t>(a) * n + b] = v;
            if (v > out.max_value) {
                out.max_value = v;
                out.argmax = {g1, g2};
            }
        }
    return out;
}

inline GammaSweep gamma_sweep(const SystemModel& m, int n) {
    return gamma_sweep(Evaluator(m), n);
}

// Centered finite difference.
inline double fd_derivative(const std::function<double(double)>& f, double x,
                            double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace macexp::oracle

#endif
