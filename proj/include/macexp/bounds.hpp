#ifndef MACEXP_BOUNDS_HPP
#define MACEXP_BOUNDS_HPP

#include <algorithm>
#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "macexp/evaluator.hpp"

namespace macexp {

// Upper concave envelope as a piecewise-linear function on [0, 1].
struct Envelope {
    std::vector<std::pair<double, double>> knots;  // strictly increasing in rho

    double operator()(double rho) const {
        if (rho <= knots.front().first) return knots.front().second;
        if (rho >= knots.back().first) return knots.back().second;
        size_t lo = 0, hi = knots.size() - 1;
        while (hi - lo > 1) {
            size_t mid = (lo + hi) / 2;
            (knots[mid].first <= rho ? lo : hi) = mid;
        }
        auto [x0, y0] = knots[lo];
        auto [x1, y1] = knots[hi];
        double t = (rho - x0) / (x1 - x0);
        return y0 + t * (y1 - y0);
    }
};

namespace detail {

inline std::vector<std::pair<double, double>> upper_hull(
    std::vector<std::pair<double, double>> pts) {
    std::sort(pts.begin(), pts.end());
    std::vector<std::pair<double, double>> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const auto& o = hull[hull.size() - 2];
            const auto& a = hull.back();
            double cross = (a.first - o.first) * (p.second - o.second) -
                           (a.second - o.second) * (p.first - o.first);
            if (cross >= 0.0) hull.pop_back();
            else break;
        }
        hull.push_back(p);
    }
    return hull;
}

}  // namespace detail

// Pointwise-sup-of-chords envelope of max_Q E_0(rho, Q, .) over the
// given curves: sample the max on a uniform grid, take the upper hull, refine
// each hull segment once at its midpoint and re-hull.
inline Envelope concave_hull(const std::vector<std::function<double(double)>>& fns,
                             int grid_n = 1025) {
    if (fns.empty()) throw std::invalid_argument("concave_hull: need a curve");
    auto maxf = [&](double rho) {
        double v = fns[0](rho);
        for (size_t k = 1; k < fns.size(); ++k) v = std::max(v, fns[k](rho));
        return v;
    };
    std::vector<std::pair<double, double>> pts;
    pts.reserve(2 * grid_n);
    for (int j = 0; j < grid_n; ++j) {
        double rho = static_cast<double>(j) / (grid_n - 1);
        pts.emplace_back(rho, maxf(rho));
    }
    auto hull = detail::upper_hull(pts);
    for (size_t k = 0; k + 1 < hull.size(); ++k) {
        double mid = 0.5 * (hull[k].first + hull[k + 1].first);
        pts.emplace_back(mid, maxf(mid));
    }
    Envelope env;
    env.knots = detail::upper_hull(std::move(pts));
    return env;
}

struct LowerBoundResult {
    double value = 0.0;
    std::pair<int, int> best_assignment{1, 1};
    std::vector<ObjectiveCell> table;  // 12 F^L cells
};

// Threshold-free lower bound: best single pair of input
// distributions under the plain Gallager source exponent.
inline LowerBoundResult lower_bound(const Evaluator& ev) {
    LowerBoundResult out;
    double best = -std::numeric_limits<double>::infinity();
    std::array<std::array<double, 2>, 2> f{};
    for (ErrorType tau : {ErrorType::User1, ErrorType::User2, ErrorType::Both})
        for (int a = 1; a <= 2; ++a)
            for (int b = 1; b <= 2; ++b) {
                ObjectiveCell c = ev.cell_plain(tau, a, b);
                out.table.push_back(c);
                double v = c.value.value();
                if (tau == ErrorType::User1) f[a - 1][b - 1] = v;
                else f[a - 1][b - 1] = std::min(f[a - 1][b - 1], v);
            }
    for (int a = 1; a <= 2; ++a)
        for (int b = 1; b <= 2; ++b)
            if (f[a - 1][b - 1] > best) {
                best = f[a - 1][b - 1];
                out.best_assignment = {a, b};
            }
    out.value = best;
    return out;
}

inline LowerBoundResult lower_bound(const SystemModel& m) {
    return lower_bound(Evaluator(m));
}

struct UpperBoundResult {
    double value = 0.0;
    std::array<double, 3> cells{};  // F^U for tau = {1}, {2}, {1,2}
};

// Concave-hull upper bound.  For tau = {1,2} the hull is
// taken over the four product-distribution curves.
inline UpperBoundResult upper_bound(const Evaluator& ev, int hull_grid = 1025) {
    const SystemModel& m = ev.model();
    UpperBoundResult out;

    auto maximize = [&](const Envelope& env, const std::function<double(double)>& es) {
        // env is concave and -E_s is concave, so the sum is unimodal
        auto obj = [&](double rho) { return env(rho) - es(rho); };
        auto [x, fx] = detail::golden_max(obj, 0.0, 1.0, 1e-10);
        for (const auto& [kx, ky] : env.knots) {
            double v = ky - es(kx);
            if (v > fx) fx = v;
        }
        (void)x;
        return fx;
    };

    for (int t = 0; t < 2; ++t) {
        ErrorType tau = t == 0 ? ErrorType::User1 : ErrorType::User2;
        double best = -std::numeric_limits<double>::infinity();
        for (int io = 1; io <= 2; ++io) {
            std::vector<std::function<double(double)>> curves;
            for (int iown = 1; iown <= 2; ++iown) {
                const Evaluator::Config* c = tau == ErrorType::User1
                                                 ? &ev.config(tau, iown, io)
                                                 : &ev.config(tau, io, iown);
                curves.push_back(
                    [c](double rho) { return e_0(rho, c->q, c->ch); });
            }
            Envelope env = concave_hull(curves, hull_grid);
            const SourceSpec& src = t == 0 ? m.source1 : m.source2;
            double v = maximize(env, [&src](double rho) { return e_s(rho, src); });
            if (v > best) best = v;
        }
        out.cells[t] = best;
    }
    {
        std::vector<std::function<double(double)>> curves;
        for (int a = 1; a <= 2; ++a)
            for (int b = 1; b <= 2; ++b) {
                const Evaluator::Config* c = &ev.config(ErrorType::Both, a, b);
                curves.push_back([c](double rho) { return e_0(rho, c->q, c->ch); });
            }
        Envelope env = concave_hull(curves, hull_grid);
        out.cells[2] = maximize(env, [&m](double rho) {
            return e_s(rho, m.source1) + e_s(rho, m.source2);
        });
    }
    out.value = std::min({out.cells[0], out.cells[1], out.cells[2]});
    return out;
}

inline UpperBoundResult upper_bound(const SystemModel& m, int hull_grid = 1025) {
    return upper_bound(Evaluator(m), hull_grid);
}

}  // namespace macexp

#endif
