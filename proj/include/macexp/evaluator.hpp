#ifndef MACEXP_EVALUATOR_HPP
#define MACEXP_EVALUATOR_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "macexp/classexp.hpp"
#include "macexp/ext_real.hpp"
#include "macexp/gallager.hpp"
#include "macexp/model.hpp"

namespace macexp {

// One per-error-type objective F_{tau,i1,i2} together with its maximizer.
struct ObjectiveCell {
    ErrorType tau = ErrorType::Both;
    int i1 = 1;
    int i2 = 1;
    ExtReal value;
    double rho_star = 0.0;  // meaningful only when value is finite
};

namespace detail {

// Golden-section maximization of a unimodal f on [a, b].
template <class F>
inline std::pair<double, double> golden_max(F&& f, double a, double b, double tol) {
    const double gr = 0.6180339887498949;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    double xm = 0.5 * (a + b), fm = f(xm);
    if (f1 > fm) {
        fm = f1;
        xm = x1;
    }
    if (f2 > fm) {
        fm = f2;
        xm = x2;
    }
    return {xm, fm};
}

inline bool class_is_minus_inf(const ClassExpParams& p, int i) {
    return (p.rg.tag == RhoGamma::Tag::BelowSupport && i == 2) ||
           (p.rg.tag == RhoGamma::Tag::AboveSupport && i == 1);
}

}  // namespace detail

// Threshold-dependent pieces shared by all 12 cells at a fixed (gamma1, gamma2).
struct GammaParams {
    detail::ClassExpParams p1, p2;

    const detail::ClassExpParams& user(int nu) const { return nu == 0 ? p1 : p2; }
};

// Caches the induced channels, product distributions and E_0 / E_s curves of a
// model on a fixed rho grid so that cell evaluations inside search loops reduce
// to arithmetic on the curves.  The cache is transparent: full-precision
// results are always finished with golden-section on freshly evaluated
// objectives, and tests compare everything against uncached brute force.
class Evaluator {
public:
    static constexpr int kRhoGrid = 1001;

    struct Config {
        InputDistribution q;
        PtpChannel ch;
        std::array<double, kRhoGrid> e0;
    };

    explicit Evaluator(const SystemModel& m) : m_(m) {
        for (int j = 0; j < kRhoGrid; ++j) {
            rho_[j] = static_cast<double>(j) / (kRhoGrid - 1);
            beta_[j] = 1.0 / (1.0 + rho_[j]);
        }
        for (int nu = 0; nu < 2; ++nu)
            for (int j = 0; j < kRhoGrid; ++j)
                es_[nu][j] = e_s(rho_[j], m_.source(nu));

        PtpChannel full = mac_as_ptp(m_.channel);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                Config& c1 = cfg_[0][a][b];
                c1.q = m_.policy.q[0][a];
                c1.ch = induced_channel(m_.channel, ErrorType::User1, m_.policy.q[1][b]);
                Config& c2 = cfg_[1][a][b];
                c2.q = m_.policy.q[1][b];
                c2.ch = induced_channel(m_.channel, ErrorType::User2, m_.policy.q[0][a]);
                Config& cb = cfg_[2][a][b];
                cb.q = product_distribution(m_.policy.q[0][a], m_.policy.q[1][b]);
                cb.ch = full;
                for (int j = 0; j < kRhoGrid; ++j) {
                    c1.e0[j] = e_0(rho_[j], c1.q, c1.ch);
                    c2.e0[j] = e_0(rho_[j], c2.q, c2.ch);
                    cb.e0[j] = e_0(rho_[j], cb.q, cb.ch);
                }
            }
    }

    const SystemModel& model() const { return m_; }

    const Config& config(ErrorType tau, int i1, int i2) const {
        return cfg_[tau_index(tau)][i1 - 1][i2 - 1];
    }

    GammaParams gamma_params(double g1, double g2) const {
        return {detail::class_exp_params(g1, m_.source1),
                detail::class_exp_params(g2, m_.source2)};
    }

    double es_grid(int nu, int j) const { return es_[nu][j]; }
    double rho_at(int j) const { return rho_[j]; }

    // ---- class-partitioned cells --------------------------------------------

    // Grid-only value; used by search loops.  Error <= curvature * 1e-6/8.
    ExtReal cell_grid(ErrorType tau, int i1, int i2, const GammaParams& gp,
                      int* argmax = nullptr) const {
        double cterm = 0.0;
        if (infinite_cell(tau, i1, i2, gp, &cterm)) return ExtReal::plus_inf();
        const Config& c = config(tau, i1, i2);
        double best = -std::numeric_limits<double>::infinity();
        int bj = 0;
        for (int j = 0; j < kRhoGrid; ++j) {
            double v = c.e0[j] - cterm;
            switch (tau) {
                case ErrorType::User1: v -= class_es_grid(0, i1, gp.p1, j); break;
                case ErrorType::User2: v -= class_es_grid(1, i2, gp.p2, j); break;
                default:
                    v -= class_es_grid(0, i1, gp.p1, j) + class_es_grid(1, i2, gp.p2, j);
            }
            if (v > best) {
                best = v;
                bj = j;
            }
        }
        if (argmax) *argmax = bj;
        return ExtReal::finite(best);
    }

    // Full-precision cell: grid pass for a bracket, then golden-section on the
    // exact objective (concave: e_0 concave minus convex source terms).
    ObjectiveCell cell(ErrorType tau, int i1, int i2, const GammaParams& gp) const {
        ObjectiveCell out;
        out.tau = tau;
        out.i1 = i1;
        out.i2 = i2;
        int bj = 0;
        ExtReal g = cell_grid(tau, i1, i2, gp, &bj);
        if (!g.is_finite()) {
            out.value = g;
            return out;
        }
        auto obj = objective(tau, i1, i2, gp);
        double a = rho_[std::max(0, bj - 1)];
        double b = rho_[std::min(kRhoGrid - 1, bj + 1)];
        auto [x, fx] = detail::golden_max(obj, a, b, 1e-10);
        if (fx >= g.value()) {
            out.value = ExtReal::finite(fx);
            out.rho_star = x;
        } else {
            out.value = g;
            out.rho_star = rho_[bj];
        }
        return out;
    }

    // Exact (uncached) objective of a finite cell as a function of rho.
    std::function<double(double)> objective(ErrorType tau, int i1, int i2,
                                            const GammaParams& gp) const {
        double cterm = 0.0;
        infinite_cell(tau, i1, i2, gp, &cterm);
        const Config& c = config(tau, i1, i2);
        const SystemModel& m = m_;
        switch (tau) {
            case ErrorType::User1:
                return [&c, &m, i1, gp, cterm](double rho) {
                    return e_0(rho, c.q, c.ch) -
                           detail::es_class_with(i1, rho, e_s(rho, m.source1), gp.p1)
                               .value() -
                           cterm;
                };
            case ErrorType::User2:
                return [&c, &m, i2, gp, cterm](double rho) {
                    return e_0(rho, c.q, c.ch) -
                           detail::es_class_with(i2, rho, e_s(rho, m.source2), gp.p2)
                               .value() -
                           cterm;
                };
            default:
                return [&c, &m, i1, i2, gp](double rho) {
                    return e_0(rho, c.q, c.ch) -
                           detail::es_class_with(i1, rho, e_s(rho, m.source1), gp.p1)
                               .value() -
                           detail::es_class_with(i2, rho, e_s(rho, m.source2), gp.p2)
                               .value();
                };
        }
    }

    ExtReal little_f_grid(int i1, int i2, const GammaParams& gp) const {
        ExtReal v = cell_grid(ErrorType::User1, i1, i2, gp);
        v = min(v, cell_grid(ErrorType::User2, i1, i2, gp));
        return min(v, cell_grid(ErrorType::Both, i1, i2, gp));
    }

    ExtReal little_f(int i1, int i2, const GammaParams& gp) const {
        ExtReal v = cell(ErrorType::User1, i1, i2, gp).value;
        v = min(v, cell(ErrorType::User2, i1, i2, gp).value);
        return min(v, cell(ErrorType::Both, i1, i2, gp).value);
    }

    ExtReal d_grid(const GammaParams& gp) const {
        ExtReal v = ExtReal::plus_inf();
        for (int a = 1; a <= 2; ++a)
            for (int b = 1; b <= 2; ++b) v = min(v, little_f_grid(a, b, gp));
        return v;
    }

    ExtReal d_full(const GammaParams& gp) const {
        ExtReal v = ExtReal::plus_inf();
        for (int a = 1; a <= 2; ++a)
            for (int b = 1; b <= 2; ++b) v = min(v, little_f(a, b, gp));
        return v;
    }

    std::vector<ObjectiveCell> all_cells(const GammaParams& gp) const {
        std::vector<ObjectiveCell> out;
        for (ErrorType tau : {ErrorType::User1, ErrorType::User2, ErrorType::Both})
            for (int a = 1; a <= 2; ++a)
                for (int b = 1; b <= 2; ++b) out.push_back(cell(tau, a, b, gp));
        return out;
    }

    // ---- plain-E_s cells, threshold-free ------------------------------------

    ObjectiveCell cell_plain(ErrorType tau, int i1, int i2) const {
        ObjectiveCell out;
        out.tau = tau;
        out.i1 = i1;
        out.i2 = i2;
        const Config& c = config(tau, i1, i2);
        double best = -std::numeric_limits<double>::infinity();
        int bj = 0;
        for (int j = 0; j < kRhoGrid; ++j) {
            double v = c.e0[j];
            if (tau == ErrorType::User1) v -= es_[0][j];
            else if (tau == ErrorType::User2) v -= es_[1][j];
            else v -= es_[0][j] + es_[1][j];
            if (v > best) {
                best = v;
                bj = j;
            }
        }
        const SystemModel& m = m_;
        auto obj = [&c, &m, tau](double rho) {
            double v = e_0(rho, c.q, c.ch);
            if (tau == ErrorType::User1) return v - e_s(rho, m.source1);
            if (tau == ErrorType::User2) return v - e_s(rho, m.source2);
            return v - e_s(rho, m.source1) - e_s(rho, m.source2);
        };
        double a = rho_[std::max(0, bj - 1)];
        double b = rho_[std::min(kRhoGrid - 1, bj + 1)];
        auto [x, fx] = detail::golden_max(obj, a, b, 1e-10);
        if (fx >= best) {
            out.value = ExtReal::finite(fx);
            out.rho_star = x;
        } else {
            out.value = ExtReal::finite(best);
            out.rho_star = rho_[bj];
        }
        return out;
    }

private:
    static int tau_index(ErrorType tau) {
        switch (tau) {
            case ErrorType::User1: return 0;
            case ErrorType::User2: return 1;
            default: return 2;
        }
    }

    // True (and value irrelevant) when some subtracted term is -inf, in which
    // case the cell is +inf; otherwise writes the rho-independent tau^c term.
    bool infinite_cell(ErrorType tau, int i1, int i2, const GammaParams& gp,
                       double* cterm) const {
        if (detail::class_is_minus_inf(gp.p1, i1) ||
            detail::class_is_minus_inf(gp.p2, i2))
            return true;
        *cterm = 0.0;
        if (tau == ErrorType::User1)
            *cterm = detail::es_class_with(i2, 0.0, 0.0, gp.p2).value();
        else if (tau == ErrorType::User2)
            *cterm = detail::es_class_with(i1, 0.0, 0.0, gp.p1).value();
        return false;
    }

    double class_es_grid(int nu, int i, const detail::ClassExpParams& p, int j) const {
        if (!p.rg.interior()) return es_[nu][j];
        bool on_es = i == 1 ? beta_[j] >= p.rg.beta_gamma : beta_[j] < p.rg.beta_gamma;
        return on_es ? es_[nu][j] : p.tangent(rho_[j]);
    }

    SystemModel m_;
    std::array<double, kRhoGrid> rho_{};
    std::array<double, kRhoGrid> beta_{};
    std::array<double, kRhoGrid> es_[2]{};
    Config cfg_[3][2][2];
};

}  // namespace macexp

#endif
