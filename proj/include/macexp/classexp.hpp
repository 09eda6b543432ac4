#ifndef MACEXP_CLASSEXP_HPP
#define MACEXP_CLASSEXP_HPP

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "macexp/ext_real.hpp"
#include "macexp/gallager.hpp"
#include "macexp/model.hpp"

namespace macexp {

// Solution of the implicit threshold equation.  The interior case
// stores the tilt beta_gamma = 1/(1+rho_gamma); note beta_gamma may be <= 0
// (then rho_gamma <= -1), so consumers work in beta throughout.
struct RhoGamma {
    enum class Tag { BelowSupport, AboveSupport, Interior };
    Tag tag;
    double beta_gamma = 0.0;

    bool interior() const { return tag == Tag::Interior; }
    double rho_gamma() const { return 1.0 / beta_gamma - 1.0; }
};

namespace detail {

// (sum P^b log P) / (sum P^b), monotone increasing in b over all of R,
// with range (log min P, log max P).
inline double tilted_log_mean_beta(double beta, const SourceSpec& src) {
    double m = -std::numeric_limits<double>::infinity();
    for (double p : src.probs)
        if (p > 0.0) m = std::max(m, beta * std::log(p));
    double num = 0.0, den = 0.0;
    for (double p : src.probs)
        if (p > 0.0) {
            double lp = std::log(p);
            double w = std::exp(beta * lp - m);
            num += w * lp;
            den += w;
        }
    return num / den;
}

}  // namespace detail

// Left side of the implicit threshold equation as a function of rho.
inline double tilted_log_mean(double rho, const SourceSpec& src) {
    if (rho <= -1.0) throw std::domain_error("tilted_log_mean: rho must exceed -1");
    return detail::tilted_log_mean_beta(1.0 / (1.0 + rho), src);
}

// Solves tilted_log_mean = log gamma by bisection in beta.  The bracket is
// grown geometrically; it must extend below zero when gamma lies under the
// unweighted geometric mean of the source probabilities.
inline RhoGamma solve_rho_gamma(double gamma, const SourceSpec& src) {
    if (gamma < 0.0 || gamma > 1.0)
        throw std::domain_error("solve_rho_gamma: gamma outside [0, 1]");
    double pmin = 1.0, pmax = 0.0;
    for (double p : src.probs)
        if (p > 0.0) {
            pmin = std::min(pmin, p);
            pmax = std::max(pmax, p);
        }
    if (gamma < pmin) return {RhoGamma::Tag::BelowSupport};
    if (gamma > pmax) return {RhoGamma::Tag::AboveSupport};

    double target = std::log(gamma);
    double lo = 1e-6, hi = 1e6;
    // grow downward / upward as needed; the solution can sit at beta < 0
    while (detail::tilted_log_mean_beta(lo, src) > target) {
        lo = lo > 0.0 ? -1.0 : lo * 2.0;
        if (lo < -1e12) break;
    }
    while (detail::tilted_log_mean_beta(hi, src) < target) {
        hi *= 2.0;
        if (hi > 1e12) break;
    }
    double mid = 0.5 * (lo + hi), resid = 0.0;
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        resid = detail::tilted_log_mean_beta(mid, src) - target;
        if (std::fabs(resid) < 1e-12) break;
        (resid < 0.0 ? lo : hi) = mid;
    }
    if (std::fabs(resid) >= 1e-10) {
        // gamma numerically at the support edge: fall back to the nearby tag
        if (gamma <= pmin * (1.0 + 1e-9)) return {RhoGamma::Tag::BelowSupport};
        if (gamma >= pmax * (1.0 - 1e-9)) return {RhoGamma::Tag::AboveSupport};
        std::ostringstream os;
        os << "solve_rho_gamma: no convergence, bracket [" << lo << ", " << hi
           << "], residual " << resid;
        throw std::runtime_error(os.str());
    }
    return {RhoGamma::Tag::Interior, mid};
}

namespace detail {

// Tangent of E_s at rho_gamma, written in beta form so it stays well defined
// for beta_gamma <= 0:  (1+rho)(log S(beta_g) - beta_g log gamma) + log gamma.
// For beta_g > 0 this equals E_s(rho_g) + E_s'(rho_g)(rho - rho_g).
struct ClassExpParams {
    RhoGamma rg;
    double slope = 0.0;      // log S(beta_g) - beta_g * log gamma
    double log_gamma = 0.0;

    double tangent(double rho) const { return (1.0 + rho) * slope + log_gamma; }
};

inline ClassExpParams class_exp_params(double gamma, const SourceSpec& src) {
    ClassExpParams p;
    p.rg = solve_rho_gamma(gamma, src);
    if (p.rg.interior()) {
        p.log_gamma = std::log(gamma);
        // log S(beta) - beta log gamma as one log-sum-exp of
        // beta (log p - log gamma); avoids cancellation for extreme beta
        double b = p.rg.beta_gamma;
        double m = -std::numeric_limits<double>::infinity();
        for (double pr : src.probs)
            if (pr > 0.0) m = std::max(m, b * (std::log(pr) - p.log_gamma));
        double s = 0.0;
        for (double pr : src.probs)
            if (pr > 0.0) s += std::exp(b * (std::log(pr) - p.log_gamma) - m);
        p.slope = m + std::log(s);
    }
    return p;
}

// es_class given precomputed params and E_s(rho); shared with the engine's
// cached evaluation path.
inline ExtReal es_class_with(int i, double rho, double es_rho,
                             const ClassExpParams& p) {
    switch (p.rg.tag) {
        case RhoGamma::Tag::BelowSupport:
            return i == 1 ? ExtReal::finite(es_rho) : ExtReal::minus_inf();
        case RhoGamma::Tag::AboveSupport:
            return i == 1 ? ExtReal::minus_inf() : ExtReal::finite(es_rho);
        default: {
            double beta = 1.0 / (1.0 + rho);
            bool on_es = i == 1 ? beta >= p.rg.beta_gamma : beta < p.rg.beta_gamma;
            return ExtReal::finite(on_es ? es_rho : p.tangent(rho));
        }
    }
}

}  // namespace detail

// Class source exponents: E_s on one side of the tangency point, its tangent
// on the other; degenerate thresholds give -inf for the vanishing class.
inline ExtReal es_class(int i, double rho, const SourceSpec& src, double gamma) {
    if (i != 1 && i != 2) throw std::domain_error("es_class: class index must be 1 or 2");
    auto p = detail::class_exp_params(gamma, src);
    double es_rho = e_s(rho, src);
    return detail::es_class_with(i, rho, es_rho, p);
}

}  // namespace macexp

#endif
