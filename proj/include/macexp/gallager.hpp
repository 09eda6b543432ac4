#ifndef MACEXP_GALLAGER_HPP
#define MACEXP_GALLAGER_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "macexp/model.hpp"

namespace macexp {

// Point-to-point channel obtained from the MAC by absorbing the other user's
// input (or by flattening the input pair).
struct PtpChannel {
    int nin = 0;
    int nout = 0;
    std::vector<double> w;  // nin x nout, row-major

    double at(int x, int y) const { return w[static_cast<size_t>(x) * nout + y]; }
};

enum class ErrorType { User1, User2, Both };

inline ErrorType complement_of(ErrorType tau) {
    switch (tau) {
        case ErrorType::User1: return ErrorType::User2;
        case ErrorType::User2: return ErrorType::User1;
        default:
            throw std::domain_error("complement_of: Both has empty complement");
    }
}

namespace detail {

// log(sum exp(terms)) with max shift; terms holds logs of positive summands.
inline double log_sum_exp(const std::vector<double>& terms) {
    if (terms.empty()) return -std::numeric_limits<double>::infinity();
    double m = terms[0];
    for (double t : terms)
        if (t > m) m = t;
    double s = 0.0;
    for (double t : terms) s += std::exp(t - m);
    return m + std::log(s);
}

}  // namespace detail

// Gallager source function E_s(rho, P) = (1+rho) log sum_u P(u)^(1/(1+rho)).
inline double e_s(double rho, const SourceSpec& src) {
    if (rho <= -1.0) throw std::domain_error("e_s: rho must exceed -1");
    double beta = 1.0 / (1.0 + rho);
    std::vector<double> terms;
    terms.reserve(src.probs.size());
    for (double p : src.probs)
        if (p > 0.0) terms.push_back(beta * std::log(p));
    return (1.0 + rho) * detail::log_sum_exp(terms);
}

// Analytic derivative of e_s in rho:
// with beta = 1/(1+rho), E_s' = log S(beta) - beta * (sum P^b log P) / S(beta).
inline double e_s_prime(double rho, const SourceSpec& src) {
    if (rho <= -1.0) throw std::domain_error("e_s_prime: rho must exceed -1");
    double beta = 1.0 / (1.0 + rho);
    std::vector<double> terms;
    terms.reserve(src.probs.size());
    double num = 0.0;
    double shift = 0.0;
    for (double p : src.probs)
        if (p > 0.0) terms.push_back(beta * std::log(p));
    double lse = detail::log_sum_exp(terms);
    shift = lse;
    size_t k = 0;
    for (double p : src.probs)
        if (p > 0.0) num += std::exp(terms[k++] - shift) * std::log(p);
    return lse - beta * num;
}

// Gallager channel function
// E_0(rho, Q, W) = -log sum_y ( sum_x Q(x) W(y|x)^(1/(1+rho)) )^(1+rho).
inline double e_0(double rho, const InputDistribution& q, const PtpChannel& ch) {
    if (static_cast<int>(q.probs.size()) != ch.nin)
        throw std::invalid_argument("e_0: distribution does not match channel input");
    double beta = 1.0 / (1.0 + rho);
    std::vector<double> outer;
    outer.reserve(ch.nout);
    std::vector<double> inner;
    for (int y = 0; y < ch.nout; ++y) {
        inner.clear();
        for (int x = 0; x < ch.nin; ++x) {
            double qx = q.probs[x];
            double wyx = ch.at(x, y);
            if (qx > 0.0 && wyx > 0.0)
                inner.push_back(std::log(qx) + beta * std::log(wyx));
        }
        if (!inner.empty())
            outer.push_back((1.0 + rho) * detail::log_sum_exp(inner));
    }
    return -detail::log_sum_exp(outer);
}

// Channel seen by user tau when the other user's input is drawn from q_other:
// entries W(y|x1,x2) * Q(x_other), output index = x_other * ny + y.
inline PtpChannel induced_channel(const MacChannel& ch, ErrorType tau,
                                  const InputDistribution& q_other) {
    if (tau == ErrorType::Both)
        throw std::invalid_argument("induced_channel: tau must be a single user");
    int nown = tau == ErrorType::User1 ? ch.n1 : ch.n2;
    int noth = tau == ErrorType::User1 ? ch.n2 : ch.n1;
    if (static_cast<int>(q_other.probs.size()) != noth)
        throw std::invalid_argument("induced_channel: q_other has wrong length");
    PtpChannel out;
    out.nin = nown;
    out.nout = noth * ch.ny;
    out.w.assign(static_cast<size_t>(out.nin) * out.nout, 0.0);
    for (int xo = 0; xo < nown; ++xo)
        for (int xc = 0; xc < noth; ++xc)
            for (int y = 0; y < ch.ny; ++y) {
                double wv = tau == ErrorType::User1 ? ch.at(xo, xc, y) : ch.at(xc, xo, y);
                out.w[static_cast<size_t>(xo) * out.nout + xc * ch.ny + y] =
                    wv * q_other.probs[xc];
            }
    return out;
}

// Joint distribution over X1 x X2 in the channel's row order (x1 fastest).
inline InputDistribution product_distribution(const InputDistribution& q1,
                                              const InputDistribution& q2) {
    InputDistribution out;
    out.probs.resize(q1.probs.size() * q2.probs.size());
    size_t n1 = q1.probs.size();
    for (size_t x2 = 0; x2 < q2.probs.size(); ++x2)
        for (size_t x1 = 0; x1 < n1; ++x1)
            out.probs[x1 + n1 * x2] = q1.probs[x1] * q2.probs[x2];
    return out;
}

// The MAC viewed as a point-to-point channel with input alphabet X1 x X2.
inline PtpChannel mac_as_ptp(const MacChannel& ch) {
    PtpChannel out;
    out.nin = ch.n1 * ch.n2;
    out.nout = ch.ny;
    out.w = ch.w;
    return out;
}

}  // namespace macexp

#endif
