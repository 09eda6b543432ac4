#ifndef MACEXP_PAPER_EXAMPLE_HPP
#define MACEXP_PAPER_EXAMPLE_HPP

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "macexp/model.hpp"

namespace macexp {

// Parameters of the built-in 6x6-input, 4-output example channel and its two
// binary sources.
struct ExampleParams {
    double k1 = 0.056;
    double k2 = 0.01;
    double p1 = 0.028;
    double p2 = 0.01155;
};

inline void check_params(const ExampleParams& p) {
    if (!(p.k1 >= 0.0 && 3.0 * p.k1 <= 1.0))
        throw std::domain_error("ExampleParams: need 0 <= 3*k1 <= 1");
    if (!(p.k2 >= 0.0 && p.k2 <= 0.5))
        throw std::domain_error("ExampleParams: need 0 <= k2 <= 0.5");
    if (!(p.p1 > 0.0 && p.p1 < 1.0 && p.p2 > 0.0 && p.p2 < 1.0))
        throw std::domain_error("ExampleParams: source parameters must be in (0,1)");
}

// The 6x4 base block W1: four shifted-diagonal rows and two half-half rows.
inline std::array<std::array<double, 4>, 6> build_w1(const ExampleParams& p) {
    check_params(p);
    double a = 1.0 - 3.0 * p.k1, k1 = p.k1;
    double h = 0.5 - p.k2, k2 = p.k2;
    return {{{a, k1, k1, k1},
             {k1, a, k1, k1},
             {k1, k1, a, k1},
             {k1, k1, k1, a},
             {h, h, k2, k2},
             {k2, k2, h, h}}};
}

// Stacks W1..W6 into the 36x4 MAC table, row index x1 + 6*(x2-1).
// W2 and W3 repeat W1's 5th and 6th rows; W4..W6 are row permutations of W1.
inline MacChannel build_paper_channel(const ExampleParams& p = {}) {
    auto w1 = build_w1(p);
    std::vector<std::array<int, 6>> perms = {
        {0, 1, 2, 3, 4, 5},  // W1
        {4, 4, 4, 4, 4, 4},  // W2
        {5, 5, 5, 5, 5, 5},  // W3
        {1, 2, 3, 0, 5, 4},  // W4
        {2, 3, 0, 1, 4, 5},  // W5
        {3, 0, 1, 2, 5, 4},  // W6
    };
    MacChannel ch;
    ch.n1 = 6;
    ch.n2 = 6;
    ch.ny = 4;
    for (const auto& perm : perms)
        for (int r = 0; r < 6; ++r)
            for (int y = 0; y < 4; ++y) ch.w.push_back(w1[perm[r]][y]);
    return ch;
}

inline SystemModel build_paper_model(const ExampleParams& p = {}) {
    SystemModel m;
    m.source1.probs = {p.p1, 1.0 - p.p1};
    m.source2.probs = {p.p2, 1.0 - p.p2};
    m.channel = build_paper_channel(p);
    InputDistribution q_high{{0.0, 0.0, 0.0, 0.0, 0.5, 0.5}};
    InputDistribution q_low{{0.25, 0.25, 0.25, 0.25, 0.0, 0.0}};
    for (int nu = 0; nu < 2; ++nu) {
        m.policy.q[nu][0] = q_high;
        m.policy.q[nu][1] = q_low;
    }
    return m;
}

// CLI fixture lookup; returns true when `name` names a built-in model.
inline bool lookup_fixture(const std::string& name, SystemModel& out) {
    if (name == "paper-example") {
        out = build_paper_model();
        return true;
    }
    return false;
}

}  // namespace macexp

#endif
