#ifndef MACEXP_MODEL_HPP
#define MACEXP_MODEL_HPP

#include <array>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace macexp {

inline constexpr double kProbSumTol = 1e-12;

// One user's memoryless source: a finite probability vector.
struct SourceSpec {
    std::vector<double> probs;
};

// Two-input discrete memoryless MAC.  Rows of w are indexed by the pair
// (x1, x2) at position (x1-1) + n1*(x2-1) (1-based symbols, x1 fastest),
// each row holding the ny values W(y | x1, x2).
struct MacChannel {
    int n1 = 0;
    int n2 = 0;
    int ny = 0;
    std::vector<double> w;  // (n1*n2) x ny, row-major

    double at(int x1, int x2, int y) const {  // 0-based indices
        return w[static_cast<size_t>(x1 + n1 * x2) * ny + y];
    }
};

// Distribution over one user's channel-input alphabet; zeros allowed.
struct InputDistribution {
    std::vector<double> probs;
};

// Per-user class distributions plus (optional) thresholds.
// q[nu][i] is the distribution of user nu+1, class i+1.
struct ClassPolicy {
    std::array<std::array<InputDistribution, 2>, 2> q;
    std::optional<std::array<double, 2>> gamma;  // absent means "optimize"
};

struct SystemModel {
    SourceSpec source1;
    SourceSpec source2;
    MacChannel channel;
    ClassPolicy policy;

    const SourceSpec& source(int nu) const { return nu == 0 ? source1 : source2; }
    int input_size(int nu) const { return nu == 0 ? channel.n1 : channel.n2; }
};

namespace detail {

inline bool sums_to_one(const std::vector<double>& p) {
    double s = 0.0;
    for (double v : p) s += v;
    return std::fabs(s - 1.0) <= kProbSumTol;
}

inline void check_dist(const std::vector<double>& p, const std::string& name,
                       std::vector<std::string>& out) {
    double s = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 0.0) {
            std::ostringstream os;
            os << name << ": negative probability " << p[i] << " at entry " << i + 1;
            out.push_back(os.str());
        }
        s += p[i];
    }
    if (std::fabs(s - 1.0) > kProbSumTol) {
        std::ostringstream os;
        os << name << ": probabilities sum to " << s << " (residual "
           << s - 1.0 << ")";
        out.push_back(os.str());
    }
}

}  // namespace detail

// Reports all invariant violations; empty list means the model is valid.
inline std::vector<std::string> validate(const SystemModel& m) {
    std::vector<std::string> v;
    for (int nu = 0; nu < 2; ++nu) {
        const auto& src = m.source(nu).probs;
        std::string name = "source" + std::to_string(nu + 1);
        detail::check_dist(src, name, v);
        int support = 0;
        for (double p : src)
            if (p > 0.0) ++support;
        if (support < 2) v.push_back(name + ": support size < 2");
    }
    const MacChannel& ch = m.channel;
    if (ch.n1 < 1 || ch.n2 < 1 || ch.ny < 1)
        v.push_back("channel: empty alphabet");
    if (ch.w.size() != static_cast<size_t>(ch.n1) * ch.n2 * ch.ny)
        v.push_back("channel: table size mismatch");
    else {
        for (int r = 0; r < ch.n1 * ch.n2; ++r) {
            double s = 0.0;
            for (int y = 0; y < ch.ny; ++y) {
                double e = ch.w[static_cast<size_t>(r) * ch.ny + y];
                if (e < 0.0) {
                    std::ostringstream os;
                    os << "channel: negative entry at row " << r + 1;
                    v.push_back(os.str());
                }
                s += e;
            }
            if (std::fabs(s - 1.0) > kProbSumTol) {
                std::ostringstream os;
                os << "channel: row " << r + 1 << " sums to " << s
                   << " (residual " << s - 1.0 << ")";
                v.push_back(os.str());
            }
        }
    }
    for (int nu = 0; nu < 2; ++nu)
        for (int i = 0; i < 2; ++i) {
            const auto& q = m.policy.q[nu][i].probs;
            std::string name =
                "dist." + std::to_string(nu + 1) + "." + std::to_string(i + 1);
            if (static_cast<int>(q.size()) != m.input_size(nu)) {
                v.push_back(name + ": length does not match channel alphabet");
                continue;
            }
            detail::check_dist(q, name, v);
        }
    if (m.policy.gamma) {
        for (int nu = 0; nu < 2; ++nu) {
            double g = (*m.policy.gamma)[nu];
            if (!(g >= 0.0 && g <= 1.0)) {
                std::ostringstream os;
                os << "gamma" << nu + 1 << ": value " << g << " outside [0, 1]";
                v.push_back(os.str());
            }
        }
    }
    return v;
}

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

namespace detail {

struct Line {
    int number;
    std::string text;
};

inline std::vector<double> parse_numbers(const Line& ln, const std::string& rhs) {
    std::vector<double> out;
    std::istringstream is(rhs);
    std::string tok;
    while (is >> tok) {
        char* end = nullptr;
        double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0')
            throw ParseError(ln.number, "bad number '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ParseError(ln.number, "expected numbers");
    return out;
}

}  // namespace detail

// Parses the line-oriented model-file format.  Zero-probability source symbols
// are dropped from the support; a note is appended to *warnings when given.
inline SystemModel parse_model(const std::string& text,
                               std::vector<std::string>* warnings = nullptr) {
    using detail::Line;
    std::vector<Line> lines;
    {
        std::istringstream is(text);
        std::string raw;
        int n = 0;
        while (std::getline(is, raw)) {
            ++n;
            auto hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            size_t b = raw.find_first_not_of(" \t\r");
            if (b == std::string::npos) continue;
            size_t e = raw.find_last_not_of(" \t\r");
            lines.push_back({n, raw.substr(b, e - b + 1)});
        }
    }

    SystemModel m;
    bool have_src[2] = {false, false};
    bool have_dist[2][2] = {{false, false}, {false, false}};
    bool have_channel = false;
    std::optional<double> g1, g2;

    size_t pos = 0;
    auto key_value = [&](const Line& ln) -> std::pair<std::string, std::string> {
        auto eq = ln.text.find('=');
        if (eq == std::string::npos)
            throw ParseError(ln.number, "expected 'key = value'");
        auto trim = [](std::string s) {
            size_t b = s.find_first_not_of(" \t");
            size_t e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        return {trim(ln.text.substr(0, eq)), trim(ln.text.substr(eq + 1))};
    };

    while (pos < lines.size()) {
        const Line& hdr = lines[pos];
        if (hdr.text.front() != '[' || hdr.text.back() != ']')
            throw ParseError(hdr.number, "expected section header, got '" + hdr.text + "'");
        std::string section = hdr.text.substr(1, hdr.text.size() - 2);
        ++pos;

        if (section == "source.1" || section == "source.2") {
            int nu = section == "source.1" ? 0 : 1;
            if (pos >= lines.size()) throw ParseError(hdr.number, "section is empty");
            auto [k, v] = key_value(lines[pos]);
            if (k != "probs") throw ParseError(lines[pos].number, "expected 'probs'");
            auto probs = detail::parse_numbers(lines[pos], v);
            std::vector<double> support;
            for (double p : probs)
                if (p > 0.0) support.push_back(p);
            if (support.size() < probs.size() && warnings) {
                warnings->push_back("source." + std::to_string(nu + 1) + ": dropped " +
                                    std::to_string(probs.size() - support.size()) +
                                    " zero-probability symbol(s)");
            }
            (nu == 0 ? m.source1 : m.source2).probs = support;
            have_src[nu] = true;
            ++pos;
        } else if (section == "channel") {
            MacChannel ch;
            std::vector<std::vector<double>> rows;
            while (pos < lines.size() && lines[pos].text.front() != '[') {
                auto [k, v] = key_value(lines[pos]);
                auto nums = detail::parse_numbers(lines[pos], v);
                if (k == "inputs1") ch.n1 = static_cast<int>(nums.at(0));
                else if (k == "inputs2") ch.n2 = static_cast<int>(nums.at(0));
                else if (k == "outputs") ch.ny = static_cast<int>(nums.at(0));
                else if (k == "row") rows.push_back(nums);
                else throw ParseError(lines[pos].number, "unknown key '" + k + "'");
                ++pos;
            }
            if (ch.n1 < 1 || ch.n2 < 1 || ch.ny < 1)
                throw ParseError(hdr.number, "channel needs inputs1, inputs2, outputs");
            if (rows.size() != static_cast<size_t>(ch.n1) * ch.n2)
                throw ParseError(hdr.number,
                                 "expected " + std::to_string(ch.n1 * ch.n2) +
                                     " rows, got " + std::to_string(rows.size()));
            for (size_t r = 0; r < rows.size(); ++r) {
                if (rows[r].size() != static_cast<size_t>(ch.ny))
                    throw ParseError(hdr.number,
                                     "row " + std::to_string(r + 1) + " has " +
                                         std::to_string(rows[r].size()) + " entries");
                double s = 0.0;
                for (double e : rows[r]) {
                    ch.w.push_back(e);
                    s += e;
                }
                if (std::fabs(s - 1.0) > kProbSumTol) {
                    std::ostringstream os;
                    os << "channel row " << r + 1 << " sums to " << s
                       << " (residual " << s - 1.0 << ")";
                    throw ParseError(hdr.number, os.str());
                }
            }
            m.channel = ch;
            have_channel = true;
        } else if (section.rfind("dist.", 0) == 0) {
            if (section.size() != 8 || section[6] != '.')
                throw ParseError(hdr.number, "bad section '" + section + "'");
            int nu = section[5] - '1';
            int i = section[7] - '1';
            if (nu < 0 || nu > 1 || i < 0 || i > 1)
                throw ParseError(hdr.number, "bad section '" + section + "'");
            if (pos >= lines.size()) throw ParseError(hdr.number, "section is empty");
            auto [k, v] = key_value(lines[pos]);
            if (k != "probs") throw ParseError(lines[pos].number, "expected 'probs'");
            m.policy.q[nu][i].probs = detail::parse_numbers(lines[pos], v);
            have_dist[nu][i] = true;
            ++pos;
        } else if (section == "thresholds") {
            while (pos < lines.size() && lines[pos].text.front() != '[') {
                auto [k, v] = key_value(lines[pos]);
                auto nums = detail::parse_numbers(lines[pos], v);
                if (k == "gamma1") g1 = nums.at(0);
                else if (k == "gamma2") g2 = nums.at(0);
                else throw ParseError(lines[pos].number, "unknown key '" + k + "'");
                ++pos;
            }
        } else {
            throw ParseError(hdr.number, "unknown section '" + section + "'");
        }
    }

    for (int nu = 0; nu < 2; ++nu) {
        if (!have_src[nu])
            throw ParseError(0, "missing section [source." + std::to_string(nu + 1) + "]");
        for (int i = 0; i < 2; ++i)
            if (!have_dist[nu][i])
                throw ParseError(0, "missing section [dist." + std::to_string(nu + 1) +
                                        "." + std::to_string(i + 1) + "]");
    }
    if (!have_channel) throw ParseError(0, "missing section [channel]");
    if (g1.has_value() != g2.has_value())
        throw ParseError(0, "thresholds need both gamma1 and gamma2");
    if (g1) m.policy.gamma = std::array<double, 2>{*g1, *g2};

    auto violations = validate(m);
    if (!violations.empty()) throw ParseError(0, violations.front());
    return m;
}

inline std::string serialize_model(const SystemModel& m) {
    std::ostringstream os;
    os.precision(17);
    auto emit = [&](const std::vector<double>& p) {
        for (size_t i = 0; i < p.size(); ++i) os << (i ? " " : "") << p[i];
        os << "\n";
    };
    os << "[source.1]\nprobs = ";
    emit(m.source1.probs);
    os << "[source.2]\nprobs = ";
    emit(m.source2.probs);
    os << "[channel]\ninputs1 = " << m.channel.n1 << "\ninputs2 = " << m.channel.n2
       << "\noutputs = " << m.channel.ny << "\n";
    for (int r = 0; r < m.channel.n1 * m.channel.n2; ++r) {
        os << "row =";
        for (int y = 0; y < m.channel.ny; ++y)
            os << " " << m.channel.w[static_cast<size_t>(r) * m.channel.ny + y];
        os << "\n";
    }
    for (int nu = 0; nu < 2; ++nu)
        for (int i = 0; i < 2; ++i) {
            os << "[dist." << nu + 1 << "." << i + 1 << "]\nprobs = ";
            emit(m.policy.q[nu][i].probs);
        }
    if (m.policy.gamma) {
        os << "[thresholds]\ngamma1 = " << (*m.policy.gamma)[0]
           << "\ngamma2 = " << (*m.policy.gamma)[1] << "\n";
    }
    return os.str();
}

}  // namespace macexp

#endif
