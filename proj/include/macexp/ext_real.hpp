#ifndef MACEXP_EXT_REAL_HPP
#define MACEXP_EXT_REAL_HPP

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace macexp {

// Extended-real scalar: finite | +inf | -inf.  Used wherever the class source
// exponents degenerate (gamma at 0 or 1) and for the per-error-type objectives.
class ExtReal {
public:
    enum class Tag { MinusInf, Finite, PlusInf };

    ExtReal() : tag_(Tag::Finite), v_(0.0) {}

    static ExtReal finite(double v) {
        ExtReal r;
        r.tag_ = Tag::Finite;
        r.v_ = v;
        return r;
    }
    static ExtReal plus_inf() {
        ExtReal r;
        r.tag_ = Tag::PlusInf;
        return r;
    }
    static ExtReal minus_inf() {
        ExtReal r;
        r.tag_ = Tag::MinusInf;
        return r;
    }

    Tag tag() const { return tag_; }
    bool is_finite() const { return tag_ == Tag::Finite; }
    bool is_plus_inf() const { return tag_ == Tag::PlusInf; }
    bool is_minus_inf() const { return tag_ == Tag::MinusInf; }

    double value() const {
        if (!is_finite()) throw std::logic_error("ExtReal: value() on non-finite");
        return v_;
    }

    // Value as a plain double with IEEE infinities.
    double as_double() const {
        switch (tag_) {
            case Tag::MinusInf: return -std::numeric_limits<double>::infinity();
            case Tag::PlusInf: return std::numeric_limits<double>::infinity();
            default: return v_;
        }
    }

    ExtReal operator-() const {
        if (is_plus_inf()) return minus_inf();
        if (is_minus_inf()) return plus_inf();
        return finite(-v_);
    }

    ExtReal operator+(const ExtReal& o) const {
        if (is_plus_inf() || o.is_plus_inf()) {
            if (is_minus_inf() || o.is_minus_inf())
                throw std::domain_error("ExtReal: inf - inf");
            return plus_inf();
        }
        if (is_minus_inf() || o.is_minus_inf()) return minus_inf();
        return finite(v_ + o.v_);
    }

    ExtReal operator-(const ExtReal& o) const { return *this + (-o); }

    // Total order: MinusInf < Finite(v) < PlusInf.
    bool operator<(const ExtReal& o) const {
        if (tag_ != o.tag_) return static_cast<int>(tag_) < static_cast<int>(o.tag_);
        return is_finite() && v_ < o.v_;
    }
    bool operator>(const ExtReal& o) const { return o < *this; }
    bool operator<=(const ExtReal& o) const { return !(o < *this); }
    bool operator>=(const ExtReal& o) const { return !(*this < o); }
    bool operator==(const ExtReal& o) const {
        return tag_ == o.tag_ && (!is_finite() || v_ == o.v_);
    }

    friend ExtReal min(const ExtReal& a, const ExtReal& b) { return a < b ? a : b; }
    friend ExtReal max(const ExtReal& a, const ExtReal& b) { return a < b ? b : a; }

    friend std::ostream& operator<<(std::ostream& os, const ExtReal& x) {
        if (x.is_plus_inf()) return os << "inf";
        if (x.is_minus_inf()) return os << "-inf";
        return os << x.v_;
    }

private:
    Tag tag_;
    double v_ = 0.0;
};

}  // namespace macexp

#endif
