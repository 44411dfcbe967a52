#pragma once

// Double-double arithmetic with an unbounded binary exponent.  Used for the
// alternating finite sums whose terms cancel by many orders of magnitude.

#include <cmath>
#include <cstdint>

#include "jcm/log_real.hpp"

namespace jcm::detail {

struct DD {
    double hi = 0.0;
    double lo = 0.0;
};

inline DD two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline DD quick_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
}

inline DD two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline DD operator+(DD a, DD b) {
    DD s = two_sum(a.hi, b.hi);
    DD t = two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline DD operator-(DD a) { return {-a.hi, -a.lo}; }
inline DD operator-(DD a, DD b) { return a + (-b); }

inline DD operator*(DD a, DD b) {
    DD p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline DD operator/(DD a, DD b) {
    const double q1 = a.hi / b.hi;
    DD r = a - b * DD{q1, 0.0};
    const double q2 = r.hi / b.hi;
    r = r - b * DD{q2, 0.0};
    const double q3 = r.hi / b.hi;
    return DD{q1, 0.0} + DD{q2, 0.0} + DD{q3, 0.0};
}

inline DD dd(double x) { return {x, 0.0}; }

// Value = mant * 2^exp2 with |mant.hi| in [0.5, 1) unless zero.
class ExtDD {
public:
    ExtDD() = default;
    explicit ExtDD(DD v) : mant_(v) { normalize(); }
    explicit ExtDD(double v) : mant_{v, 0.0} { normalize(); }

    static ExtDD from_log(double logmag, int sign) {
        if (sign == 0) return {};
        const double l2 = logmag / std::log(2.0);
        const double whole = std::floor(l2);
        ExtDD r(DD{sign * std::exp2(l2 - whole), 0.0});
        r.exp2_ += static_cast<std::int64_t>(whole);
        return r;
    }

    bool is_zero() const { return mant_.hi == 0.0; }
    int sign() const { return mant_.hi > 0 ? 1 : (mant_.hi < 0 ? -1 : 0); }
    DD mantissa() const { return mant_; }
    std::int64_t exponent() const { return exp2_; }

    double log_abs() const {
        if (is_zero()) return -std::numeric_limits<double>::infinity();
        const double m = std::abs(mant_.hi + mant_.lo);
        return std::log(m) + static_cast<double>(exp2_) * std::log(2.0);
    }

    LogReal to_log_real() const { return LogReal::from_log(log_abs(), sign()); }

    double to_double() const {
        if (is_zero()) return 0.0;
        return std::ldexp(mant_.hi + mant_.lo, static_cast<int>(exp2_));
    }

    friend ExtDD operator*(const ExtDD& a, const ExtDD& b) {
        ExtDD r;
        if (a.is_zero() || b.is_zero()) return r;
        r.mant_ = a.mant_ * b.mant_;
        r.exp2_ = a.exp2_ + b.exp2_;
        r.normalize();
        return r;
    }
    friend ExtDD operator/(const ExtDD& a, const ExtDD& b) {
        ExtDD r;
        if (a.is_zero()) return r;
        r.mant_ = a.mant_ / b.mant_;
        r.exp2_ = a.exp2_ - b.exp2_;
        r.normalize();
        return r;
    }
    friend ExtDD operator+(const ExtDD& a, const ExtDD& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        const ExtDD& big = a.exp2_ >= b.exp2_ ? a : b;
        const ExtDD& small = a.exp2_ >= b.exp2_ ? b : a;
        const std::int64_t shift = big.exp2_ - small.exp2_;
        if (shift > 120) return big;
        const int s = static_cast<int>(shift);
        DD aligned{std::ldexp(small.mant_.hi, -s), std::ldexp(small.mant_.lo, -s)};
        ExtDD r;
        r.mant_ = big.mant_ + aligned;
        r.exp2_ = big.exp2_;
        r.normalize();
        return r;
    }
    ExtDD operator-() const {
        ExtDD r = *this;
        r.mant_ = -r.mant_;
        return r;
    }
    friend ExtDD operator-(const ExtDD& a, const ExtDD& b) { return a + (-b); }
    ExtDD& operator+=(const ExtDD& o) { return *this = *this + o; }
    ExtDD& operator*=(const ExtDD& o) { return *this = *this * o; }

private:
    void normalize() {
        if (mant_.hi == 0.0) {
            mant_ = {};
            exp2_ = 0;
            return;
        }
        int e = 0;
        std::frexp(mant_.hi, &e);
        mant_.hi = std::ldexp(mant_.hi, -e);
        mant_.lo = std::ldexp(mant_.lo, -e);
        exp2_ += e;
    }

    DD mant_{};
    std::int64_t exp2_ = 0;
};

}  // namespace jcm::detail
