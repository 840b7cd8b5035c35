#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "balayage/errors.hpp"

namespace balayage {

/// Value on the extended real line. Infinities are stored as IEEE infinities;
/// NaN is never representable: every operation that would produce it throws.
class ExtReal {
public:
    constexpr ExtReal() = default;
    ExtReal(double v) : value_(v) {  // NOLINT: implicit from double is intended
        if (std::isnan(v)) throw NumericFault("ExtReal: NaN is not an extended real");
    }

    static ExtReal pos_inf() { return ExtReal(std::numeric_limits<double>::infinity()); }
    static ExtReal neg_inf() { return ExtReal(-std::numeric_limits<double>::infinity()); }

    double value() const { return value_; }
    bool is_finite() const { return std::isfinite(value_); }
    bool is_pos_inf() const { return value_ == std::numeric_limits<double>::infinity(); }
    bool is_neg_inf() const { return value_ == -std::numeric_limits<double>::infinity(); }

    friend ExtReal operator+(ExtReal a, ExtReal b) {
        if ((a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf()))
            throw NumericFault("ExtReal: (+inf) + (-inf) is undefined");
        return ExtReal(a.value_ + b.value_);
    }
    friend ExtReal operator-(ExtReal a) { return ExtReal(-a.value_); }
    friend ExtReal operator-(ExtReal a, ExtReal b) { return a + (-b); }

    /// Scaling by a real weight; 0 * (+-inf) = 0 as in integration theory.
    friend ExtReal operator*(double w, ExtReal a) {
        if (w == 0.0) return ExtReal(0.0);
        return ExtReal(w * a.value_);
    }

    ExtReal& operator+=(ExtReal b) { return *this = *this + b; }

    friend bool operator==(ExtReal a, ExtReal b) { return a.value_ == b.value_; }
    friend auto operator<=>(ExtReal a, ExtReal b) { return a.value_ <=> b.value_; }

    std::string to_string() const;

private:
    double value_ = 0.0;
};

/// Running sum over the extended reals. Finite terms are accumulated with
/// Neumaier compensation; infinite terms are tracked separately so that a
/// (+inf)/(-inf) mix is detected instead of producing NaN.
class ExtAccumulator {
public:
    void add(ExtReal x);
    void add_finite(double x);

    bool has_pos_inf() const { return pos_inf_; }
    bool has_neg_inf() const { return neg_inf_; }
    bool clashed() const { return pos_inf_ && neg_inf_; }

    /// Throws NumericFault on clash.
    ExtReal result() const;
    double finite_part() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
    bool pos_inf_ = false;
    bool neg_inf_ = false;
};

} // namespace balayage
