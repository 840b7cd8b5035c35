#include "balayage/ext_real.hpp"

#include <cmath>
#include <sstream>

namespace balayage {

std::string ExtReal::to_string() const {
    if (is_pos_inf()) return "+inf";
    if (is_neg_inf()) return "-inf";
    std::ostringstream os;
    os.precision(17);
    os << value_;
    return os.str();
}

void ExtAccumulator::add_finite(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
        comp_ += (sum_ - t) + x;
    else
        comp_ += (x - t) + sum_;
    sum_ = t;
}

void ExtAccumulator::add(ExtReal x) {
    if (x.is_pos_inf())
        pos_inf_ = true;
    else if (x.is_neg_inf())
        neg_inf_ = true;
    else
        add_finite(x.value());
}

ExtReal ExtAccumulator::result() const {
    if (clashed()) throw NumericFault("extended-real sum mixes +inf and -inf");
    if (pos_inf_) return ExtReal::pos_inf();
    if (neg_inf_) return ExtReal::neg_inf();
    return ExtReal(sum_ + comp_);
}

} // namespace balayage
