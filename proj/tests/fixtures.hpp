#pragma once

#include "balayage/classical_domains.hpp"
#include "balayage/geometry.hpp"
#include "balayage/subharmonic.hpp"

namespace testing_support {

/// Full box around the unit disc, offset so that no cell face passes through
/// a round coordinate.
inline balayage::GridOpenSet disc_frame(double h = 0.05, int n = 53) {
    const double lo = -1.3190983005625053;
    return balayage::GridOpenSet(balayage::Point{lo, lo}, h, std::vector<int>{n, n});
}

inline balayage::Box frame_box(const balayage::GridOpenSet& g) { return {g.box_lo(), g.box_hi()}; }

inline const balayage::BallDomain& unit_disc() {
    static const balayage::BallDomain B(balayage::Point{0.0, 0.0}, 1.0);
    return B;
}

} // namespace testing_support
