#include "balayage/subharmonic.hpp"

#include <cmath>

#include "balayage/errors.hpp"
#include "balayage/potentials.hpp"

namespace balayage {

bool Box::contains(std::span<const double> p) const {
    for (std::size_t a = 0; a < lo.size(); ++a)
        if (p[a] < lo[a] || p[a] > hi[a]) return false;
    return true;
}

bool Box::contains(const Box& other) const {
    for (std::size_t a = 0; a < lo.size(); ++a)
        if (other.lo[a] < lo[a] || other.hi[a] > hi[a]) return false;
    return true;
}

CanonicalSubharmonic::CanonicalSubharmonic(DiscreteMeasure atoms, DiscreteMeasure sources, double constant,
                                           Box region, std::vector<double> linear)
    : atoms_(std::move(atoms)), sources_(std::move(sources)), constant_(constant), region_(std::move(region)),
      linear_(std::move(linear)) {
    const auto d = static_cast<std::size_t>(atoms_.dim());
    if (sources_.dim() != atoms_.dim() || region_.lo.size() != d || region_.hi.size() != d)
        throw DimensionError("CanonicalSubharmonic: dimension mismatch");
    if (linear_.empty()) linear_.assign(d, 0.0);
    if (linear_.size() != d) throw DimensionError("CanonicalSubharmonic: linear part dimension mismatch");
    if (!atoms_.is_positive()) throw DomainError("CanonicalSubharmonic: the Riesz measure must be positive");
    for (std::size_t a = 0; a < d; ++a)
        if (!(region_.lo[a] <= region_.hi[a])) throw DomainError("CanonicalSubharmonic: empty region");
    for (std::size_t i = 0; i < sources_.size(); ++i)
        if (region_.contains(sources_.location(i)))
            throw DomainError("CanonicalSubharmonic: every source must lie outside the closed region");
}

CanonicalSubharmonic CanonicalSubharmonic::harmonic(DiscreteMeasure sources, double constant, Box region,
                                                    std::vector<double> linear) {
    const int d = sources.dim();
    return CanonicalSubharmonic(DiscreteMeasure(d), std::move(sources), constant, std::move(region),
                                std::move(linear));
}

CanonicalSubharmonic CanonicalSubharmonic::kernel_at(std::span<const double> x, Box region) {
    const int d = static_cast<int>(x.size());
    return CanonicalSubharmonic(dirac(x), DiscreteMeasure(d), 0.0, std::move(region));
}

double CanonicalSubharmonic::harmonic_norm() const {
    double s = std::abs(constant_);
    for (double w : sources_.weights()) s += std::abs(w);
    for (double l : linear_) s += std::abs(l);
    return s;
}

CanonicalSubharmonic CanonicalSubharmonic::with_constant(double c) const {
    CanonicalSubharmonic out(*this);
    out.constant_ = c;
    return out;
}

ExtReal eval_subharmonic(const CanonicalSubharmonic& u, std::span<const double> y) {
    if (y.size() != static_cast<std::size_t>(u.dim())) throw DimensionError("eval_subharmonic: dimension mismatch");
    ExtAccumulator acc;
    acc.add(pt(u.atoms(), y));
    acc.add(pt(u.sources(), y));
    acc.add_finite(dot(u.linear(), y));
    acc.add_finite(u.constant());
    return acc.result();
}

ExtReal integrate(const CanonicalSubharmonic& u, const DiscreteMeasure& mu) {
    if (mu.dim() != u.dim()) throw DimensionError("integrate: dimension mismatch");
    ExtAccumulator acc;
    for (std::size_t i = 0; i < mu.size(); ++i) acc.add(mu.weight(i) * eval_subharmonic(u, mu.location(i)));
    return acc.result();
}

} // namespace balayage
