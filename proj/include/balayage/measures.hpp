#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "balayage/point.hpp"

namespace balayage {

/// Totals of a signed measure; total == positive_total - negative_total.
struct Mass {
    double total = 0.0;
    double positive_total = 0.0;
    double negative_total = 0.0;
};

/// Finite signed atomic measure on R^d.
///
/// Atoms are kept sorted lexicographically by location; atoms sharing a
/// location (exact coordinate equality) are merged and zero weights dropped,
/// so locations are pairwise distinct. Immutable after construction.
class DiscreteMeasure {
public:
    struct Atom {
        Point location;
        double weight;
    };

    /// Empty measure on R^d.
    explicit DiscreteMeasure(int dim);
    DiscreteMeasure(int dim, std::span<const Atom> atoms);
    /// Flat layout: coords has size() * dim entries.
    DiscreteMeasure(int dim, std::span<const double> coords, std::span<const double> weights);

    int dim() const { return dim_; }
    std::size_t size() const { return weights_.size(); }
    bool empty() const { return weights_.empty(); }

    std::span<const double> location(std::size_t i) const {
        return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
    }
    double weight(std::size_t i) const { return weights_[i]; }
    std::span<const double> weights() const { return weights_; }
    std::span<const double> coords() const { return coords_; }

    bool is_positive() const;
    Mass mass() const;
    /// Jordan decomposition: mu = positive_part() - negative_part().
    DiscreteMeasure positive_part() const;
    DiscreteMeasure negative_part() const;
    /// Largest |location| over the atoms (0 for the empty measure).
    double support_radius() const;

    friend bool operator==(const DiscreteMeasure&, const DiscreteMeasure&) = default;

private:
    void normalize();
    DiscreteMeasure restrict_by_sign(bool positive) const;

    int dim_;
    std::vector<double> coords_;
    std::vector<double> weights_;
};

DiscreteMeasure dirac(std::span<const double> x);

/// alpha * mu + beta * nu. Throws DimensionError on mismatch.
DiscreteMeasure combine(double alpha, const DiscreteMeasure& mu, double beta, const DiscreteMeasure& nu);

/// Atoms of mu whose location satisfies the predicate.
DiscreteMeasure restrict(const DiscreteMeasure& mu, const std::function<bool(std::span<const double>)>& region);

/// Compensated (Neumaier) sum.
double compensated_sum(std::span<const double> values);

} // namespace balayage
