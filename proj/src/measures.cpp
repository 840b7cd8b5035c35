#include "balayage/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "balayage/errors.hpp"
#include "balayage/kernels.hpp"

namespace balayage {

double compensated_sum(std::span<const double> values) {
    double sum = 0.0;
    double comp = 0.0;
    for (double x : values) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    return sum + comp;
}

DiscreteMeasure::DiscreteMeasure(int dim) : dim_(Dimension(dim).value()) {}

DiscreteMeasure::DiscreteMeasure(int dim, std::span<const Atom> atoms) : dim_(Dimension(dim).value()) {
    coords_.reserve(atoms.size() * static_cast<std::size_t>(dim));
    weights_.reserve(atoms.size());
    for (const auto& a : atoms) {
        if (a.location.size() != static_cast<std::size_t>(dim))
            throw DimensionError("DiscreteMeasure: atom dimension does not match d");
        coords_.insert(coords_.end(), a.location.begin(), a.location.end());
        weights_.push_back(a.weight);
    }
    normalize();
}

DiscreteMeasure::DiscreteMeasure(int dim, std::span<const double> coords, std::span<const double> weights)
    : dim_(Dimension(dim).value()), coords_(coords.begin(), coords.end()), weights_(weights.begin(), weights.end()) {
    if (coords_.size() != weights_.size() * static_cast<std::size_t>(dim))
        throw DimensionError("DiscreteMeasure: coordinate array does not match weights * d");
    normalize();
}

void DiscreteMeasure::normalize() {
    for (double c : coords_)
        if (!std::isfinite(c)) throw DomainError("DiscreteMeasure: non-finite atom coordinate");
    for (double w : weights_)
        if (!std::isfinite(w)) throw DomainError("DiscreteMeasure: non-finite atom weight");

    const std::size_t n = weights_.size();
    const auto d = static_cast<std::size_t>(dim_);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto loc = [&](std::size_t i) { return coords_.begin() + static_cast<std::ptrdiff_t>(i * d); };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::lexicographical_compare(loc(a), loc(a) + static_cast<std::ptrdiff_t>(d), loc(b),
                                            loc(b) + static_cast<std::ptrdiff_t>(d));
    });

    std::vector<double> coords;
    std::vector<double> weights;
    coords.reserve(coords_.size());
    weights.reserve(n);
    std::size_t i = 0;
    std::vector<double> group;
    while (i < n) {
        std::size_t j = i;
        group.clear();
        while (j < n && std::equal(loc(order[i]), loc(order[i]) + static_cast<std::ptrdiff_t>(d), loc(order[j]))) {
            group.push_back(weights_[order[j]]);
            ++j;
        }
        const double w = group.size() == 1 ? group.front() : compensated_sum(group);
        if (w != 0.0) {
            coords.insert(coords.end(), loc(order[i]), loc(order[i]) + static_cast<std::ptrdiff_t>(d));
            weights.push_back(w);
        }
        i = j;
    }
    coords_ = std::move(coords);
    weights_ = std::move(weights);
}

bool DiscreteMeasure::is_positive() const {
    return std::all_of(weights_.begin(), weights_.end(), [](double w) { return w > 0.0; });
}

Mass DiscreteMeasure::mass() const {
    std::vector<double> pos;
    std::vector<double> neg;
    for (double w : weights_) (w > 0.0 ? pos : neg).push_back(std::abs(w));
    Mass m;
    m.total = compensated_sum(weights_);
    m.positive_total = compensated_sum(pos);
    m.negative_total = compensated_sum(neg);
    return m;
}

DiscreteMeasure DiscreteMeasure::positive_part() const {
    return restrict_by_sign(true);
}

DiscreteMeasure DiscreteMeasure::negative_part() const {
    return restrict_by_sign(false);
}

DiscreteMeasure DiscreteMeasure::restrict_by_sign(bool positive) const {
    DiscreteMeasure out(dim_);
    const auto d = static_cast<std::size_t>(dim_);
    for (std::size_t i = 0; i < size(); ++i) {
        if ((weights_[i] > 0.0) != positive) continue;
        out.coords_.insert(out.coords_.end(), coords_.begin() + static_cast<std::ptrdiff_t>(i * d),
                           coords_.begin() + static_cast<std::ptrdiff_t>((i + 1) * d));
        out.weights_.push_back(std::abs(weights_[i]));
    }
    return out;
}

double DiscreteMeasure::support_radius() const {
    double r = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        double s = 0.0;
        for (double c : location(i)) s += c * c;
        r = std::max(r, std::sqrt(s));
    }
    return r;
}

DiscreteMeasure dirac(std::span<const double> x) {
    const double w = 1.0;
    return DiscreteMeasure(static_cast<int>(x.size()), x, std::span<const double>(&w, 1));
}

DiscreteMeasure combine(double alpha, const DiscreteMeasure& mu, double beta, const DiscreteMeasure& nu) {
    if (mu.dim() != nu.dim()) throw DimensionError("combine: measures of different dimension");
    std::vector<double> coords(mu.coords().begin(), mu.coords().end());
    coords.insert(coords.end(), nu.coords().begin(), nu.coords().end());
    std::vector<double> weights;
    weights.reserve(mu.size() + nu.size());
    for (double w : mu.weights()) weights.push_back(alpha * w);
    for (double w : nu.weights()) weights.push_back(beta * w);
    return DiscreteMeasure(mu.dim(), coords, weights);
}

DiscreteMeasure restrict(const DiscreteMeasure& mu, const std::function<bool(std::span<const double>)>& region) {
    std::vector<double> coords;
    std::vector<double> weights;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (!region(mu.location(i))) continue;
        coords.insert(coords.end(), mu.location(i).begin(), mu.location(i).end());
        weights.push_back(mu.weight(i));
    }
    return DiscreteMeasure(mu.dim(), coords, weights);
}

} // namespace balayage
