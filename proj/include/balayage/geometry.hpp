#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "balayage/measures.hpp"
#include "balayage/point.hpp"

namespace balayage {

/// Rasterized open set in R^2 or R^3: a box of cells of side `spacing`
/// starting at `origin`, with a mask selecting the cells that belong to the
/// set. Everything outside the array frame is complement.
class GridOpenSet {
public:
    /// Full box: every cell inside.
    GridOpenSet(Point origin, double spacing, std::vector<int> shape);
    GridOpenSet(Point origin, double spacing, std::vector<int> shape, std::vector<std::uint8_t> inside);

    int dim() const { return static_cast<int>(shape_.size()); }
    const Point& origin() const { return origin_; }
    double spacing() const { return spacing_; }
    const std::vector<int>& shape() const { return shape_; }
    std::size_t cell_count() const { return inside_.size(); }
    bool inside(std::size_t cell) const { return inside_[cell] != 0; }
    std::span<const std::uint8_t> inside_mask() const { return inside_; }

    std::size_t index(std::span<const int> multi) const;
    std::array<int, 3> multi_index(std::size_t cell) const;
    Point cell_center(std::size_t cell) const;
    /// Cell containing p, or nullopt when p lies outside the array frame.
    std::optional<std::size_t> locate(std::span<const double> p) const;
    /// Smallest distance from p to a face of the cell containing it.
    double distance_to_cell_faces(std::span<const double> p) const;

    /// Face neighbours of a cell inside the array; `touches_frame` is set when
    /// some face lies on the array frame.
    void face_neighbours(std::size_t cell, std::vector<std::size_t>& out, bool& touches_frame) const;

    /// Inside cells face-adjacent to a non-inside cell or to the frame.
    const std::vector<std::uint8_t>& frontier_band() const;

    /// Lower corner and upper corner of the array box.
    Point box_lo() const { return origin_; }
    Point box_hi() const;
    double box_diameter() const;

private:
    Point origin_;
    double spacing_;
    std::vector<int> shape_;
    std::vector<std::uint8_t> inside_;
    std::vector<std::uint8_t> frontier_;
};

/// Set of cells of a grid, stored as a membership mask of the grid's size.
class CellSet {
public:
    CellSet() = default;
    explicit CellSet(const GridOpenSet& g);
    CellSet(const GridOpenSet& g, std::span<const std::size_t> cells);

    std::size_t grid_size() const { return mask_.size(); }
    bool contains(std::size_t cell) const { return cell < mask_.size() && mask_[cell] != 0; }
    void insert(std::size_t cell);
    void erase(std::size_t cell);
    std::size_t count() const;
    bool empty() const { return count() == 0; }
    /// Sorted cell indices.
    std::vector<std::size_t> cells() const;
    std::span<const std::uint8_t> mask() const { return mask_; }

    bool is_subset_of(const CellSet& other) const;
    friend bool operator==(const CellSet&, const CellSet&) = default;

private:
    std::vector<std::uint8_t> mask_;
};

/// Face-adjacency components of `cells`, ordered by smallest cell index.
std::vector<CellSet> components(const GridOpenSet& g, const CellSet& cells);

/// True iff no cell of S lies in the frontier band of g.
bool is_relatively_compact(const GridOpenSet& g, const CellSet& S);

/// Inward filling of S with respect to g: g minus the component of
/// (inside cells \ S) joined to the point at infinity, where infinity is
/// adjacent to every frontier-band cell. Throws DomainError if S is not a
/// relatively compact subset of g.
CellSet inward_fill(const GridOpenSet& g, const CellSet& S);

/// Components of (inside \ F) in the one-point compactification: `total`
/// counts them with all infinity-touching ones merged into one, and
/// `with_infinity` counts those containing the virtual infinity node (0 or 1).
struct InfinityComponents {
    std::size_t total = 0;
    std::size_t with_infinity = 0;
};
InfinityComponents complement_components(const GridOpenSet& g, const CellSet& F);

/// Cells containing at least one atom of the given measures. Throws
/// DomainError if an atom lies outside the inside cells of g.
CellSet rasterize_support(const GridOpenSet& g, std::span<const DiscreteMeasure> measures);

/// Cells of g that are not in S (inside or not), i.e. the rasterized part of
/// R^d \ S that lies within the array frame.
std::vector<std::size_t> cells_outside(const GridOpenSet& g, const CellSet& S);

/// Plain-text mask: a one-line JSON header {"origin": [...], "spacing": h}
/// followed by rows of '#' (inside) and '.' (outside). Row r is j = r and
/// column c is i = c. In 3D, slices k = 0, 1, ... are separated by a blank line.
GridOpenSet grid_from_mask(const std::string& text);
std::string grid_to_mask(const GridOpenSet& g);
/// Mask text of a cell set over the same frame (header included).
std::string cells_to_mask(const GridOpenSet& g, const CellSet& S);
CellSet cells_from_mask(const GridOpenSet& g, const std::string& text);

} // namespace balayage
