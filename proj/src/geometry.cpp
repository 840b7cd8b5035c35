#include "balayage/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "json.hpp"

#include "balayage/errors.hpp"

namespace balayage {

GridOpenSet::GridOpenSet(Point origin, double spacing, std::vector<int> shape)
    : GridOpenSet(origin, spacing, shape, {}) {}

GridOpenSet::GridOpenSet(Point origin, double spacing, std::vector<int> shape, std::vector<std::uint8_t> inside)
    : origin_(std::move(origin)), spacing_(spacing), shape_(std::move(shape)), inside_(std::move(inside)) {
    if (shape_.size() != 2 && shape_.size() != 3) throw DomainError("GridOpenSet: only d = 2 or 3 is supported");
    if (origin_.size() != shape_.size()) throw DimensionError("GridOpenSet: origin dimension mismatch");
    if (!(spacing_ > 0.0) || !std::isfinite(spacing_)) throw DomainError("GridOpenSet: spacing must be > 0");
    std::size_t n = 1;
    for (int s : shape_) {
        if (s < 1) throw DomainError("GridOpenSet: extents must be >= 1");
        n *= static_cast<std::size_t>(s);
    }
    if (inside_.empty()) inside_.assign(n, 1);
    if (inside_.size() != n) throw DimensionError("GridOpenSet: mask size does not match shape");
    for (auto& v : inside_) v = v ? 1 : 0;
    if (std::none_of(inside_.begin(), inside_.end(), [](std::uint8_t v) { return v != 0; }))
        throw DomainError("GridOpenSet: at least one cell must be inside");

    frontier_.assign(n, 0);
    std::vector<std::size_t> nb;
    for (std::size_t c = 0; c < n; ++c) {
        if (!inside_[c]) continue;
        bool frame = false;
        face_neighbours(c, nb, frame);
        bool band = frame;
        for (std::size_t m : nb) band = band || !inside_[m];
        frontier_[c] = band ? 1 : 0;
    }
}

std::size_t GridOpenSet::index(std::span<const int> multi) const {
    std::size_t idx = 0;
    for (std::size_t a = shape_.size(); a-- > 0;) idx = idx * static_cast<std::size_t>(shape_[a]) + multi[a];
    return idx;
}

std::array<int, 3> GridOpenSet::multi_index(std::size_t cell) const {
    std::array<int, 3> m{0, 0, 0};
    for (std::size_t a = 0; a < shape_.size(); ++a) {
        m[a] = static_cast<int>(cell % static_cast<std::size_t>(shape_[a]));
        cell /= static_cast<std::size_t>(shape_[a]);
    }
    return m;
}

Point GridOpenSet::cell_center(std::size_t cell) const {
    const auto m = multi_index(cell);
    Point p(origin_);
    for (std::size_t a = 0; a < p.size(); ++a) p[a] += (m[a] + 0.5) * spacing_;
    return p;
}

std::optional<std::size_t> GridOpenSet::locate(std::span<const double> p) const {
    if (p.size() != shape_.size()) throw DimensionError("GridOpenSet::locate: dimension mismatch");
    std::array<int, 3> m{0, 0, 0};
    for (std::size_t a = 0; a < p.size(); ++a) {
        const double t = std::floor((p[a] - origin_[a]) / spacing_);
        if (!(t >= 0.0) || t >= shape_[a]) return std::nullopt;
        m[a] = static_cast<int>(t);
    }
    return index(std::span<const int>(m.data(), shape_.size()));
}

double GridOpenSet::distance_to_cell_faces(std::span<const double> p) const {
    double best = spacing_;
    for (std::size_t a = 0; a < p.size(); ++a) {
        const double u = (p[a] - origin_[a]) / spacing_;
        const double f = u - std::floor(u);
        best = std::min(best, std::min(f, 1.0 - f) * spacing_);
    }
    return best;
}

void GridOpenSet::face_neighbours(std::size_t cell, std::vector<std::size_t>& out, bool& touches_frame) const {
    out.clear();
    touches_frame = false;
    const auto m = multi_index(cell);
    std::size_t stride = 1;
    for (std::size_t a = 0; a < shape_.size(); ++a) {
        if (m[a] > 0)
            out.push_back(cell - stride);
        else
            touches_frame = true;
        if (m[a] + 1 < shape_[a])
            out.push_back(cell + stride);
        else
            touches_frame = true;
        stride *= static_cast<std::size_t>(shape_[a]);
    }
}

const std::vector<std::uint8_t>& GridOpenSet::frontier_band() const { return frontier_; }

Point GridOpenSet::box_hi() const {
    Point p(origin_);
    for (std::size_t a = 0; a < p.size(); ++a) p[a] += shape_[a] * spacing_;
    return p;
}

double GridOpenSet::box_diameter() const {
    double s = 0.0;
    for (int e : shape_) s += (e * spacing_) * (e * spacing_);
    return std::sqrt(s);
}

CellSet::CellSet(const GridOpenSet& g) : mask_(g.cell_count(), 0) {}

CellSet::CellSet(const GridOpenSet& g, std::span<const std::size_t> cells) : mask_(g.cell_count(), 0) {
    for (std::size_t c : cells) insert(c);
}

void CellSet::insert(std::size_t cell) {
    if (cell >= mask_.size()) throw DomainError("CellSet: cell index out of range");
    mask_[cell] = 1;
}

void CellSet::erase(std::size_t cell) {
    if (cell < mask_.size()) mask_[cell] = 0;
}

std::size_t CellSet::count() const { return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), 1)); }

std::vector<std::size_t> CellSet::cells() const {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < mask_.size(); ++c)
        if (mask_[c]) out.push_back(c);
    return out;
}

bool CellSet::is_subset_of(const CellSet& other) const {
    for (std::size_t c = 0; c < mask_.size(); ++c)
        if (mask_[c] && !other.contains(c)) return false;
    return true;
}

namespace {

void require_same_grid(const GridOpenSet& g, const CellSet& S) {
    if (S.grid_size() != g.cell_count()) throw DimensionError("CellSet does not belong to this grid");
}

} // namespace

std::vector<CellSet> components(const GridOpenSet& g, const CellSet& cells) {
    require_same_grid(g, cells);
    std::vector<CellSet> out;
    std::vector<std::uint8_t> seen(g.cell_count(), 0);
    std::vector<std::size_t> nb;
    std::deque<std::size_t> queue;
    for (std::size_t start = 0; start < g.cell_count(); ++start) {
        if (!cells.contains(start) || seen[start]) continue;
        CellSet comp(g);
        seen[start] = 1;
        queue.push_back(start);
        while (!queue.empty()) {
            const std::size_t c = queue.front();
            queue.pop_front();
            comp.insert(c);
            bool frame = false;
            g.face_neighbours(c, nb, frame);
            for (std::size_t m : nb) {
                if (cells.contains(m) && !seen[m]) {
                    seen[m] = 1;
                    queue.push_back(m);
                }
            }
        }
        out.push_back(std::move(comp));
    }
    return out;
}

bool is_relatively_compact(const GridOpenSet& g, const CellSet& S) {
    require_same_grid(g, S);
    const auto& band = g.frontier_band();
    for (std::size_t c = 0; c < g.cell_count(); ++c)
        if (S.contains(c) && (band[c] || !g.inside(c))) return false;
    return true;
}

namespace {

// Cells of (inside \ F) reachable from the virtual infinity node.
std::vector<std::uint8_t> infinity_reach(const GridOpenSet& g, const CellSet& F) {
    const auto& band = g.frontier_band();
    std::vector<std::uint8_t> reach(g.cell_count(), 0);
    std::deque<std::size_t> queue;
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
        if (band[c] && !F.contains(c)) {
            reach[c] = 1;
            queue.push_back(c);
        }
    }
    std::vector<std::size_t> nb;
    while (!queue.empty()) {
        const std::size_t c = queue.front();
        queue.pop_front();
        bool frame = false;
        g.face_neighbours(c, nb, frame);
        for (std::size_t m : nb) {
            if (g.inside(m) && !F.contains(m) && !reach[m]) {
                reach[m] = 1;
                queue.push_back(m);
            }
        }
    }
    return reach;
}

} // namespace

CellSet inward_fill(const GridOpenSet& g, const CellSet& S) {
    require_same_grid(g, S);
    if (!is_relatively_compact(g, S))
        throw DomainError("inward_fill: S is not relatively compact in the open set");
    const auto reach = infinity_reach(g, S);
    CellSet out(g);
    for (std::size_t c = 0; c < g.cell_count(); ++c)
        if (g.inside(c) && !reach[c]) out.insert(c);
    return out;
}

InfinityComponents complement_components(const GridOpenSet& g, const CellSet& F) {
    require_same_grid(g, F);
    const auto reach = infinity_reach(g, F);
    CellSet rest(g);
    for (std::size_t c = 0; c < g.cell_count(); ++c)
        if (g.inside(c) && !F.contains(c) && !reach[c]) rest.insert(c);
    InfinityComponents out;
    // infinity is a point of the complement in the compactification, so its
    // component always exists
    out.with_infinity = 1;
    out.total = 1 + components(g, rest).size();
    return out;
}

CellSet rasterize_support(const GridOpenSet& g, std::span<const DiscreteMeasure> measures) {
    CellSet out(g);
    for (const auto& mu : measures) {
        if (mu.dim() != g.dim()) throw DimensionError("rasterize_support: measure dimension mismatch");
        for (std::size_t i = 0; i < mu.size(); ++i) {
            const auto cell = g.locate(mu.location(i));
            if (!cell || !g.inside(*cell)) throw DomainError("rasterize_support: atom outside the open set");
            out.insert(*cell);
        }
    }
    return out;
}

std::vector<std::size_t> cells_outside(const GridOpenSet& g, const CellSet& S) {
    require_same_grid(g, S);
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < g.cell_count(); ++c)
        if (!S.contains(c)) out.push_back(c);
    return out;
}

namespace {

std::string header_line(const GridOpenSet& g) {
    nlohmann::json h;
    h["origin"] = g.origin();
    h["spacing"] = g.spacing();
    return h.dump();
}

std::string mask_rows(const GridOpenSet& g, const std::function<bool(std::size_t)>& on) {
    std::string out;
    const auto& s = g.shape();
    const int nz = g.dim() == 3 ? s[2] : 1;
    for (int k = 0; k < nz; ++k) {
        if (k > 0) out += '\n';
        for (int j = 0; j < s[1]; ++j) {
            for (int i = 0; i < s[0]; ++i) {
                const int m[3] = {i, j, k};
                out += on(g.index(std::span<const int>(m, static_cast<std::size_t>(g.dim())))) ? '#' : '.';
            }
            out += '\n';
        }
    }
    return out;
}

struct ParsedMask {
    nlohmann::json header;
    std::vector<int> shape;
    std::vector<std::uint8_t> cells;
};

ParsedMask parse_mask(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("mask: missing header line");
    ParsedMask pm;
    try {
        pm.header = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("mask: bad header: ") + e.what());
    }
    std::vector<std::vector<std::string>> slices(1);
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            if (!slices.back().empty()) slices.emplace_back();
            continue;
        }
        slices.back().push_back(line);
    }
    if (slices.back().empty()) slices.pop_back();
    if (slices.empty()) throw ConfigError("mask: no rows");
    const std::size_t ny = slices.front().size();
    const std::size_t nx = slices.front().front().size();
    for (const auto& sl : slices) {
        if (sl.size() != ny) throw ConfigError("mask: slices of different height");
        for (const auto& row : sl) {
            if (row.size() != nx) throw ConfigError("mask: rows of different width");
            for (char ch : row)
                if (ch != '#' && ch != '.') throw ConfigError("mask: rows may only contain '#' and '.'");
        }
    }
    pm.shape = {static_cast<int>(nx), static_cast<int>(ny)};
    if (slices.size() > 1) pm.shape.push_back(static_cast<int>(slices.size()));
    pm.cells.reserve(nx * ny * slices.size());
    for (const auto& sl : slices)
        for (const auto& row : sl)
            for (char ch : row) pm.cells.push_back(ch == '#' ? 1 : 0);
    return pm;
}

} // namespace

GridOpenSet grid_from_mask(const std::string& text) {
    auto pm = parse_mask(text);
    if (!pm.header.contains("origin") || !pm.header.contains("spacing"))
        throw ConfigError("mask: header needs origin and spacing");
    Point origin;
    double spacing = 0.0;
    try {
        origin = pm.header.at("origin").get<Point>();
        spacing = pm.header.at("spacing").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("mask: bad header: ") + e.what());
    }
    if (pm.header.contains("dim") && pm.header["dim"].get<int>() == 3 && pm.shape.size() == 2) pm.shape.push_back(1);
    if (origin.size() != pm.shape.size()) throw ConfigError("mask: origin dimension does not match the rows");
    try {
        return GridOpenSet(std::move(origin), spacing, pm.shape, std::move(pm.cells));
    } catch (const DomainError& e) {
        throw ConfigError(std::string("mask: ") + e.what());
    }
}

std::string grid_to_mask(const GridOpenSet& g) {
    nlohmann::json h;
    std::string out = header_line(g);
    if (g.dim() == 3) {
        h = nlohmann::json::parse(out);
        h["dim"] = 3;
        out = h.dump();
    }
    return out + "\n" + mask_rows(g, [&](std::size_t c) { return g.inside(c); });
}

std::string cells_to_mask(const GridOpenSet& g, const CellSet& S) {
    require_same_grid(g, S);
    std::string out = header_line(g);
    if (g.dim() == 3) {
        auto h = nlohmann::json::parse(out);
        h["dim"] = 3;
        out = h.dump();
    }
    return out + "\n" + mask_rows(g, [&](std::size_t c) { return S.contains(c); });
}

CellSet cells_from_mask(const GridOpenSet& g, const std::string& text) {
    auto pm = parse_mask(text);
    if (g.dim() == 3 && pm.shape.size() == 2) pm.shape.push_back(1);
    if (pm.shape != g.shape()) throw ConfigError("mask: cell set shape does not match the grid");
    CellSet S(g);
    for (std::size_t c = 0; c < pm.cells.size(); ++c) {
        if (!pm.cells[c]) continue;
        if (!g.inside(c)) throw ConfigError("mask: cell set contains a cell outside the open set");
        S.insert(c);
    }
    return S;
}

} // namespace balayage
