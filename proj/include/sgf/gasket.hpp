#ifndef SGF_GASKET_HPP
#define SGF_GASKET_HPP

// Combinatorics and geometry of the Sierpinski gasket: addresses, level-m
// vertex/edge/cell structure, and the contracting maps F_i(x) = (x + q_i)/2
// with q0 = (0,0), q1 = (1,0), q2 = (1/2, sqrt(3)/2).

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sgf/errors.hpp"

namespace sgf {

// A cell address: word over {0,1,2}, empty word = the whole gasket.
using Address = std::string;

using VertexId = int;

inline bool valid_address(const Address& w) {
    for (char c : w)
        if (c < '0' || c > '2') return false;
    return true;
}

inline std::array<Address, 3> subcells(const Address& w) {
    return {w + "0", w + "1", w + "2"};
}

// Cells of a fixed level are indexed base-3, first letter most significant.
inline int address_to_index(const Address& w) {
    int idx = 0;
    for (char c : w) idx = idx * 3 + (c - '0');
    return idx;
}

inline Address index_to_address(int idx, int level) {
    Address w(static_cast<size_t>(level), '0');
    for (int k = level - 1; k >= 0; --k) {
        w[static_cast<size_t>(k)] = static_cast<char>('0' + idx % 3);
        idx /= 3;
    }
    return w;
}

inline std::int64_t pow3(int m) {
    std::int64_t r = 1;
    while (m-- > 0) r *= 3;
    return r;
}

// Level-m vertices live on the lattice point = (X, Y*sqrt(3)) / 2^(m+1);
// exact integer pairs make vertex dedup tolerance-free.
struct LatticePoint {
    std::int64_t x = 0;
    std::int64_t y = 0;
    bool operator==(const LatticePoint&) const = default;
};

struct LatticePointHash {
    size_t operator()(const LatticePoint& p) const {
        return std::hash<std::int64_t>{}(p.x * 0x100003 + p.y);
    }
};

// Base corners at scale 1 (denominator 2): q_i * 2.
inline constexpr std::array<LatticePoint, 3> kBaseCorners = {
    LatticePoint{0, 0}, LatticePoint{2, 0}, LatticePoint{1, 1}};

// F_{w_1}...F_{w_m}(q_i) at scale m+1, all integer.
inline LatticePoint cell_corner_lattice(const Address& w, int corner, int level) {
    const int m = level;
    const int depth = static_cast<int>(w.size());
    // F_w(q_i) * 2^(m+1) = (q_i*2) * 2^(m-|w|) + sum_k 2^(m-k) * (q_{w_k}*2)
    const LatticePoint base = kBaseCorners[static_cast<size_t>(corner)];
    const std::int64_t base_scale = std::int64_t{1} << (m - depth);
    LatticePoint p{base.x * base_scale, base.y * base_scale};
    for (int k = 1; k <= depth; ++k) {
        const LatticePoint q = kBaseCorners[static_cast<size_t>(w[static_cast<size_t>(k - 1)] - '0')];
        const std::int64_t s = std::int64_t{1} << (m - k);
        p.x += s * q.x;
        p.y += s * q.y;
    }
    return p;
}

class LevelGraph {
public:
    static LevelGraph build(int m, int max_level = kDefaultMaxLevel) {
        if (m < 0) throw domain_error("level must be nonnegative");
        if (m > max_level)
            throw resource_limit_error("level " + std::to_string(m) + " exceeds max level " +
                                       std::to_string(max_level));
        LevelGraph g;
        g.level_ = m;
        const std::int64_t ncells = pow3(m);
        g.cells_.resize(static_cast<size_t>(ncells));
        for (std::int64_t c = 0; c < ncells; ++c) {
            const Address w = index_to_address(static_cast<int>(c), m);
            std::array<VertexId, 3> corners{};
            for (int i = 0; i < 3; ++i)
                corners[static_cast<size_t>(i)] = g.intern(cell_corner_lattice(w, i, m));
            g.cells_[static_cast<size_t>(c)] = corners;
            for (int i = 0; i < 3; ++i)
                for (int j = i + 1; j < 3; ++j)
                    g.add_edge(corners[static_cast<size_t>(i)], corners[static_cast<size_t>(j)]);
        }
        return g;
    }

    int level() const { return level_; }
    int vertex_count() const { return static_cast<int>(coords_.size()); }
    const std::vector<LatticePoint>& lattice_points() const { return coords_; }
    const std::vector<std::pair<VertexId, VertexId>>& edges() const { return edges_; }
    size_t cell_count() const { return cells_.size(); }

    Eigen::Vector2d point(VertexId v) const {
        const double denom = static_cast<double>(std::int64_t{1} << (level_ + 1));
        const LatticePoint& p = coords_[static_cast<size_t>(v)];
        return {static_cast<double>(p.x) / denom,
                static_cast<double>(p.y) * kSqrt3 / denom};
    }

    // Corner i of K_w is F_w(q_i).
    std::array<VertexId, 3> cell_boundary(const Address& w) const {
        if (!valid_address(w) || static_cast<int>(w.size()) > level_)
            throw domain_error("unknown cell address '" + w + "' at level " +
                               std::to_string(level_));
        std::array<VertexId, 3> out{};
        for (int i = 0; i < 3; ++i) {
            auto it = index_.find(cell_corner_lattice(w, i, level_));
            if (it == index_.end()) throw domain_error("cell corner not found: " + w);
            out[static_cast<size_t>(i)] = it->second;
        }
        return out;
    }

    const std::array<VertexId, 3>& cell(int cell_index) const {
        return cells_[static_cast<size_t>(cell_index)];
    }

    bool adjacent(VertexId a, VertexId b) const {
        if (a > b) std::swap(a, b);
        return edge_set_.count(edge_key(a, b)) > 0;
    }

    // Look up a vertex given its lattice coordinates at a coarser scale.
    // Returns -1 if the rescaled point is not a vertex of this graph.
    VertexId find_vertex(LatticePoint p, int source_level) const {
        if (source_level > level_) return -1;
        const std::int64_t s = std::int64_t{1} << (level_ - source_level);
        auto it = index_.find(LatticePoint{p.x * s, p.y * s});
        return it == index_.end() ? -1 : it->second;
    }

    static constexpr double kSqrt3 = 1.7320508075688772;

private:
    VertexId intern(const LatticePoint& p) {
        auto [it, inserted] = index_.try_emplace(p, static_cast<VertexId>(coords_.size()));
        if (inserted) coords_.push_back(p);
        return it->second;
    }

    static std::int64_t edge_key(VertexId a, VertexId b) {
        return static_cast<std::int64_t>(a) << 32 | static_cast<std::uint32_t>(b);
    }

    void add_edge(VertexId a, VertexId b) {
        if (a > b) std::swap(a, b);
        if (edge_set_.insert(edge_key(a, b)).second) edges_.emplace_back(a, b);
    }

    int level_ = 0;
    std::vector<LatticePoint> coords_;
    std::unordered_map<LatticePoint, VertexId, LatticePointHash> index_;
    std::vector<std::pair<VertexId, VertexId>> edges_;
    std::unordered_set<std::int64_t> edge_set_;
    std::vector<std::array<VertexId, 3>> cells_;
};

}  // namespace sgf

#endif
