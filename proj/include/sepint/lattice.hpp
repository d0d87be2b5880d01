#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <set>
#include <stdexcept>
#include <vector>

// Triangular-lattice geometry in axial (q,r) integer coordinates, plus the
// bijection to the dual hexagonal lattice. Everything here is an immutable
// value type; there is no floating point in any of the topology.

namespace sepint {

struct Site {
    int q = 0;
    int r = 0;

    friend auto operator<=>(const Site&, const Site&) = default;
    friend Site operator+(Site a, Site b) { return {a.q + b.q, a.r + b.r}; }
    friend Site operator-(Site a, Site b) { return {a.q - b.q, a.r - b.r}; }
};

// The six neighbor offsets, starting east and proceeding counterclockwise.
// Index k is the direction "k"; opposite(k) = (k+3) % 6.
inline constexpr std::array<Site, 6> kNeighborOffsets = {{
    {1, 0},    // E
    {0, 1},    // NE
    {-1, 1},   // NW
    {-1, 0},   // W
    {0, -1},   // SW
    {1, -1},   // SE
}};

inline std::array<Site, 6> neighbors(Site s) {
    std::array<Site, 6> out;
    for (std::size_t k = 0; k < 6; ++k) out[k] = s + kNeighborOffsets[k];
    return out;
}

inline bool adjacent(Site a, Site b) {
    const Site d = b - a;
    for (const Site& o : kNeighborOffsets)
        if (d == o) return true;
    return false;
}

// Rotation by +60 degrees about the origin: (q,r) -> (-r, q+r).
inline Site rotate60(Site s) { return {-s.r, s.q + s.r}; }
// Rotation by -60 degrees: (q,r) -> (q+r, -q).
inline Site rotate_minus60(Site s) { return {s.q + s.r, -s.q}; }

// Axial hex distance.
inline int site_distance(Site a, Site b) {
    const Site d = b - a;
    return (std::abs(d.q) + std::abs(d.r) + std::abs(d.q + d.r)) / 2;
}

// An edge of the triangular lattice; endpoints stored in lexicographic order
// so equality and ordering are well-defined.
struct Edge {
    Site a;
    Site b;

    static Edge between(Site u, Site v) {
        if (!adjacent(u, v)) throw std::invalid_argument("Edge::between: sites not adjacent");
        if (v < u) std::swap(u, v);
        return Edge{u, v};
    }

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

// A vertex of the dual hexagonal lattice, i.e. a triangular face of the
// primal lattice, identified by the sorted triple of its corner sites.
struct DualVertex {
    std::array<Site, 3> corners;  // sorted ascending

    static DualVertex of_face(Site x, Site y, Site z);

    friend auto operator<=>(const DualVertex&, const DualVertex&) = default;
};

// An edge of the dual hexagonal lattice, identified by the unique primal
// edge it crosses (the primal<->dual edge map is a bijection).
struct DualEdge {
    Edge primal;

    friend auto operator<=>(const DualEdge&, const DualEdge&) = default;
};

inline DualEdge dual_of(Edge e) { return DualEdge{e}; }
inline Edge primal_of(DualEdge d) { return d.primal; }

// The two common neighbors of the endpoints of an edge; these are the third
// corners of the two triangular faces flanking it.
std::array<Site, 2> flanking_corners(Edge e);

// The two dual vertices (triangular faces) joined by a dual edge.
std::array<DualVertex, 2> dual_endpoints(DualEdge d);

// The three dual edges incident on a dual vertex (dual lattice is 3-regular):
// the duals of the face's three primal edges.
std::array<DualEdge, 3> incident_dual_edges(const DualVertex& v);

// The three dual vertices adjacent to a dual vertex.
std::array<DualVertex, 3> dual_neighbors(const DualVertex& v);

// Translates a nonempty site set so its lexicographically smallest site
// lands on (0,0). Idempotent and translation-invariant.
std::vector<Site> canonical_translate(std::vector<Site> sites);
std::set<Site> canonical_translate(const std::set<Site>& sites);

// The first n sites of the hexagonal spiral about the origin: the full
// hexagon of side l (3l^2+3l+1 sites, distance <= l), then layer l+1 filled
// in ring order starting just after a corner. Prefixes of this order realize
// the minimum-perimeter construction.
std::vector<Site> hexagonal_spiral_sites(int n);

struct SiteHash {
    std::size_t operator()(const Site& s) const {
        const std::uint64_t x =
            (static_cast<std::uint64_t>(static_cast<std::uint32_t>(s.q)) << 32) |
            static_cast<std::uint64_t>(static_cast<std::uint32_t>(s.r));
        // splitmix64 finalizer
        std::uint64_t z = x + 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return static_cast<std::size_t>(z ^ (z >> 31));
    }
};

}  // namespace sepint
