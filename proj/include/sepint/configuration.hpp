#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sepint/lattice.hpp"

// The chain state: occupied triangular-lattice sites with a two-valued color
// per site, plus connectivity, hole detection, the boundary walk, and edge
// statistics. Configuration is a value type; snapshots can be copied and
// shipped between threads freely.

namespace sepint {

enum class Color : std::uint8_t { C1 = 0, C2 = 1 };

inline const char* color_name(Color c) { return c == Color::C1 ? "C1" : "C2"; }

class Configuration {
  public:
    Configuration() = default;

    static Configuration from_pairs(const std::vector<std::pair<Site, Color>>& ps) {
        Configuration c;
        for (const auto& [s, col] : ps) c.add(s, col);
        return c;
    }

    int n() const { return static_cast<int>(occupied_.size()); }
    bool has(Site s) const { return occupied_.count(s) != 0; }
    Color color_at(Site s) const { return occupied_.at(s); }

    void add(Site s, Color c) {
        if (!occupied_.emplace(s, c).second)
            throw std::invalid_argument("Configuration::add: site already occupied");
    }
    void remove(Site s) {
        if (occupied_.erase(s) == 0)
            throw std::invalid_argument("Configuration::remove: site not occupied");
    }
    void move_particle(Site from, Site to) {
        const Color c = color_at(from);
        remove(from);
        add(to, c);
    }
    void swap_colors(Site a, Site b) {
        Color ca = color_at(a), cb = color_at(b);
        occupied_.at(a) = cb;
        occupied_.at(b) = ca;
    }

    // Ordered (lexicographic) view of the occupied map.
    const std::map<Site, Color>& sites() const { return occupied_; }

    std::vector<Site> site_list() const {
        std::vector<Site> out;
        out.reserve(occupied_.size());
        for (const auto& [s, c] : occupied_) out.push_back(s);
        return out;
    }

    int count_color(Color c) const {
        int k = 0;
        for (const auto& [s, col] : occupied_)
            if (col == c) ++k;
        return k;
    }

    friend bool operator==(const Configuration&, const Configuration&) = default;

  private:
    std::map<Site, Color> occupied_;
};

bool is_connected(const Configuration& c);

// Finite connected components of unoccupied sites, found by flood-filling the
// complement from outside the bounding box. Empty result <=> hole-free.
std::vector<std::vector<Site>> holes(const Configuration& c);

inline bool hole_free(const Configuration& c) { return holes(c).empty(); }

// The closed walk on configuration edges that encloses all particles and no
// unoccupied sites. An edge may appear twice (cut edges are traversed once in
// each direction); `length` counts with multiplicity, so length == p(sigma).
struct BoundaryWalk {
    std::vector<Edge> edges;  // in traversal order, repeats included
    int length = 0;           // == edges.size()
};

// Requires a connected, hole-free configuration; throws otherwise.
BoundaryWalk boundary_walk(const Configuration& c);

// Shortcut for boundary_walk(c).length that skips tracing the walk:
// p = 3n - 3 - e holds for every connected hole-free configuration.
int perimeter(const Configuration& c);

struct EdgeStats {
    int e = 0;  // total configuration edges
    int h = 0;  // heterogeneous edges
    int a = 0;  // homogeneous edges; e == a + h always
};

EdgeStats edge_stats(const Configuration& c);

// The boundary contour in the dual hexagonal lattice: all dual edges that
// separate a particle from an unoccupied site, ordered as one closed contour.
// Its length equals 2*p(sigma) + 6. Requires connected and hole-free.
struct HexContour {
    std::vector<DualEdge> edges;  // cyclic order
    int length() const { return static_cast<int>(edges.size()); }
};

HexContour hex_boundary_contour(const Configuration& c);

// Occupied sites that have at least one unoccupied neighbor. For a hole-free
// configuration these are exactly the particles visited by the boundary walk.
std::vector<Site> boundary_sites(const Configuration& c);

// Snapshot serialization: {"n":int,"particles":[{"q":..,"r":..,"color":..}]}
// with coordinates canonically translated and sorted by (q,r), so equal
// configurations produce byte-identical output.
std::string to_snapshot_json(const Configuration& c);
Configuration from_snapshot_json(const std::string& text);

}  // namespace sepint
