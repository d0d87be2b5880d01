#include "sepint/lattice.hpp"

#include <algorithm>

namespace sepint {

DualVertex DualVertex::of_face(Site x, Site y, Site z) {
    if (!adjacent(x, y) || !adjacent(y, z) || !adjacent(x, z))
        throw std::invalid_argument("DualVertex::of_face: corners do not form a triangular face");
    std::array<Site, 3> c = {x, y, z};
    std::sort(c.begin(), c.end());
    return DualVertex{c};
}

std::array<Site, 2> flanking_corners(Edge e) {
    const Site d = e.b - e.a;
    return {e.a + rotate60(d), e.a + rotate_minus60(d)};
}

std::array<DualVertex, 2> dual_endpoints(DualEdge d) {
    const Edge e = d.primal;
    const auto c = flanking_corners(e);
    return {DualVertex::of_face(e.a, e.b, c[0]), DualVertex::of_face(e.a, e.b, c[1])};
}

std::array<DualEdge, 3> incident_dual_edges(const DualVertex& v) {
    const auto& c = v.corners;
    return {dual_of(Edge::between(c[0], c[1])), dual_of(Edge::between(c[0], c[2])),
            dual_of(Edge::between(c[1], c[2]))};
}

std::array<DualVertex, 3> dual_neighbors(const DualVertex& v) {
    std::array<DualVertex, 3> out;
    const auto edges = incident_dual_edges(v);
    for (std::size_t i = 0; i < 3; ++i) {
        const auto ends = dual_endpoints(edges[i]);
        out[i] = (ends[0] == v) ? ends[1] : ends[0];
    }
    return out;
}

std::vector<Site> canonical_translate(std::vector<Site> sites) {
    if (sites.empty()) throw std::invalid_argument("canonical_translate: empty site set");
    const Site m = *std::min_element(sites.begin(), sites.end());
    for (Site& s : sites) s = s - m;
    std::sort(sites.begin(), sites.end());
    return sites;
}

std::set<Site> canonical_translate(const std::set<Site>& sites) {
    if (sites.empty()) throw std::invalid_argument("canonical_translate: empty site set");
    const Site m = *sites.begin();  // std::set is ordered, min is front
    std::set<Site> out;
    for (const Site& s : sites) out.insert(s - m);
    return out;
}

std::vector<Site> hexagonal_spiral_sites(int n) {
    if (n < 1) throw std::invalid_argument("hexagonal_spiral_sites: n must be >= 1");
    std::vector<Site> out;
    out.reserve(n);
    out.push_back({0, 0});
    for (int layer = 1; static_cast<int>(out.size()) < n; ++layer) {
        // Cyclic walk of the layer starting at corner (layer, 0) and stepping
        // toward (layer, -1); sites are added starting just after that corner
        // and the corner itself is placed last, completing the layer.
        std::vector<Site> walk;
        walk.reserve(6 * layer);
        Site pos{layer, 0};
        Site dir{0, -1};  // first walk step: (layer,0) -> (layer,-1)
        for (int side = 0; side < 6; ++side) {
            for (int i = 0; i < layer; ++i) {
                walk.push_back(pos);
                pos = pos + dir;
            }
            dir = rotate_minus60(dir);
        }
        for (std::size_t i = 1; i <= walk.size() && static_cast<int>(out.size()) < n; ++i)
            out.push_back(walk[i % walk.size()]);
    }
    return out;
}

}  // namespace sepint
