#include "sepint/configuration.hpp"

#include <algorithm>
#include <queue>
#include <unordered_set>

#include "json.hpp"

namespace sepint {

namespace {

struct Box {
    int qmin, qmax, rmin, rmax;
};

Box bounding_box(const Configuration& c) {
    Box b{0, 0, 0, 0};
    bool first = true;
    for (const auto& [s, col] : c.sites()) {
        if (first) {
            b = {s.q, s.q, s.r, s.r};
            first = false;
        } else {
            b.qmin = std::min(b.qmin, s.q);
            b.qmax = std::max(b.qmax, s.q);
            b.rmin = std::min(b.rmin, s.r);
            b.rmax = std::max(b.rmax, s.r);
        }
    }
    return b;
}

}  // namespace

bool is_connected(const Configuration& c) {
    if (c.n() == 0) throw std::invalid_argument("is_connected: empty configuration");
    std::unordered_set<Site, SiteHash> seen;
    std::queue<Site> q;
    q.push(c.sites().begin()->first);
    seen.insert(c.sites().begin()->first);
    while (!q.empty()) {
        const Site s = q.front();
        q.pop();
        for (const Site nb : neighbors(s)) {
            if (c.has(nb) && seen.insert(nb).second) q.push(nb);
        }
    }
    return static_cast<int>(seen.size()) == c.n();
}

std::vector<std::vector<Site>> holes(const Configuration& c) {
    if (c.n() == 0) return {};
    // Flood the unoccupied complement from a point outside the bounding box;
    // every unoccupied site in the (padded) box not reached is part of a hole.
    const Box b = bounding_box(c);
    const int qlo = b.qmin - 1, qhi = b.qmax + 1;
    const int rlo = b.rmin - 1, rhi = b.rmax + 1;
    auto inside = [&](Site s) { return s.q >= qlo && s.q <= qhi && s.r >= rlo && s.r <= rhi; };

    std::unordered_set<Site, SiteHash> outside;
    std::queue<Site> q;
    const Site start{qlo, rlo};
    q.push(start);
    outside.insert(start);
    while (!q.empty()) {
        const Site s = q.front();
        q.pop();
        for (const Site nb : neighbors(s)) {
            if (inside(nb) && !c.has(nb) && outside.insert(nb).second) q.push(nb);
        }
    }

    std::vector<std::vector<Site>> out;
    std::unordered_set<Site, SiteHash> assigned;
    for (int qq = b.qmin; qq <= b.qmax; ++qq) {
        for (int rr = b.rmin; rr <= b.rmax; ++rr) {
            const Site s{qq, rr};
            if (c.has(s) || outside.count(s) || assigned.count(s)) continue;
            std::vector<Site> comp;
            std::queue<Site> cq;
            cq.push(s);
            assigned.insert(s);
            while (!cq.empty()) {
                const Site u = cq.front();
                cq.pop();
                comp.push_back(u);
                for (const Site nb : neighbors(u)) {
                    if (!c.has(nb) && !outside.count(nb) && assigned.insert(nb).second)
                        cq.push(nb);
                }
            }
            std::sort(comp.begin(), comp.end());
            out.push_back(std::move(comp));
        }
    }
    return out;
}

BoundaryWalk boundary_walk(const Configuration& c) {
    if (!is_connected(c)) throw std::invalid_argument("boundary_walk: configuration disconnected");
    if (!hole_free(c)) throw std::invalid_argument("boundary_walk: configuration has holes");

    BoundaryWalk walk;
    if (c.n() == 1) return walk;  // single particle: empty walk, p = 0

    // Wall follower on the outer face. Start at the lexicographically smallest
    // occupied site; its west/southwest half-plane is unoccupied, so scanning
    // directions counterclockwise from W finds the first boundary edge with the
    // exterior kept on the left.
    const Site start = c.sites().begin()->first;
    int d0 = 3;  // W
    while (!c.has(start + kNeighborOffsets[d0 % 6])) ++d0;
    d0 %= 6;

    Site cur = start;
    const int dstart = d0;
    int din = d0;  // direction of the edge we are about to traverse
    do {
        const Site nxt = cur + kNeighborOffsets[din];
        walk.edges.push_back(Edge::between(cur, nxt));
        cur = nxt;
        // Arrived via direction din; continue from the reverse direction,
        // rotating counterclockwise until the next occupied neighbor.
        int d = (din + 3 + 1) % 6;
        while (!c.has(cur + kNeighborOffsets[d])) d = (d + 1) % 6;
        din = d;
    } while (!(cur == start && din == dstart));

    walk.length = static_cast<int>(walk.edges.size());
    return walk;
}

int perimeter(const Configuration& c) {
    if (!is_connected(c)) throw std::invalid_argument("perimeter: configuration disconnected");
    if (!hole_free(c)) throw std::invalid_argument("perimeter: configuration has holes");
    return 3 * c.n() - 3 - edge_stats(c).e;
}

EdgeStats edge_stats(const Configuration& c) {
    EdgeStats st;
    // Count each edge once via the three "positive" directions.
    static const std::array<Site, 3> kForward = {{{1, 0}, {0, 1}, {-1, 1}}};
    for (const auto& [s, col] : c.sites()) {
        for (const Site d : kForward) {
            const Site t = s + d;
            if (!c.has(t)) continue;
            ++st.e;
            if (c.color_at(t) == col)
                ++st.a;
            else
                ++st.h;
        }
    }
    return st;
}

std::vector<Site> boundary_sites(const Configuration& c) {
    std::vector<Site> out;
    for (const auto& [s, col] : c.sites()) {
        for (const Site nb : neighbors(s)) {
            if (!c.has(nb)) {
                out.push_back(s);
                break;
            }
        }
    }
    return out;
}

HexContour hex_boundary_contour(const Configuration& c) {
    if (!is_connected(c))
        throw std::invalid_argument("hex_boundary_contour: configuration disconnected");
    if (!hole_free(c)) throw std::invalid_argument("hex_boundary_contour: configuration has holes");

    // Boundary dual edges: duals of (occupied, unoccupied) adjacent pairs.
    // Every dual vertex has 0 or 2 of them, so they form one closed contour.
    std::map<DualVertex, std::vector<DualEdge>> incident;
    std::set<Edge> boundary_edges;
    for (const auto& [s, col] : c.sites()) {
        for (const Site nb : neighbors(s)) {
            if (c.has(nb)) continue;
            boundary_edges.insert(Edge::between(s, nb));
        }
    }
    for (const Edge& e : boundary_edges) {
        const DualEdge d = dual_of(e);
        for (const DualVertex& v : dual_endpoints(d)) incident[v].push_back(d);
    }

    HexContour contour;
    if (boundary_edges.empty()) return contour;

    const DualEdge first = dual_of(*boundary_edges.begin());
    DualVertex at = dual_endpoints(first)[0];
    DualEdge cur = first;
    do {
        contour.edges.push_back(cur);
        const auto ends = dual_endpoints(cur);
        const DualVertex nxt = (ends[0] == at) ? ends[1] : ends[0];
        const auto& inc = incident.at(nxt);
        if (inc.size() != 2)
            throw std::logic_error("hex_boundary_contour: dual vertex degree != 2");
        cur = (inc[0] == cur) ? inc[1] : inc[0];
        at = nxt;
    } while (!(cur == first));

    if (contour.edges.size() != boundary_edges.size())
        throw std::logic_error("hex_boundary_contour: contour does not cover all boundary edges");
    return contour;
}

std::string to_snapshot_json(const Configuration& c) {
    nlohmann::json j;
    j["n"] = c.n();
    auto parts = nlohmann::json::array();
    if (c.n() > 0) {
        const Site base = c.sites().begin()->first;
        for (const auto& [s, col] : c.sites()) {
            const Site t = s - base;
            parts.push_back({{"q", t.q}, {"r", t.r}, {"color", color_name(col)}});
        }
    }
    j["particles"] = std::move(parts);
    return j.dump();
}

Configuration from_snapshot_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    Configuration c;
    for (const auto& p : j.at("particles")) {
        const std::string col = p.at("color").get<std::string>();
        if (col != "C1" && col != "C2")
            throw std::invalid_argument("from_snapshot_json: bad color " + col);
        c.add(Site{p.at("q").get<int>(), p.at("r").get<int>()},
              col == "C1" ? Color::C1 : Color::C2);
    }
    if (j.contains("n") && j.at("n").get<int>() != c.n())
        throw std::invalid_argument("from_snapshot_json: n does not match particle count");
    return c;
}

}  // namespace sepint
