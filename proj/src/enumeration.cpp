#include "sepint/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <queue>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace sepint {

namespace {

const Edge kFixedEdge = Edge::between({0, 0}, {1, 0});

// ---- patch utilities for the minimal-cut predicate ----

std::vector<Site> patch_sites(int radius) {
    std::vector<Site> out;
    for (int q = -radius; q <= radius; ++q)
        for (int r = -radius; r <= radius; ++r)
            if (site_distance({0, 0}, {q, r}) <= radius) out.push_back({q, r});
    return out;
}

// Components of the patch with an edge set removed.
int patch_components(const std::vector<Site>& patch, const std::set<Edge>& removed) {
    std::unordered_set<Site, SiteHash> in_patch(patch.begin(), patch.end());
    std::unordered_set<Site, SiteHash> seen;
    int comps = 0;
    for (const Site s : patch) {
        if (seen.count(s)) continue;
        ++comps;
        std::queue<Site> bfs;
        bfs.push(s);
        seen.insert(s);
        while (!bfs.empty()) {
            const Site u = bfs.front();
            bfs.pop();
            for (const Site nb : neighbors(u)) {
                if (!in_patch.count(nb) || seen.count(nb)) continue;
                Site a = u, b = nb;
                if (b < a) std::swap(a, b);
                if (removed.count(Edge{a, b})) continue;
                seen.insert(nb);
                bfs.push(nb);
            }
        }
    }
    return comps;
}

bool is_minimal_cut(const std::vector<DualEdge>& polygon, int radius) {
    const std::vector<Site> patch = patch_sites(radius);
    std::set<Edge> cut;
    for (const DualEdge& de : polygon) cut.insert(primal_of(de));
    if (patch_components(patch, cut) != 2) return false;
    for (const Edge& e : cut) {
        std::set<Edge> sub = cut;
        sub.erase(e);
        if (patch_components(patch, sub) != 1) return false;
    }
    return true;
}

Edge shared_primal_edge(const DualVertex& a, const DualVertex& b) {
    std::vector<Site> shared;
    for (const Site x : a.corners)
        for (const Site y : b.corners)
            if (x == y) shared.push_back(x);
    if (shared.size() != 2) throw std::logic_error("shared_primal_edge: faces not adjacent");
    return Edge::between(shared[0], shared[1]);
}

}  // namespace

long long count_loops_through_edge(int k) {
    if (k < 1) throw std::invalid_argument("count_loops_through_edge: k must be >= 1");
    if (k > 16) throw std::invalid_argument("count_loops_through_edge: k > 16 exceeds the cap");
    if (k % 2 != 0) return 0;  // dual hexagonal lattice is bipartite
    if (k < 6) return 0;       // girth of the hexagonal lattice

    const auto ends = dual_endpoints(dual_of(kFixedEdge));
    const DualVertex target = ends[0];
    const DualVertex first = ends[1];

    long long count = 0;
    std::set<DualVertex> visited{target, first};
    std::vector<DualEdge> path{dual_of(kFixedEdge)};

    // Self-avoiding polygons through the fixed dual edge, traced in the one
    // direction that starts target -> first; each polygon is found once.
    std::function<void(const DualVertex&)> dfs = [&](const DualVertex& cur) {
        for (const DualVertex& nb : dual_neighbors(cur)) {
            const DualEdge step = dual_of(shared_primal_edge(cur, nb));
            if (nb == target) {
                if (static_cast<int>(path.size()) + 1 == k) {
                    path.push_back(step);
                    if (is_minimal_cut(path, k + 2)) ++count;
                    path.pop_back();
                }
                continue;
            }
            if (static_cast<int>(path.size()) + 1 >= k) continue;
            if (visited.count(nb)) continue;
            visited.insert(nb);
            path.push_back(step);
            dfs(nb);
            path.pop_back();
            visited.erase(nb);
        }
    };
    dfs(first);
    return count;
}

long long count_even_connected_through_edge(int k) {
    if (k < 1) throw std::invalid_argument("count_even_connected_through_edge: k must be >= 1");
    if (k > 12) throw std::invalid_argument("count_even_connected_through_edge: k > 12 cap");
    if (k < 3) return 0;

    const Site origin{0, 0};
    std::set<std::vector<Edge>> found;
    std::set<Edge> trail{kFixedEdge};

    // Closed trails (edge-simple walks) of length k starting along the fixed
    // edge; a closed trail has even degree everywhere and every connected
    // even set containing the fixed edge has an Eulerian circuit through it,
    // so deduplicating trail edge sets enumerates the sets exactly.
    std::function<void(Site)> dfs = [&](Site cur) {
        if (static_cast<int>(trail.size()) == k) {
            if (cur == origin) found.insert(std::vector<Edge>(trail.begin(), trail.end()));
            return;
        }
        // Prune: must be able to get home with the remaining edges.
        if (site_distance(cur, origin) > k - static_cast<int>(trail.size())) return;
        for (const Site nb : neighbors(cur)) {
            Site a = cur, b = nb;
            if (b < a) std::swap(a, b);
            const Edge e{a, b};
            if (trail.count(e)) continue;
            trail.insert(e);
            dfs(nb);
            trail.erase(e);
        }
    };
    dfs({1, 0});

    // Independent re-verification of every deduplicated set.
    for (const auto& edges : found) {
        std::map<Site, int> degree;
        for (const Edge& e : edges) {
            degree[e.a]++;
            degree[e.b]++;
        }
        for (const auto& [v, d] : degree)
            if (d % 2 != 0) throw std::logic_error("even-set oracle: odd degree");
        // connectivity over edge-induced vertices
        std::set<Site> verts;
        for (const Edge& e : edges) {
            verts.insert(e.a);
            verts.insert(e.b);
        }
        std::set<Site> seen;
        std::queue<Site> bfs;
        bfs.push(*verts.begin());
        seen.insert(*verts.begin());
        while (!bfs.empty()) {
            const Site u = bfs.front();
            bfs.pop();
            for (const Edge& e : edges) {
                Site other;
                if (e.a == u)
                    other = e.b;
                else if (e.b == u)
                    other = e.a;
                else
                    continue;
                if (seen.insert(other).second) bfs.push(other);
            }
        }
        if (seen.size() != verts.size()) throw std::logic_error("even-set oracle: disconnected");
    }
    return static_cast<long long>(found.size());
}

namespace {

// Redelmeier-style enumeration of fixed animals (site shapes up to
// translation) on the triangular lattice, visiting every animal of size <= n
// exactly once. Classifies hole-free animals by perimeter p = 3m - 3 - e.
struct ShapeEnumerator {
    int maxn;
    std::map<std::pair<int, int>, long long> counts;  // (m, p) -> count
    std::unordered_set<Site, SiteHash> occupied;
    std::unordered_set<Site, SiteHash> reached;
    int edge_count = 0;

    // Cells usable relative to the canonical first cell: (r,q)-lex greater
    // than the origin, so every translation class is generated exactly once.
    static bool allowed(Site s) { return s.r > 0 || (s.r == 0 && s.q >= 0); }

    void visit() {
        const int m = static_cast<int>(occupied.size());
        Configuration c;
        for (const Site s : occupied) c.add(s, Color::C1);
        if (!holes(c).empty()) return;
        counts[{m, 3 * m - 3 - edge_count}]++;
    }

    void rec(std::vector<Site> untried) {
        while (!untried.empty()) {
            const Site cell = untried.back();
            untried.pop_back();

            int de = 0;
            for (const Site nb : neighbors(cell)) de += occupied.count(nb) ? 1 : 0;
            occupied.insert(cell);
            edge_count += de;
            visit();

            if (static_cast<int>(occupied.size()) < maxn) {
                std::vector<Site> added;
                for (const Site nb : neighbors(cell)) {
                    if (!allowed(nb) || occupied.count(nb) || reached.count(nb)) continue;
                    reached.insert(nb);
                    added.push_back(nb);
                }
                std::vector<Site> next = untried;
                next.insert(next.end(), added.begin(), added.end());
                rec(std::move(next));
                for (const Site s : added) reached.erase(s);
            }

            occupied.erase(cell);
            edge_count -= de;
        }
    }

    void run(int n) {
        maxn = n;
        reached.insert({0, 0});
        rec({{0, 0}});
    }
};

}  // namespace

std::map<int, long long> shape_counts_by_perimeter(int n) {
    if (n < 1 || n > 10)
        throw std::invalid_argument("shape_counts_by_perimeter: n must be in [1, 10]");
    static std::mutex mu;
    static std::map<int, std::map<int, long long>> cache;  // n -> (p -> count)
    static int cached_to = 0;
    const std::scoped_lock lock(mu);
    if (n > cached_to) {
        ShapeEnumerator en;
        en.run(n);
        cache.clear();
        for (const auto& [key, cnt] : en.counts) cache[key.first][key.second] += cnt;
        cached_to = n;
    }
    return cache[n];
}

long long count_configs_with_perimeter(int n, int k) {
    const auto by_p = shape_counts_by_perimeter(n);
    const auto it = by_p.find(k);
    return it == by_p.end() ? 0 : it->second;
}

namespace {

// Canonical key for a colored configuration up to translation.
std::vector<std::pair<Site, Color>> canonical_key(const Configuration& c) {
    std::vector<std::pair<Site, Color>> out;
    const Site base = c.sites().begin()->first;
    for (const auto& [s, col] : c.sites()) out.push_back({s - base, col});
    return out;  // map iteration is sorted; translation preserves order
}

mpq_class qpow(const mpq_class& x, int k) {
    if (k < 0) return 1 / qpow(x, -k);
    mpq_class r = 1;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

// From-definition evaluation of the locality properties, independent of the
// lookup tables in the dynamics module.
std::vector<Site> common_neighbors_occupied(const Configuration& c, Site l, Site lp) {
    std::vector<Site> s;
    for (const Site t : neighbors(l))
        if (adjacent(t, lp) && c.has(t)) s.push_back(t);
    return s;
}

std::vector<Site> joint_neighborhood(const Configuration& c, Site l, Site lp) {
    std::set<Site> n;
    for (const Site t : neighbors(l))
        if (c.has(t) && !(t == lp)) n.insert(t);
    for (const Site t : neighbors(lp))
        if (c.has(t) && !(t == l)) n.insert(t);
    return std::vector<Site>(n.begin(), n.end());
}

// Particles of `within` reachable from seed by adjacency paths inside `within`.
std::set<Site> reachable_within(const std::vector<Site>& within, Site seed) {
    std::set<Site> pool(within.begin(), within.end());
    std::set<Site> seen{seed};
    std::queue<Site> bfs;
    bfs.push(seed);
    while (!bfs.empty()) {
        const Site u = bfs.front();
        bfs.pop();
        for (const Site nb : neighbors(u))
            if (pool.count(nb) && seen.insert(nb).second) bfs.push(nb);
    }
    return seen;
}

bool definition_property1(const Configuration& c, Site l, Site lp) {
    const auto s = common_neighbors_occupied(c, l, lp);
    if (s.empty() || s.size() > 2) return false;
    const auto joint = joint_neighborhood(c, l, lp);
    for (const Site p : joint) {
        const auto reach = reachable_within(joint, p);
        int hit = 0;
        for (const Site sp : s) hit += reach.count(sp) ? 1 : 0;
        if (hit != 1) return false;
    }
    return true;
}

bool definition_property2(const Configuration& c, Site l, Site lp) {
    if (!common_neighbors_occupied(c, l, lp).empty()) return false;
    auto side = [&](Site center, Site other) {
        std::vector<Site> part;
        for (const Site t : neighbors(center))
            if (c.has(t) && !(t == other)) part.push_back(t);
        if (part.empty()) return false;
        return reachable_within(part, part.front()).size() == part.size();
    };
    return side(l, lp) && side(lp, l);
}

// Acceptance arithmetic of one proposal, in exact rationals. This is an
// independent implementation of the algorithm's filter, deliberately not
// shared with the dynamics module.
struct RationalProposal {
    bool moves = false;      // state changes if accepted
    Configuration target;
    mpq_class threshold = 0;
};

RationalProposal rational_proposal(const Configuration& c, Site l, int dir,
                                   const mpq_class& lambda, const mpq_class& gamma) {
    RationalProposal out;
    const Site lp = l + kNeighborOffsets[dir];
    const Color ci = c.color_at(l);

    if (c.has(lp)) {
        const Color cj = c.color_at(lp);
        int ni_lp = 0, nj_lp = 0, ni_l = 0, nj_l = 0;
        for (const Site t : neighbors(lp)) {
            if (!c.has(t)) continue;
            if (c.color_at(t) == ci && !(t == l)) ++ni_lp;
            if (c.color_at(t) == cj) ++nj_lp;
        }
        for (const Site t : neighbors(l)) {
            if (!c.has(t)) continue;
            if (c.color_at(t) == ci) ++ni_l;
            if (c.color_at(t) == cj && !(t == lp)) ++nj_l;
        }
        const int expo = ni_lp - ni_l + nj_l - nj_lp;
        mpq_class t = qpow(gamma, expo);
        if (t > 1) t = 1;
        out.threshold = t;
        out.moves = ci != cj;
        out.target = c;
        if (out.moves) out.target.swap_colors(l, lp);
        return out;
    }

    int e = 0, ei = 0, ep = 0, eip = 0;
    for (const Site t : neighbors(l)) {
        if (!c.has(t)) continue;
        ++e;
        if (c.color_at(t) == ci) ++ei;
    }
    for (const Site t : neighbors(lp)) {
        if (t == l || !c.has(t)) continue;
        ++ep;
        if (c.color_at(t) == ci) ++eip;
    }
    const bool gate =
        (e != 5) && (definition_property1(c, l, lp) || definition_property2(c, l, lp));
    if (!gate) {
        out.threshold = 0;
        return out;
    }
    mpq_class t = qpow(lambda, ep - e) * qpow(gamma, eip - ei);
    if (t > 1) t = 1;
    out.threshold = t;
    out.moves = true;
    out.target = c;
    out.target.move_particle(l, lp);
    return out;
}

}  // namespace

TinyChainModel enumerate_tiny_chain(int n1, int n2, const mpq_class& lambda,
                                    const mpq_class& gamma) {
    const int n = n1 + n2;
    if (n < 1 || n > 5) throw std::invalid_argument("enumerate_tiny_chain: need 1 <= n1+n2 <= 5");
    if (lambda <= 0 || gamma <= 0)
        throw std::invalid_argument("enumerate_tiny_chain: lambda, gamma must be > 0");

    // All connected shapes of n sites up to translation, by BFS growth.
    std::set<std::vector<Site>> shapes{{Site{0, 0}}};
    for (int m = 2; m <= n; ++m) {
        std::set<std::vector<Site>> next;
        for (const auto& shape : shapes) {
            std::set<Site> sset(shape.begin(), shape.end());
            for (const Site s : shape) {
                for (const Site nb : neighbors(s)) {
                    if (sset.count(nb)) continue;
                    std::set<Site> grown = sset;
                    grown.insert(nb);
                    const auto canon = canonical_translate(grown);
                    next.insert(std::vector<Site>(canon.begin(), canon.end()));
                }
            }
        }
        shapes = std::move(next);
    }

    // All colorings with exactly n1 sites of color C1, up to translation.
    TinyChainModel model;
    std::map<std::vector<std::pair<Site, Color>>, int> state_index;
    for (const auto& shape : shapes) {
        std::vector<int> pick(n, 0);
        std::fill(pick.begin(), pick.begin() + n1, 1);
        std::sort(pick.begin(), pick.end());
        do {
            Configuration c;
            for (int i = 0; i < n; ++i)
                c.add(shape[i], pick[i] ? Color::C1 : Color::C2);
            const auto key = canonical_key(c);
            if (!state_index.count(key)) {
                state_index[key] = static_cast<int>(model.states.size());
                model.states.push_back(c);
            }
        } while (std::next_permutation(pick.begin(), pick.end()));
    }

    const int m = static_cast<int>(model.states.size());
    model.kernel.assign(m, std::vector<mpq_class>(m, 0));
    const mpq_class step_prob(1, 6 * n);

    for (int i = 0; i < m; ++i) {
        const Configuration& c = model.states[i];
        for (const auto& [site, col] : c.sites()) {
            for (int dir = 0; dir < 6; ++dir) {
                const RationalProposal rp = rational_proposal(c, site, dir, lambda, gamma);
                if (rp.moves && rp.threshold > 0) {
                    if (!is_connected(rp.target))
                        throw std::logic_error("tiny chain: accepted move disconnected the state");
                    const int j = state_index.at(canonical_key(rp.target));
                    model.kernel[i][j] += step_prob * rp.threshold;
                    model.kernel[i][i] += step_prob * (1 - rp.threshold);
                } else {
                    // rejected, or a swap of equal colors (state unchanged)
                    model.kernel[i][i] += step_prob;
                }
            }
        }
    }

    // Closed-form stationary vector via p = 3n - 3 - e and h.
    mpq_class z = 0;
    std::vector<mpq_class> weights(m);
    for (int i = 0; i < m; ++i) {
        const EdgeStats st = edge_stats(model.states[i]);
        const int p = 3 * n - 3 - st.e;
        weights[i] = qpow(lambda * gamma, -p) * qpow(gamma, -st.h);
        z += weights[i];
    }
    model.pi_closed_form.resize(m);
    for (int i = 0; i < m; ++i) model.pi_closed_form[i] = weights[i] / z;
    return model;
}

mpq_class TinyChainModel::detailed_balance_gap() const {
    mpq_class worst = 0;
    const int m = static_cast<int>(states.size());
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            mpq_class d = pi_closed_form[i] * kernel[i][j] - pi_closed_form[j] * kernel[j][i];
            if (d < 0) d = -d;
            if (d > worst) worst = d;
        }
    }
    return worst;
}

mpq_class TinyChainModel::row_sum_gap() const {
    mpq_class worst = 0;
    for (const auto& row : kernel) {
        mpq_class s = 0;
        for (const auto& v : row) s += v;
        mpq_class d = s - 1;
        if (d < 0) d = -d;
        if (d > worst) worst = d;
    }
    return worst;
}

mpq_class TinyChainModel::stationarity_gap() const {
    const int m = static_cast<int>(states.size());
    mpq_class worst = 0;
    for (int j = 0; j < m; ++j) {
        mpq_class s = 0;
        for (int i = 0; i < m; ++i) s += pi_closed_form[i] * kernel[i][j];
        mpq_class d = s - pi_closed_form[j];
        if (d < 0) d = -d;
        if (d > worst) worst = d;
    }
    return worst;
}

bool TinyChainModel::irreducible() const {
    const int m = static_cast<int>(states.size());
    auto reach_all = [&](bool forward) {
        std::vector<bool> seen(m, false);
        std::queue<int> bfs;
        bfs.push(0);
        seen[0] = true;
        int cnt = 1;
        while (!bfs.empty()) {
            const int u = bfs.front();
            bfs.pop();
            for (int v = 0; v < m; ++v) {
                const mpq_class& x = forward ? kernel[u][v] : kernel[v][u];
                if (x > 0 && !seen[v]) {
                    seen[v] = true;
                    ++cnt;
                    bfs.push(v);
                }
            }
        }
        return cnt == m;
    };
    return reach_all(true) && reach_all(false);
}

std::vector<double> TinyChainModel::stationary_numeric() const {
    // Solve pi (K - I) = 0 with sum(pi) = 1 directly: build A = K^T - I with
    // the last row replaced by the normalization, then eliminate with partial
    // pivoting in long double.
    const int m = static_cast<int>(states.size());
    std::vector<long double> a(static_cast<std::size_t>(m) * (m + 1), 0.0L);
    auto A = [&](int i, int j) -> long double& { return a[static_cast<std::size_t>(i) * (m + 1) + j]; };
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) A(i, j) = static_cast<long double>(kernel[j][i].get_d());
    for (int i = 0; i < m; ++i) A(i, i) -= 1.0L;
    for (int j = 0; j < m; ++j) A(m - 1, j) = 1.0L;
    A(m - 1, m) = 1.0L;

    for (int col = 0; col < m; ++col) {
        int piv = col;
        for (int r = col + 1; r < m; ++r)
            if (std::abs(A(r, col)) > std::abs(A(piv, col))) piv = r;
        if (piv != col)
            for (int j = col; j <= m; ++j) std::swap(A(piv, j), A(col, j));
        for (int r = col + 1; r < m; ++r) {
            const long double f = A(r, col) / A(col, col);
            if (f == 0.0L) continue;
            for (int j = col; j <= m; ++j) A(r, j) -= f * A(col, j);
        }
    }
    std::vector<long double> x(m, 0.0L);
    for (int i = m - 1; i >= 0; --i) {
        long double s = A(i, m);
        for (int j = i + 1; j < m; ++j) s -= A(i, j) * x[j];
        x[i] = s / A(i, i);
    }
    std::vector<double> out(m);
    for (int j = 0; j < m; ++j) out[j] = static_cast<double>(x[j]);
    return out;
}

}  // namespace sepint
