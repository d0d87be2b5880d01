#include "sepint/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sepint {

namespace {

// Integer powers keep acceptance thresholds bit-identical across platforms;
// exponents here are always in [-6, 6].
double ipow(double x, int k) {
    if (k < 0) return 1.0 / ipow(x, -k);
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

int direction_of(Site from, Site to) {
    const Site d = to - from;
    for (int k = 0; k < 6; ++k)
        if (kNeighborOffsets[k] == d) return k;
    return -1;
}

// The joint neighborhood of an adjacent pair (l, l') is a chordless 8-cycle
// of sites around them. With the ring indexed so that consecutive indices are
// adjacent, the two sites adjacent to both l and l' sit at indices 2 and 6,
// the five neighbors of l are {6,7,0,1,2} and the five of l' are {2,3,4,5,6}.
// Both locality properties are then functions of the 8-bit occupancy mask.
struct PropertyTables {
    std::array<std::array<Site, 8>, 6> ring;  // ring[direction][index]
    std::array<bool, 256> p1{};
    std::array<bool, 256> p2{};

    static constexpr int kPoleA = 2;
    static constexpr int kPoleB = 6;

    PropertyTables() {
        const std::array<Site, 8> base = {{{-1, 0},
                                           {-1, 1},
                                           {0, 1},
                                           {1, 1},
                                           {2, 0},
                                           {2, -1},
                                           {1, -1},
                                           {0, -1}}};
        for (int d = 0; d < 6; ++d) {
            for (int i = 0; i < 8; ++i) {
                Site s = base[i];
                for (int k = 0; k < d; ++k) s = rotate60(s);
                ring[d][i] = s;
            }
        }
        for (int mask = 0; mask < 256; ++mask) {
            p1[mask] = compute_p1(mask);
            p2[mask] = compute_p2(mask);
        }
    }

    static bool occ_bit(int mask, int i) { return (mask >> i) & 1; }

    // Property 1: |S| in {1,2} and every occupied ring site reaches exactly
    // one occupied pole through occupied ring sites. Equivalently, every
    // maximal occupied run of the 8-cycle contains exactly one occupied pole.
    static bool compute_p1(int mask) {
        const int s = occ_bit(mask, kPoleA) + occ_bit(mask, kPoleB);
        if (s == 0) return false;
        if (mask == 0xff) return s == 1;  // single run containing both poles
        for (int start = 0; start < 8; ++start) {
            if (!occ_bit(mask, start) || occ_bit(mask, (start + 7) % 8)) continue;
            int poles = 0;
            for (int i = start; occ_bit(mask, i % 8); ++i) {
                const int j = i % 8;
                if (j == kPoleA || j == kPoleB) ++poles;
            }
            if (poles != 1) return false;
        }
        return true;
    }

    // Property 2: both poles empty, and the occupied neighbors of l (which
    // then lie on the 3-site path {7,0,1}) are nonempty and contiguous, and
    // likewise for l' on {3,4,5}.
    static bool compute_p2(int mask) {
        if (occ_bit(mask, kPoleA) || occ_bit(mask, kPoleB)) return false;
        const bool b7 = occ_bit(mask, 7), b0 = occ_bit(mask, 0), b1 = occ_bit(mask, 1);
        const bool b3 = occ_bit(mask, 3), b4 = occ_bit(mask, 4), b5 = occ_bit(mask, 5);
        if (!(b7 || b0 || b1) || !(b3 || b4 || b5)) return false;
        if (b7 && b1 && !b0) return false;
        if (b3 && b5 && !b4) return false;
        return true;
    }
};

const PropertyTables& tables() {
    static const PropertyTables t;
    return t;
}

template <class Occ>
int ring_mask(const Occ& occ, Site l, int dir) {
    const auto& ring = tables().ring[dir];
    int mask = 0;
    for (int i = 0; i < 8; ++i)
        if (occ(l + ring[i])) mask |= 1 << i;
    return mask;
}

// Shared proposal evaluation over any occupancy/color view.
template <class Occ, class ColorOf>
ProposalEval evaluate_impl(const Occ& occ, const ColorOf& color_of, Site l, int dir,
                           double lambda, double gamma) {
    ProposalEval ev;
    ev.from = l;
    const Site lp = l + kNeighborOffsets[dir];
    ev.to = lp;

    if (occ(lp)) {
        ev.is_swap = true;
        const Color ci = color_of(l);
        const Color cj = color_of(lp);
        int ni_lp = 0, ni_l = 0, nj_l = 0, nj_lp = 0;
        for (const Site t : neighbors(lp)) {
            if (!occ(t)) continue;
            const Color ct = color_of(t);
            if (ct == ci && !(t == l)) ++ni_lp;
            if (ct == cj) ++nj_lp;
        }
        for (const Site t : neighbors(l)) {
            if (!occ(t)) continue;
            const Color ct = color_of(t);
            if (ct == ci) ++ni_l;
            if (ct == cj && !(t == lp)) ++nj_l;
        }
        ev.swap_exponent = ni_lp - ni_l + nj_l - nj_lp;
        ev.threshold = std::min(1.0, ipow(gamma, ev.swap_exponent));
        return ev;
    }

    const Color ci = color_of(l);
    for (const Site t : neighbors(l)) {
        if (!occ(t)) continue;
        ++ev.e;
        if (color_of(t) == ci) ++ev.e_i;
    }
    for (const Site t : neighbors(lp)) {
        if (t == l || !occ(t)) continue;
        ++ev.e_prime;
        if (color_of(t) == ci) ++ev.e_i_prime;
    }

    const int mask = ring_mask(occ, l, dir);
    ev.gate_ok = (ev.e != 5) && (tables().p1[mask] || tables().p2[mask]);
    ev.threshold = ev.gate_ok
                       ? std::min(1.0, ipow(lambda, ev.e_prime - ev.e) *
                                           ipow(gamma, ev.e_i_prime - ev.e_i))
                       : 0.0;
    return ev;
}

void check_property_preconditions(const Configuration& c, Site l, Site lp) {
    if (!c.has(l)) throw std::invalid_argument("property check: l must be occupied");
    if (c.has(lp)) throw std::invalid_argument("property check: l' must be unoccupied");
    if (direction_of(l, lp) < 0) throw std::invalid_argument("property check: l, l' not adjacent");
}

}  // namespace

void SimParams::validate() const {
    if (!(lambda > 0.0)) throw std::invalid_argument("SimParams: lambda must be > 0");
    if (!(gamma > 0.0)) throw std::invalid_argument("SimParams: gamma must be > 0");
    if (record_every < 1) throw std::invalid_argument("SimParams: record_every must be >= 1");
    if (initial.n1 < 0 || initial.n2 < 0 || initial.n1 + initial.n2 < 1)
        throw std::invalid_argument("SimParams: need n1+n2 >= 1 particles");
}

bool property1(const Configuration& c, Site l, Site lp) {
    check_property_preconditions(c, l, lp);
    const int dir = direction_of(l, lp);
    const int mask = ring_mask([&](Site s) { return c.has(s); }, l, dir);
    return tables().p1[mask];
}

bool property2(const Configuration& c, Site l, Site lp) {
    check_property_preconditions(c, l, lp);
    const int dir = direction_of(l, lp);
    const int mask = ring_mask([&](Site s) { return c.has(s); }, l, dir);
    return tables().p2[mask];
}

ProposalEval evaluate_proposal(const Configuration& c, Site l, int direction, double lambda,
                               double gamma) {
    if (!c.has(l)) throw std::invalid_argument("evaluate_proposal: l must be occupied");
    if (direction < 0 || direction > 5) throw std::invalid_argument("evaluate_proposal: direction");
    return evaluate_impl([&](Site s) { return c.has(s); },
                         [&](Site s) { return c.color_at(s); }, l, direction, lambda, gamma);
}

Configuration build_initial(const InitialRecipe& recipe, SplitMix64& rng) {
    const int n = recipe.n1 + recipe.n2;
    if (n < 1) throw std::invalid_argument("build_initial: n1+n2 must be >= 1");

    std::vector<Site> order;
    switch (recipe.kind) {
        case RecipeKind::Line:
            for (int i = 0; i < n; ++i) order.push_back({i, 0});
            break;
        case RecipeKind::Hexagon:
            order = hexagonal_spiral_sites(n);
            break;
        case RecipeKind::RandomBlob: {
            Configuration grown;
            grown.add({0, 0}, Color::C1);
            order.push_back({0, 0});
            int attempts = 0;
            while (grown.n() < n) {
                Site cand{0, 0};
                if (attempts < 200) {
                    const Site base = order[rng.below(order.size())];
                    cand = base + kNeighborOffsets[rng.below(6)];
                } else {
                    // Stuck re-drawing: the lexicographically largest frontier
                    // site is on the hull and can never close a ring.
                    bool found = false;
                    for (const Site s : order)
                        for (const Site nb : neighbors(s))
                            if (!grown.has(nb) && (!found || cand < nb)) {
                                cand = nb;
                                found = true;
                            }
                }
                if (grown.has(cand)) continue;
                grown.add(cand, Color::C1);
                if (!holes(grown).empty()) {
                    grown.remove(cand);  // re-draw rather than close a hole
                    ++attempts;
                    continue;
                }
                attempts = 0;
                order.push_back(cand);
            }
            break;
        }
    }

    std::vector<Color> colors(n, Color::C1);
    switch (recipe.layout) {
        case ColorLayout::Blocked:
            for (int i = 0; i < n; ++i) colors[i] = i < recipe.n1 ? Color::C1 : Color::C2;
            break;
        case ColorLayout::Alternating: {
            int left1 = recipe.n1, left2 = recipe.n2;
            for (int i = 0; i < n; ++i) {
                const bool pick1 = (i % 2 == 0) ? left1 > 0 : left2 == 0;
                colors[i] = pick1 ? Color::C1 : Color::C2;
                (pick1 ? left1 : left2)--;
            }
            break;
        }
        case ColorLayout::Random: {
            for (int i = 0; i < n; ++i) colors[i] = i < recipe.n1 ? Color::C1 : Color::C2;
            for (int i = n - 1; i > 0; --i)
                std::swap(colors[i], colors[static_cast<int>(rng.below(i + 1))]);
            break;
        }
    }

    Configuration c;
    for (int i = 0; i < n; ++i) c.add(order[i], colors[i]);
    if (!is_connected(c)) throw std::logic_error("build_initial: recipe produced disconnected set");
    return c;
}

Chain::Chain(const Configuration& initial, const SimParams& params)
    : params_(params), rng_(params.seed) {
    params_.validate();
    if (initial.n() < 1) throw std::invalid_argument("Chain: empty initial configuration");
    if (!is_connected(initial)) throw std::invalid_argument("Chain: initial state disconnected");
    for (const auto& [s, col] : initial.sites()) {
        sites_.push_back(s);
        colors_.push_back(col);
    }
    rebuild_grid();
    frame_shift_ = {0, 0};  // shifts are counted from the post-construction frame
    const EdgeStats st = edge_stats(initial);
    metrics_.edges = st.e;
    metrics_.hetero_edges = st.h;
    metrics_.perimeter = 3 * n() - 3 - st.e;
}

Site Chain::rebuild_grid() {
    int qmin = sites_[0].q, qmax = sites_[0].q, rmin = sites_[0].r, rmax = sites_[0].r;
    for (const Site& s : sites_) {
        qmin = std::min(qmin, s.q);
        qmax = std::max(qmax, s.q);
        rmin = std::min(rmin, s.r);
        rmax = std::max(rmax, s.r);
    }
    constexpr int kMargin = 24;
    const int extent = std::max(qmax - qmin, rmax - rmin) + 1;
    const int want = extent + 2 * kMargin;
    if (want > side_) side_ = want;
    // Recenter: translate so the bounding box sits in the middle of the grid.
    const Site d{(side_ - (qmax - qmin + 1)) / 2 - qmin, (side_ - (rmax - rmin + 1)) / 2 - rmin};
    for (Site& s : sites_) s = s + d;
    frame_shift_ = frame_shift_ + d;
    offq_ = 0;
    offr_ = 0;
    cell_particle_.assign(static_cast<std::size_t>(side_) * side_, -1);
    for (std::size_t i = 0; i < sites_.size(); ++i)
        cell_particle_[idx(sites_[i])] = static_cast<int>(i);
    return d;
}

Site Chain::recenter_if_needed(Site moved_to) {
    constexpr int kGuard = 4;  // proposal evaluation looks 2 cells out
    if (moved_to.q < kGuard || moved_to.r < kGuard || moved_to.q >= side_ - kGuard ||
        moved_to.r >= side_ - kGuard)
        return rebuild_grid();
    return {0, 0};
}

StepOutcome Chain::step() {
    const int i = static_cast<int>(rng_.below(sites_.size()));
    const int dir = static_cast<int>(rng_.below(6));
    const double q = rng_.uniform_open01();
    return apply(i, dir, q);
}

StepOutcome Chain::apply(int particle_index, int direction, double q) {
    ++metrics_.iteration;
    const Site l = sites_[particle_index];
    const ProposalEval ev =
        evaluate_impl([&](Site s) { return occ(s); },
                      [&](Site s) { return colors_[cell_particle_[idx(s)]]; }, l, direction,
                      params_.lambda, params_.gamma);

    StepOutcome out;
    out.from = ev.from;
    out.to = ev.to;

    if (ev.is_swap) {
        if (q < ev.threshold) {
            out.kind = StepOutcome::Kind::Swap;
            const int pj = cell_particle_[idx(ev.to)];
            const Color ci = colors_[particle_index], cj = colors_[pj];
            if (ci != cj) {
                // Local recount of heterogeneous edges around the swapped pair.
                int before = 0, after = 0;
                for (const Site t : neighbors(ev.from)) {
                    if (!occ(t) || t == ev.to) continue;
                    const Color ct = colors_[cell_particle_[idx(t)]];
                    before += ct != ci;
                    after += ct != cj;
                }
                for (const Site t : neighbors(ev.to)) {
                    if (!occ(t) || t == ev.from) continue;
                    const Color ct = colors_[cell_particle_[idx(t)]];
                    before += ct != cj;
                    after += ct != ci;
                }
                metrics_.hetero_edges += after - before;
                colors_[particle_index] = cj;
                colors_[pj] = ci;
            }
            ++metrics_.accepted_swaps;
        } else {
            out.kind = StepOutcome::Kind::SwapRejected;
        }
        return out;
    }

    if (ev.gate_ok && q < ev.threshold) {
        out.kind = StepOutcome::Kind::Translate;
        cell_particle_[idx(ev.from)] = -1;
        cell_particle_[idx(ev.to)] = particle_index;
        sites_[particle_index] = ev.to;
        metrics_.edges += ev.e_prime - ev.e;
        metrics_.hetero_edges += (ev.e_prime - ev.e_i_prime) - (ev.e - ev.e_i);
        metrics_.perimeter = 3 * n() - 3 - metrics_.edges;
        ++metrics_.accepted_translations;
        const Site d = recenter_if_needed(sites_[particle_index]);
        out.from = out.from + d;  // keep the outcome in the current frame
        out.to = out.to + d;
    } else {
        out.kind = StepOutcome::Kind::TranslateRejected;
    }
    return out;
}

Configuration Chain::snapshot() const {
    Configuration c;
    for (std::size_t i = 0; i < sites_.size(); ++i) c.add(sites_[i], colors_[i]);
    return c;
}

namespace {
struct BoxScratch {
    std::vector<std::uint32_t> stamp;
    std::uint32_t epoch = 0;
};
thread_local BoxScratch g_scratch;
}  // namespace

bool Chain::check_connected() const {
    int qmin = sites_[0].q, qmax = sites_[0].q, rmin = sites_[0].r, rmax = sites_[0].r;
    for (const Site& s : sites_) {
        qmin = std::min(qmin, s.q);
        qmax = std::max(qmax, s.q);
        rmin = std::min(rmin, s.r);
        rmax = std::max(rmax, s.r);
    }
    const int w = qmax - qmin + 1, h = rmax - rmin + 1;
    auto& sc = g_scratch;
    if (sc.stamp.size() < static_cast<std::size_t>(w * h)) sc.stamp.assign(w * h, 0);
    const std::uint32_t ep = ++sc.epoch;
    auto id = [&](Site s) { return (s.r - rmin) * w + (s.q - qmin); };

    std::vector<Site> stack{sites_[0]};
    sc.stamp[id(sites_[0])] = ep;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const Site u = stack.back();
        stack.pop_back();
        for (const Site nb : neighbors(u)) {
            if (nb.q < qmin || nb.q > qmax || nb.r < rmin || nb.r > rmax) continue;
            if (!occ(nb) || sc.stamp[id(nb)] == ep) continue;
            sc.stamp[id(nb)] = ep;
            ++reached;
            stack.push_back(nb);
        }
    }
    return reached == sites_.size();
}

bool Chain::check_hole_free() const {
    int qmin = sites_[0].q, qmax = sites_[0].q, rmin = sites_[0].r, rmax = sites_[0].r;
    for (const Site& s : sites_) {
        qmin = std::min(qmin, s.q);
        qmax = std::max(qmax, s.q);
        rmin = std::min(rmin, s.r);
        rmax = std::max(rmax, s.r);
    }
    // Flood unoccupied cells of the padded box from a corner; any unoccupied
    // cell left unreached is part of a hole.
    --qmin, --rmin, ++qmax, ++rmax;
    const int w = qmax - qmin + 1, h = rmax - rmin + 1;
    auto& sc = g_scratch;
    if (sc.stamp.size() < static_cast<std::size_t>(w * h)) sc.stamp.assign(w * h, 0);
    const std::uint32_t ep = ++sc.epoch;
    auto id = [&](Site s) { return (s.r - rmin) * w + (s.q - qmin); };

    const Site corner{qmin, rmin};
    std::vector<Site> stack{corner};
    sc.stamp[id(corner)] = ep;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const Site u = stack.back();
        stack.pop_back();
        for (const Site nb : neighbors(u)) {
            if (nb.q < qmin || nb.q > qmax || nb.r < rmin || nb.r > rmax) continue;
            if (occ(nb) || sc.stamp[id(nb)] == ep) continue;
            sc.stamp[id(nb)] = ep;
            ++reached;
            stack.push_back(nb);
        }
    }
    return reached == static_cast<std::size_t>(w) * h - sites_.size();
}

bool Chain::check_reverse_translation(const StepOutcome& out) const {
    if (out.kind != StepOutcome::Kind::Translate) return true;
    const int dir = [&] {
        const Site d = out.from - out.to;
        for (int k = 0; k < 6; ++k)
            if (kNeighborOffsets[k] == d) return k;
        return -1;
    }();
    if (dir < 0 || !occ(out.to) || occ(out.from)) return false;
    const ProposalEval ev =
        evaluate_impl([&](Site s) { return occ(s); },
                      [&](Site s) { return colors_[cell_particle_[idx(s)]]; }, out.to, dir,
                      params_.lambda, params_.gamma);
    return ev.gate_ok && ev.threshold > 0.0;
}

Configuration run(const SimParams& params, const RunObserver& observer) {
    params.validate();
    SplitMix64 init_rng(params.seed ^ 0x0a02bdbf7bb3c0a7ULL);
    Chain chain(build_initial(params.initial, init_rng), params);

    auto notify = [&]() {
        if (!observer) return;
        RunRecord rec{chain.metrics(), [&chain]() { return chain.snapshot(); }};
        observer(rec);
    };

    notify();
    for (std::uint64_t it = 1; it <= params.iterations; ++it) {
        chain.step();
        if (it % params.record_every == 0 || it == params.iterations) notify();
    }
    return chain.snapshot();
}

}  // namespace sepint
