#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <vector>

#include "sepint/configuration.hpp"

// Independent brute-force oracles: exact loop and even-edge-set counts, exact
// shape counts by perimeter, and the exact transition matrix of the chain at
// tiny scale. These ground the pinned constants in the bounds module and the
// acceptance formulas; nothing here shares code with the dynamics fast path.

namespace sepint {

struct OracleCount {
    enum class Kind { LoopsThroughEdge, EvenConnectedThroughEdge, ConfigsWithPerimeter };
    Kind kind;
    int size = 0;         // the parameter k (or n for shape counts)
    long long count = 0;
};

// Number of loops (minimal edge cuts, equivalently self-avoiding polygons in
// the dual hexagonal lattice) of length k through a fixed edge. Odd k returns
// 0 by bipartiteness. Every enumerated polygon is verified to be a minimal
// cut of a large primal patch. k <= 16.
long long count_loops_through_edge(int k);

// Number of connected edge sets of size k containing a fixed edge with even
// degree at every vertex, enumerated as closed trails and deduplicated; each
// set re-verified with explicit even-degree and connectivity predicates.
// k <= 12.
long long count_even_connected_through_edge(int k);

// Exact counts of connected hole-free shapes (uncolored, up to translation;
// rotations and reflections distinct) with n particles, keyed by perimeter.
// n <= 10.
std::map<int, long long> shape_counts_by_perimeter(int n);
long long count_configs_with_perimeter(int n, int k);

// The exact chain at tiny scale: all connected colored configurations of
// (n1, n2) particles up to translation, the exact transition matrix assembled
// from the algorithm's proposal probabilities (1/n particle, 1/6 direction,
// min{1, .} filter), and the closed-form stationary vector
// pi ~ (lambda*gamma)^{-p} * gamma^{-h}. Requires n1 + n2 <= 5 (hole-free is
// automatic below ring size) and rational lambda, gamma.
struct TinyChainModel {
    std::vector<Configuration> states;               // canonical representatives
    std::vector<std::vector<mpq_class>> kernel;      // exact transition matrix
    std::vector<mpq_class> pi_closed_form;           // normalized

    // max_ij |pi_i K_ij - pi_j K_ji|, exact.
    mpq_class detailed_balance_gap() const;
    // max_i |sum_j K_ij - 1|, exact.
    mpq_class row_sum_gap() const;
    // max_i |(pi K)_i - pi_i|, exact (stationarity of the closed form).
    mpq_class stationarity_gap() const;
    bool irreducible() const;
    // Stationary vector recomputed from the kernel alone (long double linear
    // solve of pi K = pi, sum pi = 1): an implementation-independent route to
    // compare against the closed form.
    std::vector<double> stationary_numeric() const;
};

TinyChainModel enumerate_tiny_chain(int n1, int n2, const mpq_class& lambda,
                                    const mpq_class& gamma);

}  // namespace sepint
