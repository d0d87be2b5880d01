#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sepint/configuration.hpp"

// Compression and separation metrics: the minimum-perimeter construction,
// the dual-lattice contour and face decomposition, and separation witnesses.
// Everything here is a pure function of an immutable snapshot.

namespace sepint {

// The hexagon-plus-partial-layer configuration: for n = 3l^2+3l+1+k with
// 0 <= k < 6(l+1), a side-l hexagon with k extra sites added along the next
// layer. Its perimeter is the constructive upper bound on p_min(n).
Configuration min_perimeter_config(int n);

// Closed form of that construction's perimeter: 6l when k = 0, else 6l+i per
// the layer case split. Always <= 2*sqrt(3)*sqrt(n).
int p_min_upper(int n);

struct CompressionReport {
    int p = 0;
    int pmin = 0;
    double alpha_achieved = 1.0;  // p / pmin (1.0 when both are zero, n = 1)
};

CompressionReport compression_report(const Configuration& c);

// Heterogeneous contours in the dual lattice. Every heterogeneous edge's dual
// lies in exactly one contour; a contour either has both ends on the boundary
// contour (crossing) or is a closed loop (isolated).
struct ContourSet {
    HexContour boundary;
    std::vector<std::vector<DualEdge>> crossing;
    std::vector<std::vector<DualEdge>> isolated;
    int crossing_total = 0;  // x: sum of crossing contour lengths
    int isolated_total = 0;  // sum of isolated contour lengths
};

ContourSet extract_contours(const Configuration& c);

// Occupied sites strictly enclosed by each isolated contour, index-aligned
// with ContourSet::isolated.
std::vector<std::set<Site>> isolated_interiors(const Configuration& c, const ContourSet& cs);

// Faces: maximal monochromatic particle regions delimited by the contours,
// i.e. the connected components under homogeneous-edge adjacency. Every edge
// leaving a face is heterogeneous; outer faces touch the boundary walk.
struct Face {
    std::vector<Site> particles;
    Color color = Color::C1;
    bool outer = false;
};

std::vector<Face> faces(const Configuration& c);

struct SeparationWitness {
    std::vector<Site> R;
    int bd_int = 0;           // configuration edges with exactly one endpoint in R
    double density_R = 1.0;   // fraction of C1 in R (1.0 when R empty: vacuous)
    double density_out = 0.0; // fraction of C1 outside R (0.0 when empty: vacuous)
    bool pass = false;
};

// Evaluates the three separation conditions exactly for a given subset R;
// the witness record is returned whether or not it passes.
// Requires R subset of occupied sites, beta > 0, 0 < delta < 1/2.
SeparationWitness separation_check(const Configuration& c, const std::set<Site>& R, double beta,
                                   double delta);

// Exhaustive decision over all 2^n subsets; n <= 22. Returns the passing
// witness with the smallest internal boundary, if any exists.
std::optional<SeparationWitness> separation_search_exact(const Configuration& c, double beta,
                                                         double delta);

// Witness construction from unions of same-color faces (the face-parity
// candidate set, plus the vacuous candidates). Sound: any returned witness
// passes separation_check. Not complete: R need not be a union of faces.
std::optional<SeparationWitness> separation_search_heuristic(const Configuration& c, double beta,
                                                             double delta);

std::string witness_json(const SeparationWitness& w);

}  // namespace sepint
