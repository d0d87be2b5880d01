#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sepint/configuration.hpp"
#include "sepint/rng.hpp"

// Markov chain M: uniform proposal, the two locality checks that keep the
// system connected and hole-free, the Metropolis filter, and swap moves.
// One Chain is one sequential loop; independent chains (different seeds) can
// run in parallel with no shared mutable state.

namespace sepint {

enum class RecipeKind { Line, Hexagon, RandomBlob };
enum class ColorLayout { Alternating, Blocked, Random };

struct InitialRecipe {
    RecipeKind kind = RecipeKind::Line;
    int n1 = 0;  // particles of color C1
    int n2 = 0;  // particles of color C2
    ColorLayout layout = ColorLayout::Blocked;
};

struct SimParams {
    double lambda = 1.0;  // > 0
    double gamma = 1.0;   // > 0
    std::uint64_t seed = 0;
    std::uint64_t iterations = 0;
    std::uint64_t record_every = 1;
    InitialRecipe initial;

    void validate() const;
};

// Builds the recipe's connected, hole-free starting configuration. The RNG is
// used only by the random_blob shape and the random color layout.
Configuration build_initial(const InitialRecipe& recipe, SplitMix64& rng);

// The locality checks of the move from occupied site l to unoccupied
// neighbor lp, evaluated on the <= 10 sites of the joint neighborhood with
// the moving particle excluded. Preconditions (l occupied, lp unoccupied,
// adjacent) are enforced with exceptions.
bool property1(const Configuration& c, Site l, Site lp);
bool property2(const Configuration& c, Site l, Site lp);

struct StepOutcome {
    enum class Kind : std::uint8_t {
        Translate,          // target unoccupied, move accepted
        TranslateRejected,  // target unoccupied, gate/property/filter rejected
        Swap,               // target occupied, swap accepted
        SwapRejected,
    };
    Kind kind = Kind::TranslateRejected;
    Site from{};
    Site to{};
    bool accepted() const { return kind == Kind::Translate || kind == Kind::Swap; }
};

// The outcome of one fully specified proposal, before drawing q: the
// acceptance threshold t (accept iff q < t) and the resulting state. Pure
// function of the configuration; used by the chain and by kernel tests.
struct ProposalEval {
    bool is_swap = false;
    bool gate_ok = true;     // for translations: e != 5 and Property 1 or 2
    double threshold = 0.0;  // acceptance probability min(1, t); 0 if gated off
    Site from{};
    Site to{};
    // Neighbor counts entering the filter (translations only): counts at the
    // origin with P contracted there, and at the target with P removed.
    int e = 0, e_i = 0, e_prime = 0, e_i_prime = 0;
    int swap_exponent = 0;  // swaps only
};

ProposalEval evaluate_proposal(const Configuration& c, Site l, int direction, double lambda,
                               double gamma);

struct ChainMetrics {
    std::uint64_t iteration = 0;
    int perimeter = 0;
    int edges = 0;
    int hetero_edges = 0;
    std::uint64_t accepted_translations = 0;
    std::uint64_t accepted_swaps = 0;
};

// Chain state on a dense grid with an occupied-site index, so one step is
// O(1). The configuration is an equivalence class under translation, so the
// grid recenters itself when the arrangement drifts near its edge.
class Chain {
  public:
    Chain(const Configuration& initial, const SimParams& params);

    StepOutcome step();

    // Deterministic core used by step(); exposed for exact-kernel tests.
    StepOutcome apply(int particle_index, int direction, double q);

    const ChainMetrics& metrics() const { return metrics_; }
    std::uint64_t iteration() const { return metrics_.iteration; }
    int n() const { return static_cast<int>(sites_.size()); }
    Site site_of(int particle_index) const { return sites_[particle_index]; }
    bool has_site(Site s) const { return occ(s); }
    // Cumulative translation applied by grid recentering since construction;
    // lets observers that track absolute coordinates stay in the chain's
    // current frame. The state itself is a translation class, so recentering
    // never changes it.
    Site frame_shift() const { return frame_shift_; }

    Configuration snapshot() const;

    // Verification-mode checks, O(n) on the dense grid; meant for test
    // harnesses after accepted moves, never for the hot loop (the locality
    // properties guarantee both by construction).
    bool check_connected() const;
    bool check_hole_free() const;
    // The reverse of an accepted translation must pass the same gate with a
    // positive acceptance threshold.
    bool check_reverse_translation(const StepOutcome& out) const;

  private:
    friend struct GridView;
    int idx(Site s) const { return (s.r + offr_) * side_ + (s.q + offq_); }
    bool occ(Site s) const { return cell_particle_[idx(s)] >= 0; }
    Site rebuild_grid();
    Site recenter_if_needed(Site moved_to);  // returns the shift applied (0,0 if none)

    SimParams params_;
    SplitMix64 rng_;
    Site frame_shift_{0, 0};
    int side_ = 0;
    int offq_ = 0;
    int offr_ = 0;
    std::vector<int> cell_particle_;  // particle index per cell, -1 if empty
    std::vector<Site> sites_;         // particle index -> site
    std::vector<Color> colors_;       // particle index -> color
    ChainMetrics metrics_;
};

// Observer invoked at iteration 0, then every record_every iterations, and at
// the final iteration. `snapshot` materializes the configuration on demand.
struct RunRecord {
    ChainMetrics metrics;
    std::function<Configuration()> snapshot;
};
using RunObserver = std::function<void(const RunRecord&)>;

// Drives the chain for params.iterations steps. Deterministic given the seed.
Configuration run(const SimParams& params, const RunObserver& observer = nullptr);

}  // namespace sepint
