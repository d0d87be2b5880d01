// Command-line surface: simulation runs, the phase grid, the enumeration
// oracles, the bound checks, and snapshot analysis. Every command writes a
// metadata block (version, seed, rng id, params) sufficient to reproduce its
// outputs exactly. Exit codes: 0 ok, 1 domain error, 2 io error.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sepint/analysis.hpp"
#include "sepint/bounds.hpp"
#include "sepint/configuration.hpp"
#include "sepint/dynamics.hpp"
#include "sepint/enumeration.hpp"
#include "sepint/render.hpp"

#ifndef SEPINT_BUILD_ID
#define SEPINT_BUILD_ID "unknown"
#endif

namespace {

using nlohmann::json;
using namespace sepint;

constexpr const char* kVersion = "0.1.0";

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

RecipeKind parse_kind(const std::string& s) {
    if (s == "line") return RecipeKind::Line;
    if (s == "hexagon") return RecipeKind::Hexagon;
    if (s == "random_blob") return RecipeKind::RandomBlob;
    throw CLI::ValidationError("--init must be line|hexagon|random_blob");
}

ColorLayout parse_layout(const std::string& s) {
    if (s == "blocked") return ColorLayout::Blocked;
    if (s == "alternating") return ColorLayout::Alternating;
    if (s == "random") return ColorLayout::Random;
    throw CLI::ValidationError("--layout must be blocked|alternating|random");
}

const char* kind_name(RecipeKind k) {
    switch (k) {
        case RecipeKind::Line: return "line";
        case RecipeKind::Hexagon: return "hexagon";
        default: return "random_blob";
    }
}

const char* layout_name(ColorLayout l) {
    switch (l) {
        case ColorLayout::Blocked: return "blocked";
        case ColorLayout::Alternating: return "alternating";
        default: return "random";
    }
}

json params_json(const SimParams& p) {
    return json{{"lambda", p.lambda},
                {"gamma", p.gamma},
                {"seed", p.seed},
                {"iterations", p.iterations},
                {"record_every", p.record_every},
                {"initial",
                 {{"kind", kind_name(p.initial.kind)},
                  {"n1", p.initial.n1},
                  {"n2", p.initial.n2},
                  {"layout", layout_name(p.initial.layout)}}}};
}

json meta_json(const std::string& command) {
    return json{{"tool", "sepint"},
                {"version", kVersion},
                {"build", SEPINT_BUILD_ID},
                {"rng", kRngAlgorithm},
                {"command", command}};
}

// Snapshot iterations for the geometric cadence: 0, 50k, then x20 each.
bool geometric_snapshot_due(std::uint64_t iter) {
    if (iter == 0) return true;
    for (std::uint64_t mark = 50000; mark <= iter; mark *= 20)
        if (mark == iter) return true;
    return false;
}

struct CellResult {
    double lambda = 0, gamma = 0;
    CompressionReport comp;
    bool witness_found = false;
    double witness_density = 0;
    double hetero_fraction = 0;
    std::string phase;
};

CellResult run_cell(double lambda, double gamma, const SimParams& shared, double alpha_cutoff,
                    double beta, double delta) {
    SimParams p = shared;
    p.lambda = lambda;
    p.gamma = gamma;
    const Configuration final = run(p);
    CellResult r;
    r.lambda = lambda;
    r.gamma = gamma;
    r.comp = compression_report(final);
    const EdgeStats st = edge_stats(final);
    r.hetero_fraction = st.e > 0 ? static_cast<double>(st.h) / st.e : 0.0;
    const auto w = separation_search_heuristic(final, beta, delta);
    r.witness_found = w.has_value();
    if (w) r.witness_density = w->density_R;
    const bool compressed = r.comp.alpha_achieved < alpha_cutoff;
    r.phase = std::string(compressed ? "compressed" : "expanded") + "-" +
              (r.witness_found ? "separated" : "integrated");
    return r;
}

std::pair<int, int> parse_range(const std::string& s) {
    const auto pos = s.find("..");
    if (pos == std::string::npos) {
        const int v = std::stoi(s);
        return {v, v};
    }
    return {std::stoi(s.substr(0, pos)), std::stoi(s.substr(pos + 2))};
}

int cmd_run(const SimParams& params, const std::string& out_dir, std::uint64_t snapshot_every,
            bool geometric, std::uint64_t svg_every) {
    std::filesystem::create_directories(out_dir);
    const std::string metrics_path = out_dir + "/metrics.csv";
    const std::string snaps_path = out_dir + "/snapshots.jsonl";

    std::ofstream metrics(metrics_path, std::ios::binary);
    std::ofstream snaps(snaps_path, std::ios::binary);
    if (!metrics || !snaps) throw IoError("cannot open outputs under " + out_dir);
    metrics << "iteration,perimeter,edges,hetero_edges,accept_translate,accept_swap\n";

    std::uint64_t snap_count = 0;
    auto observer = [&](const RunRecord& rec) {
        const auto& m = rec.metrics;
        metrics << m.iteration << ',' << m.perimeter << ',' << m.edges << ',' << m.hetero_edges
                << ',' << m.accepted_translations << ',' << m.accepted_swaps << '\n';
        const bool snap_due = geometric ? geometric_snapshot_due(m.iteration)
                                        : (snapshot_every > 0 &&
                                           (m.iteration % snapshot_every == 0 ||
                                            m.iteration == params.iterations));
        if (snap_due) {
            const Configuration snap = rec.snapshot();
            snaps << to_snapshot_json(snap) << '\n';
            if (svg_every > 0 && snap_count % svg_every == 0)
                write_file(out_dir + "/snap_" + std::to_string(m.iteration) + ".svg",
                           render_svg(snap));
            ++snap_count;
        }
    };

    const Configuration final = run(params, observer);
    if (!metrics || !snaps) throw IoError("write failed under " + out_dir);

    json meta = meta_json("run");
    meta["params"] = params_json(params);
    meta["outputs"] = {{"metrics", metrics_path}, {"snapshots", snaps_path}};
    meta["final"] = json::parse(to_snapshot_json(final));
    write_file(out_dir + "/run_meta.json", meta.dump(2) + "\n");
    std::cout << "run complete: n=" << final.n() << " perimeter=" << boundary_walk(final).length
              << " outputs in " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulator and verification toolkit for stochastic separation/integration "
                 "on the triangular lattice"};
    app.require_subcommand(1);

    // ---- run ----
    auto* run_cmd = app.add_subcommand("run", "execute one chain and record metrics/snapshots");
    SimParams rp;
    rp.initial = {RecipeKind::Line, 50, 50, ColorLayout::Blocked};
    rp.lambda = 4;
    rp.gamma = 4;
    rp.iterations = 1000000;
    rp.record_every = 10000;
    std::string init_kind = "line", layout = "blocked", out_dir = "out";
    std::uint64_t snapshot_every = 0, svg_every = 0;
    bool geometric = false;
    run_cmd->add_option("--n1", rp.initial.n1, "particles of color C1");
    run_cmd->add_option("--n2", rp.initial.n2, "particles of color C2");
    run_cmd->add_option("--lambda", rp.lambda, "neighbor bias (> 0)");
    run_cmd->add_option("--gamma", rp.gamma, "same-color bias (> 0)");
    run_cmd->add_option("--iters", rp.iterations, "iteration budget");
    run_cmd->add_option("--seed", rp.seed, "rng seed");
    run_cmd->add_option("--record-every", rp.record_every, "metrics cadence");
    run_cmd->add_option("--init", init_kind, "line|hexagon|random_blob");
    run_cmd->add_option("--layout", layout, "blocked|alternating|random");
    run_cmd->add_option("--out-dir", out_dir, "output directory");
    run_cmd->add_option("--snapshot-every", snapshot_every, "snapshot cadence (0 = final only)");
    run_cmd->add_flag("--geometric-snapshots", geometric,
                      "snapshot at iterations 0, 5e4, then x20 (evaluated at recording points)");
    run_cmd->add_option("--svg-every", svg_every, "render every k-th snapshot to SVG (0 = none)");

    // ---- phase-grid ----
    auto* grid_cmd = app.add_subcommand("phase-grid", "run a (lambda, gamma) grid and classify");
    std::vector<double> lambdas{4.0, 1.5};
    std::vector<double> gammas{0.58, 4.0, 5.20};
    SimParams gp;
    gp.initial = {RecipeKind::Line, 50, 50, ColorLayout::Blocked};
    gp.iterations = 5000000;
    gp.record_every = 100000;
    double alpha_cutoff = 4.0, gbeta = 6.0, gdelta = 0.2;
    int jobs = 0;
    std::string grid_out = "grid_out";
    grid_cmd->add_option("--lambdas", lambdas, "lambda row values")->delimiter(',');
    grid_cmd->add_option("--gammas", gammas, "gamma column values")->delimiter(',');
    grid_cmd->add_option("--n1", gp.initial.n1, "particles of color C1");
    grid_cmd->add_option("--n2", gp.initial.n2, "particles of color C2");
    grid_cmd->add_option("--iters", gp.iterations, "per-cell iteration budget");
    grid_cmd->add_option("--seed", gp.seed, "shared seed policy");
    grid_cmd->add_option("--alpha-cutoff", alpha_cutoff, "compressed iff alpha below this");
    grid_cmd->add_option("--beta", gbeta, "separation witness beta");
    grid_cmd->add_option("--delta", gdelta, "separation witness delta");
    grid_cmd->add_option("--jobs", jobs, "parallel cells (0 = hardware)");
    grid_cmd->add_option("--out-dir", grid_out, "output directory");

    // ---- oracle ----
    auto* oracle_cmd = app.add_subcommand("oracle", "exact enumeration oracles");
    std::string oracle_kind, krange = "6..14", nrange = "1..8";
    int on1 = 2, on2 = 1;
    std::string olambda = "4", ogamma = "4";
    oracle_cmd->add_option("kind", oracle_kind, "loops|even|shapes|tiny-chain")->required();
    oracle_cmd->add_option("--k", krange, "size or a..b range (loops/even)");
    oracle_cmd->add_option("--n", nrange, "size or a..b range (shapes)");
    oracle_cmd->add_option("--n1", on1, "tiny-chain: C1 count");
    oracle_cmd->add_option("--n2", on2, "tiny-chain: C2 count");
    oracle_cmd->add_option("--lambda", olambda, "tiny-chain: rational, e.g. 4 or 1/2");
    oracle_cmd->add_option("--gamma", ogamma, "tiny-chain: rational, e.g. 4 or 1/2");

    // ---- check-bounds ----
    auto* bounds_cmd = app.add_subcommand("check-bounds", "convergence-condition and threshold numerics");
    std::string which = "all";
    double bg = 5.656854249492380195, bc = 1e-4, bz = 0.0125, ba = 1e-5;
    double blambda = 4, bgamma2 = 8, balpha = 3.6, bbeta = 30, bdelta = 0.4, bigamma = 1.0,
           bidelta = 0.1;
    std::string regime = "large_gamma";
    bounds_cmd->add_option("which", which, "kp-loop|kp-ht|alpha|separation|integration|regime|all");
    bounds_cmd->add_option("--gamma", bg, "kp-loop / separation / integration gamma");
    bounds_cmd->add_option("--c", bc, "kp-loop constant c");
    bounds_cmd->add_option("--z", bz, "kp-ht z = (gamma-1)/(gamma+1)");
    bounds_cmd->add_option("--a", ba, "kp-ht constant a");
    bounds_cmd->add_option("--lambda", blambda, "alpha threshold lambda");
    bounds_cmd->add_option("--alpha", balpha, "separation alpha");
    bounds_cmd->add_option("--beta", bbeta, "separation beta");
    bounds_cmd->add_option("--delta", bdelta, "separation / integration delta");
    bounds_cmd->add_option("--regime", regime, "large_gamma|near_one");

    // ---- analyze ----
    auto* an_cmd = app.add_subcommand("analyze", "compression + separation report for a snapshot");
    std::string snap_path, svg_out;
    double abeta = 6.0, adelta = 0.2;
    bool use_exact = false;
    an_cmd->add_option("snapshot", snap_path, "snapshot JSON path")->required();
    an_cmd->add_option("--beta", abeta, "separation beta");
    an_cmd->add_option("--delta", adelta, "separation delta");
    an_cmd->add_flag("--exact", use_exact, "exhaustive subset search (n <= 22)");
    an_cmd->add_option("--svg", svg_out, "write an SVG render here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            rp.initial.kind = parse_kind(init_kind);
            rp.initial.layout = parse_layout(layout);
            return cmd_run(rp, out_dir, snapshot_every, geometric, svg_every);
        }

        if (*grid_cmd) {
            std::filesystem::create_directories(grid_out);
            std::vector<std::future<CellResult>> futs;
            const int hw = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
            (void)hw;  // std::async manages the pool; cells are independent
            for (const double l : lambdas)
                for (const double g : gammas)
                    futs.push_back(std::async(std::launch::async, run_cell, l, g, gp, alpha_cutoff,
                                              gbeta, gdelta));
            json cells = json::array();
            std::size_t i = 0;
            std::cout << "lambda   gamma    alpha    phase                  witness_density  h/e\n";
            for (const double l : lambdas)
                for (const double g : gammas) {
                    const CellResult r = futs[i++].get();
                    std::printf("%-8g %-8g %-8.3f %-22s %-16.3f %.3f\n", l, g,
                                r.comp.alpha_achieved, r.phase.c_str(), r.witness_density,
                                r.hetero_fraction);
                    cells.push_back({{"lambda", r.lambda},
                                     {"gamma", r.gamma},
                                     {"alpha_achieved", r.comp.alpha_achieved},
                                     {"perimeter", r.comp.p},
                                     {"pmin", r.comp.pmin},
                                     {"phase", r.phase},
                                     {"witness_found", r.witness_found},
                                     {"witness_density", r.witness_density},
                                     {"hetero_fraction", r.hetero_fraction}});
                }
            json meta = meta_json("phase-grid");
            meta["params"] = params_json(gp);
            meta["alpha_cutoff"] = alpha_cutoff;
            meta["beta"] = gbeta;
            meta["delta"] = gdelta;
            meta["note"] = "lambda rows are artifact choices";
            meta["cells"] = cells;
            write_file(grid_out + "/grid.json", meta.dump(2) + "\n");
            return 0;
        }

        if (*oracle_cmd) {
            json meta = meta_json("oracle");
            meta["convention"] = "translation classes; rotations and reflections distinct";
            auto emit_count = [](const OracleCount& oc) {
                const char* name = oc.kind == OracleCount::Kind::LoopsThroughEdge
                                       ? "loops_through_edge"
                                       : "even_connected_through_edge";
                std::cout << json{{"kind", name}, {"k", oc.size}, {"count", oc.count}}.dump()
                          << "\n";
            };
            if (oracle_kind == "loops") {
                const auto [a, b] = parse_range(krange);
                for (int k = a; k <= b; ++k)
                    emit_count({OracleCount::Kind::LoopsThroughEdge, k,
                                count_loops_through_edge(k)});
            } else if (oracle_kind == "even") {
                const auto [a, b] = parse_range(krange);
                for (int k = a; k <= b; ++k)
                    emit_count({OracleCount::Kind::EvenConnectedThroughEdge, k,
                                count_even_connected_through_edge(k)});
            } else if (oracle_kind == "shapes") {
                const auto [a, b] = parse_range(nrange);
                for (int n = a; n <= b; ++n) {
                    json per;
                    for (const auto& [p, cnt] : shape_counts_by_perimeter(n))
                        per[std::to_string(p)] = cnt;
                    std::cout << json{{"kind", "configs_with_perimeter"},
                                      {"n", n},
                                      {"counts", per},
                                      {"convention", meta["convention"]}}
                                     .dump()
                              << "\n";
                }
            } else if (oracle_kind == "tiny-chain") {
                mpq_class l(olambda), g(ogamma);
                l.canonicalize();
                g.canonicalize();
                const TinyChainModel m = enumerate_tiny_chain(on1, on2, l, g);
                json out = meta;
                out["kind"] = "tiny_chain";
                out["n1"] = on1;
                out["n2"] = on2;
                out["states"] = m.states.size();
                out["irreducible"] = m.irreducible();
                out["detailed_balance_gap"] = m.detailed_balance_gap().get_str();
                out["row_sum_gap"] = m.row_sum_gap().get_str();
                out["stationarity_gap"] = m.stationarity_gap().get_str();
                std::cout << out.dump() << "\n";
            } else {
                std::cerr << "unknown oracle kind: " << oracle_kind << "\n";
                return 1;
            }
            return 0;
        }

        if (*bounds_cmd) {
            json checks = json::array();
            auto emit_loop = [&](double g, double c) {
                const auto r = kp_loop_check(g, c);
                std::printf("kp-loop     gamma=%-10.6f c=%-9.2e lhs=%-13.6Le tail_valid=%d %s\n",
                            g, c, r.lhs, r.tail_valid, r.pass ? "PASS" : "FAIL");
                checks.push_back({{"check", "kp_loop"},
                                  {"gamma", g},
                                  {"c", c},
                                  {"lhs", static_cast<double>(r.lhs)},
                                  {"tail_valid", r.tail_valid},
                                  {"pass", r.pass}});
            };
            auto emit_ht = [&](double z, double a) {
                const auto r = kp_ht_check(z, a);
                std::printf("kp-ht       z=%-14.6f a=%-9.2e lhs=%-13.6Le tail_valid=%d %s\n", z,
                            a, r.lhs, r.tail_valid, r.pass ? "PASS" : "FAIL");
                checks.push_back({{"check", "kp_ht"},
                                  {"z", z},
                                  {"a", a},
                                  {"lhs", static_cast<double>(r.lhs)},
                                  {"tail_valid", r.tail_valid},
                                  {"pass", r.pass}});
            };
            if (which == "kp-loop") emit_loop(bg, bc);
            else if (which == "kp-ht") emit_ht(bz, ba);
            else if (which == "alpha") {
                const auto reg = regime == "near_one" ? CompressionRegime::NearOne
                                                      : CompressionRegime::LargeGamma;
                const auto r = compression_alpha_threshold(blambda, bg, reg);
                std::printf("alpha-threshold lambda=%g gamma=%g regime=%s -> %s\n", blambda, bg,
                            regime.c_str(), r ? std::to_string(*r).c_str() : "none");
                checks.push_back({{"check", "alpha_threshold"},
                                  {"lambda", blambda},
                                  {"gamma", bg},
                                  {"regime", regime},
                                  {"alpha_min", r ? json(*r) : json(nullptr)}});
            } else if (which == "separation") {
                const bool ok = separation_condition(balpha, bbeta, bdelta, bg);
                std::printf("separation  alpha=%g beta=%g delta=%g gamma=%g -> %s\n", balpha,
                            bbeta, bdelta, bg, ok ? "true" : "false");
                checks.push_back({{"check", "separation_condition"},
                                  {"alpha", balpha},
                                  {"beta", bbeta},
                                  {"delta", bdelta},
                                  {"gamma", bg},
                                  {"holds", ok}});
            } else if (which == "integration") {
                const auto w = integration_condition(bigamma, bidelta);
                if (w)
                    std::printf("integration gamma=%g delta=%g -> eps in [%.6f, %.6f]\n", bigamma,
                                bidelta, w->lo, w->hi);
                else
                    std::printf("integration gamma=%g delta=%g -> none\n", bigamma, bidelta);
                checks.push_back(
                    {{"check", "integration_condition"},
                     {"gamma", bigamma},
                     {"delta", bidelta},
                     {"window", w ? json{{"lo", w->lo}, {"hi", w->hi}} : json(nullptr)}});
            } else if (which == "regime") {
                const RegimeReport r = regime_report(blambda, bg, bidelta);
                std::printf("regime lambda=%g gamma=%g delta=%g: alpha(large_gamma)=%s "
                            "alpha(near_one)=%s integration=%s\n",
                            r.lambda, r.gamma, r.delta,
                            r.alpha_min_large_gamma
                                ? std::to_string(*r.alpha_min_large_gamma).c_str()
                                : "none",
                            r.alpha_min_near_one ? std::to_string(*r.alpha_min_near_one).c_str()
                                                 : "none",
                            r.integration_window ? "feasible" : "none");
                checks.push_back(
                    {{"check", "regime_report"},
                     {"lambda", r.lambda},
                     {"gamma", r.gamma},
                     {"delta", r.delta},
                     {"alpha_min_large_gamma",
                      r.alpha_min_large_gamma ? json(*r.alpha_min_large_gamma) : json(nullptr)},
                     {"alpha_min_near_one",
                      r.alpha_min_near_one ? json(*r.alpha_min_near_one) : json(nullptr)},
                     {"integration_window",
                      r.integration_window
                          ? json{{"lo", r.integration_window->lo},
                                 {"hi", r.integration_window->hi}}
                          : json(nullptr)}});
            } else if (which == "all") {
                emit_loop(std::pow(4.0, 1.25), 1e-4);
                emit_loop(2.71, 0.05);
                emit_ht(0.0125, 1e-5);
                emit_ht(0.1, 0.02);
                const auto a48 =
                    compression_alpha_threshold(4, 8, CompressionRegime::LargeGamma);
                std::printf("alpha-threshold lambda=4 gamma=8 large_gamma -> %.6f\n", *a48);
                checks.push_back({{"check", "alpha_threshold"},
                                  {"lambda", 4},
                                  {"gamma", 8},
                                  {"regime", "large_gamma"},
                                  {"alpha_min", *a48}});
                const auto opt = integration_eps_optimum();
                std::printf("integration eps-optimum: eps=%.6f gamma_upper=%.6f\n", opt.eps,
                            opt.gamma_upper);
                checks.push_back({{"check", "integration_eps_optimum"},
                                  {"eps", opt.eps},
                                  {"gamma_upper", opt.gamma_upper}});
            } else {
                std::cerr << "unknown check: " << which << "\n";
                return 1;
            }
            json meta = meta_json("check-bounds");
            meta["checks"] = checks;
            std::cout << meta.dump() << "\n";
            return 0;
        }

        if (*an_cmd) {
            std::ifstream in(snap_path, std::ios::binary);
            if (!in) throw IoError("cannot open " + snap_path);
            std::stringstream buf;
            buf << in.rdbuf();
            const Configuration c = from_snapshot_json(buf.str());
            const CompressionReport rep = compression_report(c);
            const auto w = use_exact ? separation_search_exact(c, abeta, adelta)
                                     : separation_search_heuristic(c, abeta, adelta);
            json out = meta_json("analyze");
            out["n"] = c.n();
            out["perimeter"] = rep.p;
            out["pmin"] = rep.pmin;
            out["alpha_achieved"] = rep.alpha_achieved;
            out["beta"] = abeta;
            out["delta"] = adelta;
            out["search"] = use_exact ? "exact" : "heuristic";
            out["witness"] = w ? json::parse(witness_json(*w)) : json(nullptr);
            std::cout << out.dump(2) << "\n";
            if (!svg_out.empty()) write_file(svg_out, render_svg(c));
            return 0;
        }
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
