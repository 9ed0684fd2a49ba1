#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "spinent/io.hpp"
#include "spinent/multipole.hpp"
#include "spinent/optimize.hpp"
#include "spinent/oracle.hpp"
#include "spinent/symmetry.hpp"

namespace {

using namespace spinent;
using nlohmann::json;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

void print_constellation_summary(const Constellation& c) {
    std::printf("stars (%zu):\n", c.stars.size());
    for (const auto& s : c.stars) {
        double theta = std::acos(std::clamp(s.z, -1.0, 1.0));
        double phi = std::atan2(s.y, s.x);
        if (phi < 0) phi += 2.0 * M_PI;
        std::printf("  (% .15g, % .15g, % .15g)  theta=%s phi=%s\n", s.x, s.y, s.z,
                    fmt(theta).c_str(), fmt(phi).c_str());
    }
}

int cmd_compute(const std::string& file, bool as_json) {
    SpinState s = load_state(file);
    MultipoleTable t = multipoles(s);
    double ebar = averaged_entanglement(s);
    double efixed = linear_entropy(s);
    double purity = multipole_purity(t);
    if (as_json) {
        json j;
        j["twice_spin"] = s.twice_spin;
        j["averaged_entanglement"] = ebar;
        j["linear_entropy"] = efixed;
        j["multipole_purity"] = purity;
        json per_k = json::array();
        for (int K = 0; K <= t.max_rank(); ++K) {
            double mag = 0.0;
            for (int q = -K; q <= K; ++q) mag += std::norm(t.rho(K, q));
            per_k.push_back(std::sqrt(mag));
        }
        j["multipole_magnitudes"] = per_k;
        std::printf("%s\n", j.dump(2).c_str());
        return 0;
    }
    std::printf("twice_spin = %d\n", s.twice_spin);
    std::printf("averaged_entanglement = %s\n", fmt(ebar).c_str());
    std::printf("linear_entropy = %s\n", fmt(efixed).c_str());
    std::printf("multipole_purity = %s\n", fmt(purity).c_str());
    for (int K = 0; K <= t.max_rank(); ++K) {
        double mag = 0.0;
        for (int q = -K; q <= K; ++q) mag += std::norm(t.rho(K, q));
        std::printf("multipole_magnitude K=%d: %s\n", K, fmt(std::sqrt(mag)).c_str());
    }
    return 0;
}

int cmd_optimize(int twice_spin, const OptimizerConfig& cfg, bool minimize, const std::string& out) {
    OptimizationReport rep = minimize ? minimize_average_entanglement(twice_spin, cfg)
                                      : maximize_average_entanglement(twice_spin, cfg);
    std::printf("best_value = %s\n", fmt(rep.best_value).c_str());
    std::printf("best_restart = %d, locally_optimal = %s\n", rep.best_restart,
                rep.locally_optimal ? "true" : "false");
    print_constellation_summary(constellation(rep.best_state));
    if (!out.empty()) {
        save_optimization_report(rep, cfg, twice_spin, out);
        std::printf("report written to %s\n", out.c_str());
    }
    return 0;
}

int cmd_constellation(const std::string& file, double tol, const std::string& csv,
                      const std::string& sym_json) {
    SpinState s = load_state(file);
    Constellation c = constellation(s);
    print_constellation_summary(c);
    PointGroupReport rep = detect_point_group(c, tol);
    if (rep.continuous)
        std::printf("symmetry: continuous (axial), finite part order %d, proper_order %d\n",
                    rep.order, rep.proper_order);
    else
        std::printf("symmetry: order %d, proper_order %d, generators %zu\n", rep.order,
                    rep.proper_order, rep.generators.size());
    if (!csv.empty()) save_constellation_csv(c, csv);
    if (!sym_json.empty()) {
        std::ofstream f(sym_json);
        if (!f) throw std::invalid_argument("cannot write " + sym_json);
        f << point_group_to_json(rep) << "\n";
    }
    return 0;
}

int cmd_qfunc(const std::string& file, int ntheta, int nphi, const std::string& format,
              const std::string& out) {
    SpinState s = load_state(file);
    QGrid g = q_function(s, ntheta, nphi);
    if (format == "csv")
        save_qgrid_csv(g, out);
    else if (format == "ppm")
        save_qgrid_ppm(g, out);
    else
        throw std::invalid_argument("format must be csv or ppm");
    std::printf("grid %dx%d written to %s\n", ntheta, nphi, out.c_str());
    return 0;
}

int cmd_verify(const std::string& file, std::size_t samples, std::uint64_t seed) {
    SpinState s = load_state(file);
    double exact = averaged_entanglement(s);
    McEstimate mc = mc_average_entanglement(s, samples, seed);
    double sigma = mc.std_error > 0 ? std::abs(mc.mean - exact) / mc.std_error : 0.0;
    std::printf("closed_form = %s\n", fmt(exact).c_str());
    std::printf("monte_carlo = %s +- %s (n=%zu)\n", fmt(mc.mean).c_str(), fmt(mc.std_error).c_str(),
                mc.n_samples);
    std::printf("deviation_sigma = %s\n", fmt(sigma).c_str());
    if (sigma > 5.0) {
        std::printf("FAIL: Monte Carlo and closed form disagree beyond 5 sigma\n");
        return 1;
    }
    std::printf("OK\n");
    return 0;
}

int cmd_atlas(int max_ts, int restarts, std::uint64_t seed, const std::string& out) {
    std::ofstream f(out);
    if (!f) throw std::invalid_argument("cannot write " + out);
    f << "twice_spin,e_max,e_coherent,upper_bound,symmetry_order\n";
    for (int ts = 1; ts <= max_ts; ++ts) {
        OptimizerConfig cfg;
        cfg.restarts = restarts;
        cfg.seed = seed + static_cast<std::uint64_t>(ts);
        OptimizationReport rep = maximize_average_entanglement(ts, cfg);
        double bound = static_cast<double>(ts) / (ts + 1);
        PointGroupReport sym = detect_point_group(constellation(rep.best_state), 1e-3);
        std::string sym_text = sym.continuous ? "continuous" : std::to_string(sym.order);
        f << ts << "," << fmt(rep.best_value) << "," << fmt(coherent_average_value(ts)) << ","
          << fmt(bound) << "," << sym_text << "\n";
        std::printf("twice_spin %d: e_max=%s e_coh=%s bound=%s symmetry=%s\n", ts,
                    fmt(rep.best_value).c_str(), fmt(coherent_average_value(ts)).c_str(),
                    fmt(bound).c_str(), sym_text.c_str());
    }
    std::printf("atlas written to %s\n", out.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"average-entanglement toolkit for symmetric spin states"};
    app.require_subcommand(1);

    std::string state_file, out_file, format = "csv", csv_file, sym_file;
    bool as_json = false, minimize = false;
    int twice_spin = 1, ntheta = 91, nphi = 181, max_ts = 8;
    double tol = 1e-5;
    std::size_t samples = 200000;
    OptimizerConfig cfg;

    auto* compute = app.add_subcommand("compute", "entanglement and multipoles of a state file");
    compute->add_option("--state", state_file, "state JSON file")->required();
    compute->add_flag("--json", as_json, "emit JSON instead of text");

    auto* optimize = app.add_subcommand("optimize", "search for extremal average entanglement");
    optimize->add_option("--twice-spin", twice_spin, "twice the spin (integer)")->required();
    optimize->add_option("--restarts", cfg.restarts, "number of restarts (0 = auto)");
    optimize->add_option("--max-iterations", cfg.max_iterations, "iteration cap per restart");
    optimize->add_option("--seed", cfg.seed, "master seed");
    optimize->add_option("--threads", cfg.threads, "worker threads (0 = SPINENT_THREADS/auto)");
    optimize->add_flag("--minimize", minimize, "minimize instead of maximize");
    optimize->add_option("--out", out_file, "write the optimization report JSON here");

    auto* constel = app.add_subcommand("constellation", "stars and point group of a state file");
    constel->add_option("--state", state_file, "state JSON file")->required();
    constel->add_option("--tol", tol, "matching tolerance (chordal)");
    constel->add_option("--csv", csv_file, "write star coordinates CSV here");
    constel->add_option("--symmetry-json", sym_file, "write point group JSON here");

    auto* qfunc = app.add_subcommand("qfunc", "Husimi function on a sphere grid");
    qfunc->add_option("--state", state_file, "state JSON file")->required();
    qfunc->add_option("--ntheta", ntheta, "polar grid points (>= 2)");
    qfunc->add_option("--nphi", nphi, "azimuthal grid points (>= 2)");
    qfunc->add_option("--format", format, "csv or ppm");
    qfunc->add_option("--out", out_file, "output path")->required();

    auto* verify = app.add_subcommand("verify", "Monte Carlo cross-check of the average");
    verify->add_option("--state", state_file, "state JSON file")->required();
    verify->add_option("--samples", samples, "Haar samples");
    verify->add_option("--seed", cfg.seed, "sampling seed");

    auto* atlas = app.add_subcommand("atlas", "optimum, coherent value and bound per spin");
    atlas->add_option("--max-twice-spin", max_ts, "largest twice_spin row")->check(CLI::Range(1, 30));
    atlas->add_option("--restarts", cfg.restarts, "restarts per spin (0 = auto)");
    atlas->add_option("--seed", cfg.seed, "master seed");
    atlas->add_option("--out", out_file, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (compute->parsed()) return cmd_compute(state_file, as_json);
        if (optimize->parsed()) return cmd_optimize(twice_spin, cfg, minimize, out_file);
        if (constel->parsed()) return cmd_constellation(state_file, tol, csv_file, sym_file);
        if (qfunc->parsed()) return cmd_qfunc(state_file, ntheta, nphi, format, out_file);
        if (verify->parsed()) return cmd_verify(state_file, samples, cfg.seed);
        if (atlas->parsed()) return cmd_atlas(max_ts, cfg.restarts, cfg.seed, out_file);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
